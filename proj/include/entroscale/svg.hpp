#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entroscale/analysis.hpp"

namespace entroscale {

// Minimal self-contained SVG writer; coordinates are document pixels.
class SvgDoc {
public:
    SvgDoc(int width, int height);

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double width = 1.0, bool dashed = false);
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                  double width = 1.0);
    void circle(double cx, double cy, double r, const std::string& fill);
    void rect(double x, double y, double w, double h, const std::string& fill,
              const std::string& stroke = "none");
    void text(double x, double y, const std::string& content, double size = 11.0,
              const std::string& anchor = "start", const std::string& fill = "#202020");

    std::string str() const;
    void save(const std::filesystem::path& path) const;

    int width() const { return width_; }
    int height() const { return height_; }

private:
    int width_, height_;
    std::string body_;
};

std::string xml_escape(const std::string& s);

struct ProfileTag {
    std::string label;
    std::int64_t bin_rank = 0;   // rank on the downgraded axis
    std::int64_t orig_rank = 0;  // rank at the original scale
};

// Log-log rank/probability plot of a (possibly downgraded) profile, with
// transition tags and an end tag carrying both scales.
void render_profile_svg(const std::filesystem::path& path, const std::string& title,
                        const std::vector<double>& bin_probs, std::int64_t plotted_scale,
                        std::int64_t original_scale, const std::vector<ProfileTag>& tags);

// Entropy vs length: data points, fitted curve, stabilization-length marker.
void render_fit_svg(const std::filesystem::path& path, const std::string& title,
                    const std::vector<std::pair<double, double>>& points,
                    const EntropyModel& model);

}  // namespace entroscale
