#include "entroscale/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "entroscale/csv.hpp"

namespace entroscale {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Frame {
    double left, top, right, bottom;  // plot area in pixels
    double x0, x1, y0, y1;            // data ranges (already in plot space)

    double px(double x) const { return left + (x - x0) / (x1 - x0) * (right - left); }
    double py(double y) const { return bottom - (y - y0) / (y1 - y0) * (bottom - top); }
};

void draw_frame(SvgDoc& doc, const Frame& f) {
    doc.rect(f.left, f.top, f.right - f.left, f.bottom - f.top, "none", "#404040");
}

// Decade ticks with 10^k labels along a log10 axis.
void log_ticks_x(SvgDoc& doc, const Frame& f) {
    for (int k = int(std::ceil(f.x0 - 1e-9)); k <= int(std::floor(f.x1 + 1e-9)); ++k) {
        const double x = f.px(k);
        doc.line(x, f.bottom, x, f.bottom + 5, "#404040");
        doc.line(x, f.top, x, f.bottom, "#e0e0e0", 0.6);
        doc.text(x, f.bottom + 18, "1e" + std::to_string(k), 10, "middle");
    }
}

void log_ticks_y(SvgDoc& doc, const Frame& f) {
    for (int k = int(std::ceil(f.y0 - 1e-9)); k <= int(std::floor(f.y1 + 1e-9)); ++k) {
        const double y = f.py(k);
        doc.line(f.left - 5, y, f.left, y, "#404040");
        doc.line(f.left, y, f.right, y, "#e0e0e0", 0.6);
        doc.text(f.left - 8, y + 3, "1e" + std::to_string(k), 10, "end");
    }
}

void linear_ticks_y(SvgDoc& doc, const Frame& f, double step) {
    for (double v = std::ceil(f.y0 / step) * step; v <= f.y1 + 1e-9; v += step) {
        const double y = f.py(v);
        doc.line(f.left - 5, y, f.left, y, "#404040");
        doc.line(f.left, y, f.right, y, "#e0e0e0", 0.6);
        doc.text(f.left - 8, y + 3, fmt_double(v), 10, "end");
    }
}

}  // namespace

SvgDoc::SvgDoc(int width, int height) : width_(width), height_(height) {}

void SvgDoc::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                  double width, bool dashed) {
    body_ += "<line x1='" + num(x1) + "' y1='" + num(y1) + "' x2='" + num(x2) + "' y2='" +
             num(y2) + "' stroke='" + stroke + "' stroke-width='" + num(width) + "'";
    if (dashed) body_ += " stroke-dasharray='4 3'";
    body_ += "/>\n";
}

void SvgDoc::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                      double width) {
    body_ += "<polyline fill='none' stroke='" + stroke + "' stroke-width='" + num(width) +
             "' points='";
    for (const auto& [x, y] : pts) body_ += num(x) + "," + num(y) + " ";
    body_ += "'/>\n";
}

void SvgDoc::circle(double cx, double cy, double r, const std::string& fill) {
    body_ += "<circle cx='" + num(cx) + "' cy='" + num(cy) + "' r='" + num(r) + "' fill='" + fill +
             "'/>\n";
}

void SvgDoc::rect(double x, double y, double w, double h, const std::string& fill,
                  const std::string& stroke) {
    body_ += "<rect x='" + num(x) + "' y='" + num(y) + "' width='" + num(w) + "' height='" +
             num(h) + "' fill='" + fill + "' stroke='" + stroke + "'/>\n";
}

void SvgDoc::text(double x, double y, const std::string& content, double size,
                  const std::string& anchor, const std::string& fill) {
    body_ += "<text x='" + num(x) + "' y='" + num(y) + "' font-size='" + num(size) +
             "' font-family='sans-serif' text-anchor='" + anchor + "' fill='" + fill + "'>" +
             xml_escape(content) + "</text>\n";
}

std::string SvgDoc::str() const {
    return "<svg xmlns='http://www.w3.org/2000/svg' width='" + std::to_string(width_) +
           "' height='" + std::to_string(height_) +
           "' viewBox='0 0 " + std::to_string(width_) + " " + std::to_string(height_) +
           "'>\n<rect width='100%' height='100%' fill='white'/>\n" + body_ + "</svg>\n";
}

void SvgDoc::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << str();
    if (!out) throw IoError("write failure: " + path.string());
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '\'': out += "&apos;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

void render_profile_svg(const std::filesystem::path& path, const std::string& title,
                        const std::vector<double>& bin_probs, std::int64_t plotted_scale,
                        std::int64_t original_scale, const std::vector<ProfileTag>& tags) {
    SvgDoc doc(640, 480);
    double min_p = 1.0;
    for (double p : bin_probs) {
        if (p > 0) min_p = std::min(min_p, p);
    }
    Frame f{60, 40, 600, 420,
            0.0, std::max(0.5, std::log10(double(std::max<std::int64_t>(plotted_scale, 2)))),
            std::floor(std::log10(min_p) - 0.2), 0.0};
    draw_frame(doc, f);
    log_ticks_x(doc, f);
    log_ticks_y(doc, f);
    doc.text((f.left + f.right) / 2, 20, title, 13, "middle");
    doc.text((f.left + f.right) / 2, 450, "symbol rank (log)", 11, "middle");
    doc.text(16, (f.top + f.bottom) / 2, "p", 11, "middle");

    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < bin_probs.size(); ++i) {
        if (bin_probs[i] <= 0) continue;  // empty bins cannot appear on a log axis
        pts.emplace_back(f.px(std::log10(double(i + 1))), f.py(std::log10(bin_probs[i])));
    }
    doc.polyline(pts, "#3366aa", 1.2);
    for (const auto& [x, y] : pts) doc.circle(x, y, 1.6, "#3366aa");

    double tag_y = f.top + 16;
    for (const ProfileTag& tag : tags) {
        if (tag.bin_rank < 1) continue;
        const double x = f.px(std::log10(double(tag.bin_rank)));
        doc.line(x, f.top, x, f.bottom, "#aa5533", 0.8, true);
        doc.text(std::min(x + 4, f.right - 4), tag_y,
                 tag.label + " " + std::to_string(tag.bin_rank) + " (" +
                     std::to_string(tag.orig_rank) + ")",
                 10, "start", "#aa5533");
        tag_y += 14;
    }
    doc.text(f.right - 4, f.bottom - 8,
             "scale " + std::to_string(plotted_scale) + " (" + std::to_string(original_scale) + ")",
             10, "end", "#404040");
    doc.save(path);
}

void render_fit_svg(const std::filesystem::path& path, const std::string& title,
                    const std::vector<std::pair<double, double>>& points,
                    const EntropyModel& model) {
    SvgDoc doc(640, 480);
    double n_min = 1e300, n_max = 0;
    for (const auto& [n, h] : points) {
        n_min = std::min(n_min, n);
        n_max = std::max(n_max, n);
    }
    if (model.n_s > 0) n_max = std::max(n_max, double(model.n_s) * 1.3);
    Frame f{60, 40, 600, 420, std::floor(std::log10(n_min)), std::ceil(std::log10(n_max)), 0.0,
            1.0};
    draw_frame(doc, f);
    log_ticks_x(doc, f);
    linear_ticks_y(doc, f, 0.2);
    doc.text((f.left + f.right) / 2, 20, title, 13, "middle");
    doc.text((f.left + f.right) / 2, 450, "length N (log)", 11, "middle");
    doc.text(16, (f.top + f.bottom) / 2, "h", 11, "middle");

    if (model.mu > 0 && model.nu > 0) {
        std::vector<std::pair<double, double>> curve;
        const int samples = 128;
        for (int i = 0; i <= samples; ++i) {
            const double lg = f.x0 + (f.x1 - f.x0) * double(i) / samples;
            const double h = entropy_model_value(std::pow(10.0, lg), model.h_s, model.mu, model.nu);
            if (h < f.y0 || h > f.y1) continue;
            curve.emplace_back(f.px(lg), f.py(h));
        }
        doc.polyline(curve, "#aa3333", 1.4);
        const double y_inf = f.py(model.h_inf);
        doc.line(f.left, y_inf, f.right, y_inf, "#aa3333", 0.8, true);
        doc.text(f.right - 4, y_inf - 4, "h_inf=" + fmt_double(model.h_inf), 10, "end", "#aa3333");
    }
    for (const auto& [n, h] : points) {
        doc.circle(f.px(std::log10(n)), f.py(h), 2.2, "#3366aa");
    }
    if (model.n_s > 0) {
        const double x = f.px(std::log10(double(model.n_s)));
        doc.line(x, f.top, x, f.bottom, "#338855", 1.0, true);
        doc.text(std::min(x + 4, f.right - 4), f.top + 14, "N_s=" + std::to_string(model.n_s), 10,
                 "start", "#338855");
    }
    doc.save(path);
}

}  // namespace entroscale
