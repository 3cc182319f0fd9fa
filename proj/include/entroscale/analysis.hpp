#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "entroscale/metrics.hpp"

namespace entroscale {

// Entropy-stabilization model h(N) = 1 - h_s + 1/(mu * N^nu).
// h_s is the settled complexity; the entropy asymptote is h_inf = 1 - h_s.
// Both are carried so neither reading of the stabilization value is silent.
struct EntropyModel {
    double h_s = 0.0;
    double mu = 0.0;
    double nu = 0.0;
    double h_inf = 0.0;       // = 1 - h_s
    double rms_error = 0.0;
    std::int64_t n_s = 0;     // stabilization length; 0 when not derivable
    std::vector<std::string> warnings;

    bool warned() const { return !warnings.empty(); }
};

double entropy_model_value(double n, double h_s, double mu, double nu);

// Residuals r_i = model(N_i) - h_i and (optionally) the analytic Jacobian
// d r_i / d (h_s, mu, nu). Exposed so tests can check it against finite
// differences.
void entropy_model_residuals(std::span<const std::pair<double, double>> points,
                             const std::array<double, 3>& params,
                             std::vector<double>* residuals,
                             std::vector<std::array<double, 3>>* jacobian);

// Least-squares fit of (h_s, mu, nu) by Levenberg-Marquardt from a fixed
// initialization grid (nu0 in {0.2, 0.35, 0.5}, asymptote seeded at the
// smallest observed h, mu0 from a linear solve). Deterministic; best grid
// start by RMS wins, ties prefer the smaller nu.
EntropyModel fit_entropy_model(std::span<const std::pair<double, double>> points);

// Smallest integer N whose modeled complexity 1 - h(N) reaches 80% of the
// settled complexity h_s: ceil((1 / (0.2 * h_s * mu))^(1/nu)).
std::int64_t stabilization_length(const EntropyModel& model);

struct TTestResult {
    double t = 0.0;
    double dof = 0.0;
    double p = 1.0;
    std::int64_t n1 = 0, n2 = 0;
    double mean1 = 0.0, mean2 = 0.0;
    double sd1 = 0.0, sd2 = 0.0;
    bool zero_variance = false;
};

// Two-sided Welch unequal-variance t-test; degrees of freedom by
// Welch-Satterthwaite, p through the regularized incomplete beta function.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

double regularized_incomplete_beta(double a, double b, double x);

enum class LengthUnit { Characters, Symbols };

struct SystemSummary {
    std::int64_t n = 0;
    double mean_d = 0.0;
    double sd_d = 0.0;
    double mean_h = 0.0;
    double sd_h_model = 0.0;  // deviation of h measured against the model curve
};

// Statistics over the rows at or past the model's stabilization length.
// The unit selects whether row lengths are token counts or character counts.
SystemSummary system_summary(std::span<const ScaleMetrics> rows, const EntropyModel& model,
                             LengthUnit unit);

}  // namespace entroscale
