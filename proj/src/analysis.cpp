#include "entroscale/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace entroscale {

namespace {

// Solves a symmetric positive-definite 3x3 system by Gaussian elimination
// with partial pivoting. Returns false on a (numerically) singular matrix.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> rhs,
            std::array<double, 3>* out) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        }
        if (std::abs(m[pivot][col]) < 1e-300) return false;
        std::swap(m[col], m[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 3; ++c) m[r][c] -= f * m[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    for (int col = 2; col >= 0; --col) {
        double v = rhs[col];
        for (int c = col + 1; c < 3; ++c) v -= m[col][c] * (*out)[c];
        (*out)[col] = v / m[col][col];
    }
    return true;
}

double rms_of(std::span<const std::pair<double, double>> points, const std::array<double, 3>& th) {
    double ss = 0;
    for (const auto& [n, h] : points) {
        const double r = entropy_model_value(n, th[0], th[1], th[2]) - h;
        ss += r * r;
    }
    return std::sqrt(ss / double(points.size()));
}

// Levenberg-Marquardt minimization of the squared residuals, keeping mu and
// nu positive by step rejection. Deterministic.
std::array<double, 3> levenberg_marquardt(std::span<const std::pair<double, double>> points,
                                          std::array<double, 3> th, bool* converged) {
    std::vector<double> r;
    std::vector<std::array<double, 3>> jac;
    double lambda = 1e-3;
    *converged = false;
    double prev_ss = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 400; ++iter) {
        entropy_model_residuals(points, th, &r, &jac);
        double ss = 0;
        for (double v : r) ss += v * v;

        std::array<std::array<double, 3>, 3> jtj{};
        std::array<double, 3> jtr{};
        for (std::size_t i = 0; i < r.size(); ++i) {
            for (int a = 0; a < 3; ++a) {
                jtr[a] += jac[i][a] * r[i];
                for (int b = 0; b < 3; ++b) jtj[a][b] += jac[i][a] * jac[i][b];
            }
        }

        bool stepped = false;
        for (int tries = 0; tries < 40; ++tries) {
            auto damped = jtj;
            for (int a = 0; a < 3; ++a) damped[a][a] += lambda * (jtj[a][a] > 0 ? jtj[a][a] : 1.0);
            std::array<double, 3> step{};
            if (!solve3(damped, {-jtr[0], -jtr[1], -jtr[2]}, &step)) {
                lambda *= 4;
                continue;
            }
            std::array<double, 3> cand{th[0] + step[0], th[1] + step[1], th[2] + step[2]};
            // mu, nu stay positive and the asymptote 1 - h_s stays in (0, 1).
            if (cand[1] <= 1e-9 || cand[2] <= 1e-9 || cand[0] <= 1e-6 || cand[0] >= 1.0 - 1e-6) {
                lambda *= 4;
                continue;
            }
            double cand_ss = 0;
            for (const auto& [n, h] : points) {
                const double rv = entropy_model_value(n, cand[0], cand[1], cand[2]) - h;
                cand_ss += rv * rv;
            }
            if (cand_ss <= ss) {
                const double step_norm =
                    std::sqrt(step[0] * step[0] + step[1] * step[1] + step[2] * step[2]);
                th = cand;
                lambda = std::max(lambda * 0.5, 1e-12);
                stepped = true;
                if (ss - cand_ss <= 1e-16 * (1 + cand_ss) || step_norm < 1e-12) {
                    *converged = true;
                    return th;
                }
                break;
            }
            lambda *= 4;
        }
        if (!stepped) {
            *converged = true;  // no descent direction left: local minimum
            return th;
        }
        if (std::abs(prev_ss - ss) <= 1e-18 * (1 + ss)) {
            *converged = true;
            return th;
        }
        prev_ss = ss;
    }
    return th;
}

double sample_mean(std::span<const double> xs) {
    double s = 0;
    for (double x : xs) s += x;
    return s / double(xs.size());
}

double sample_sd(std::span<const double> xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / double(xs.size() - 1));
}

// Continued-fraction evaluation for the regularized incomplete beta.
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double entropy_model_value(double n, double h_s, double mu, double nu) {
    return 1.0 - h_s + 1.0 / (mu * std::pow(n, nu));
}

void entropy_model_residuals(std::span<const std::pair<double, double>> points,
                             const std::array<double, 3>& params,
                             std::vector<double>* residuals,
                             std::vector<std::array<double, 3>>* jacobian) {
    const double h_s = params[0], mu = params[1], nu = params[2];
    residuals->resize(points.size());
    if (jacobian) jacobian->resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [n, h] = points[i];
        const double pw = std::pow(n, nu);
        const double tail = 1.0 / (mu * pw);
        (*residuals)[i] = 1.0 - h_s + tail - h;
        if (jacobian) {
            (*jacobian)[i] = {-1.0, -tail / mu, -tail * std::log(n)};
        }
    }
}

EntropyModel fit_entropy_model(std::span<const std::pair<double, double>> points) {
    if (points.size() < 4) throw DomainError("insufficient-points: need >= 4 (N, h) points");
    {
        std::unordered_set<double> ns;
        for (const auto& [n, h] : points) {
            if (!(n > 0)) throw DomainError("lengths must be positive");
            if (!(h > 0.0) || !(h < 1.0)) throw DomainError("h values must lie in (0, 1)");
            if (!ns.insert(n).second) throw DomainError("lengths must be distinct");
        }
    }

    double h_min = 1.0, h_max = 0.0;
    for (const auto& [n, h] : points) {
        h_min = std::min(h_min, h);
        h_max = std::max(h_max, h);
    }

    EntropyModel model;
    if (h_max - h_min < 1e-12) {
        // Flat series: the decay exponent cannot be identified.
        model.h_inf = h_min;
        model.h_s = 1.0 - h_min;
        model.mu = 0.0;
        model.nu = 0.0;
        model.rms_error = 0.0;
        model.warnings.push_back("constant series: nu unidentifiable");
        return model;
    }

    const double h_inf0 = h_min;  // asymptote seed; h_s0 = 1 - min(h)
    std::array<double, 3> best{};
    double best_rms = std::numeric_limits<double>::infinity();
    bool best_converged = false;
    bool have_best = false;
    for (const double nu0 : {0.2, 0.35, 0.5}) {
        // mu0 from the through-origin linear solve of 1/(h - h_inf0) ~ mu * N^nu0.
        double sxy = 0, sxx = 0;
        for (const auto& [n, h] : points) {
            const double gap = h - h_inf0;
            if (gap < 1e-9) continue;
            const double x = std::pow(n, nu0);
            sxy += x / gap;
            sxx += x * x;
        }
        double mu0 = sxx > 0 ? sxy / sxx : 1.0;
        if (!(mu0 > 1e-9)) mu0 = 1.0;

        bool converged = false;
        const std::array<double, 3> th =
            levenberg_marquardt(points, {1.0 - h_inf0, mu0, nu0}, &converged);
        const double rms = rms_of(points, th);
        const bool better = !have_best || rms < best_rms - 1e-15 ||
                            (std::abs(rms - best_rms) <= 1e-15 && th[2] < best[2]);
        if (better) {
            best = th;
            best_rms = rms;
            best_converged = converged;
            have_best = true;
        }
    }

    model.h_s = best[0];
    model.mu = best[1];
    model.nu = best[2];
    model.h_inf = 1.0 - best[0];
    model.rms_error = best_rms;
    if (!best_converged) model.warnings.push_back("iteration cap reached: best-so-far returned");
    if (model.h_s <= 2e-6 || model.h_s >= 1.0 - 2e-6) {
        model.warnings.push_back("fit pinned at the h_s bound: asymptote poorly identified");
    }
    if (model.h_s > 0 && model.mu > 0 && model.nu > 0) {
        try {
            model.n_s = stabilization_length(model);
        } catch (const DomainError&) {
            model.n_s = 0;
            model.warnings.push_back("stabilization length overflows");
        }
    } else {
        model.warnings.push_back("stabilization length not derivable");
    }
    return model;
}

std::int64_t stabilization_length(const EntropyModel& model) {
    if (!(model.h_s > 0) || !(model.mu > 0) || !(model.nu > 0)) {
        throw DomainError("invalid-model: requires h_s, mu, nu > 0");
    }
    // 1/(mu * N^nu) <= 0.2 * h_s  =>  N >= (1/(0.2 h_s mu))^(1/nu)
    const double x = std::pow(1.0 / (0.2 * model.h_s * model.mu), 1.0 / model.nu);
    const double n = std::ceil(x - 1e-9);
    if (!(n >= 1.0)) return 1;
    if (n >= 9.2e18) throw DomainError("invalid-model: stabilization length overflows");
    return std::int64_t(n);
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw DomainError("insufficient-samples: need >= 2 per side");
    }
    TTestResult res;
    res.n1 = std::int64_t(a.size());
    res.n2 = std::int64_t(b.size());
    res.mean1 = sample_mean(a);
    res.mean2 = sample_mean(b);
    res.sd1 = sample_sd(a, res.mean1);
    res.sd2 = sample_sd(b, res.mean2);

    const double va = res.sd1 * res.sd1 / double(res.n1);
    const double vb = res.sd2 * res.sd2 / double(res.n2);
    const double se2 = va + vb;
    if (se2 <= 0.0) {
        res.zero_variance = true;
        res.dof = double(res.n1 + res.n2 - 2);
        if (res.mean1 == res.mean2) {
            res.t = 0.0;
            res.p = 1.0;
        } else {
            res.t = res.mean1 > res.mean2 ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity();
            res.p = 0.0;
        }
        return res;
    }
    res.t = (res.mean1 - res.mean2) / std::sqrt(se2);
    res.dof = se2 * se2 /
              (va * va / double(res.n1 - 1) + vb * vb / double(res.n2 - 1));
    res.p = regularized_incomplete_beta(res.dof / 2.0, 0.5,
                                        res.dof / (res.dof + res.t * res.t));
    res.p = std::clamp(res.p, 0.0, 1.0);
    return res;
}

SystemSummary system_summary(std::span<const ScaleMetrics> rows, const EntropyModel& model,
                             LengthUnit unit) {
    std::vector<double> ds, hs, ns;
    for (const ScaleMetrics& r : rows) {
        const auto n = unit == LengthUnit::Symbols ? r.n_tokens : r.n_chars;
        if (n >= model.n_s) {
            ds.push_back(r.d);
            hs.push_back(r.h);
            ns.push_back(double(n));
        }
    }
    if (ds.empty()) throw DomainError("empty-after-filter: no rows at or past N_s");

    SystemSummary s;
    s.n = std::int64_t(ds.size());
    s.mean_d = sample_mean(ds);
    s.sd_d = sample_sd(ds, s.mean_d);
    s.mean_h = sample_mean(hs);
    if (hs.size() >= 2) {
        double ss = 0;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const double pred = entropy_model_value(ns[i], model.h_s, model.mu, model.nu);
            ss += (hs[i] - pred) * (hs[i] - pred);
        }
        s.sd_h_model = std::sqrt(ss / double(hs.size() - 1));
    }
    return s;
}

}  // namespace entroscale
