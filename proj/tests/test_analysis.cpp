#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "entroscale/analysis.hpp"
#include "entroscale/csv.hpp"

using namespace entroscale;

namespace {

// Noiseless model samples. The decay term can push h past 1 at small N for
// small mu, so the grid starts where the model's own values sit inside (0, 1).
std::vector<std::pair<double, double>> synthetic_points(double h_s, double mu, double nu) {
    double n0 = 500;
    while (entropy_model_value(n0, h_s, mu, nu) >= 0.999) n0 *= 2;
    std::vector<std::pair<double, double>> pts;
    for (double n = n0; pts.size() < 8; n *= 2) {
        pts.emplace_back(n, entropy_model_value(n, h_s, mu, nu));
    }
    return pts;
}

// Independent p-value oracle: two-sided tail of the t distribution computed
// by adaptive Simpson quadrature of the density, no incomplete beta involved.
double t_density(double x, double dof) {
    const double ln_c = std::lgamma((dof + 1) / 2) - std::lgamma(dof / 2) -
                        0.5 * std::log(dof * std::acos(-1.0));
    return std::exp(ln_c - (dof + 1) / 2 * std::log1p(x * x / dof));
}

double simpson(double a, double b, double fa, double fm, double fb, double dof, double eps,
               int depth) {
    const double m = (a + b) / 2;
    const double lm = (a + m) / 2, rm = (m + b) / 2;
    const double flm = t_density(lm, dof), frm = t_density(rm, dof);
    const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15 * eps) {
        return left + right + (left + right - whole) / 15;
    }
    return simpson(a, m, fa, flm, fm, dof, eps / 2, depth - 1) +
           simpson(m, b, fm, frm, fb, dof, eps / 2, depth - 1);
}

double p_two_sided_quadrature(double t, double dof) {
    const double a = 0.0, b = std::abs(t);
    if (b == 0) return 1.0;
    const double body = simpson(a, b, t_density(a, dof), t_density((a + b) / 2, dof),
                                t_density(b, dof), dof, 1e-12, 40);
    return std::clamp(1.0 - 2.0 * body, 0.0, 1.0);
}

}  // namespace

TEST_CASE("model residuals: analytic jacobian matches central differences") {
    std::mt19937_64 rng(21);
    const auto pts = synthetic_points(0.45, 0.4, 0.3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::array<double, 3> th = {0.3 + 0.3 * double(rng() % 1000) / 1000.0,
                                          0.1 + 0.9 * double(rng() % 1000) / 1000.0,
                                          0.2 + 0.3 * double(rng() % 1000) / 1000.0};
        std::vector<double> r0;
        std::vector<std::array<double, 3>> jac;
        entropy_model_residuals(pts, th, &r0, &jac);
        for (int p = 0; p < 3; ++p) {
            const double step = 1e-6 * std::max(1.0, std::abs(th[std::size_t(p)]));
            auto lo = th, hi = th;
            lo[std::size_t(p)] -= step;
            hi[std::size_t(p)] += step;
            std::vector<double> rl, rh;
            entropy_model_residuals(pts, lo, &rl, nullptr);
            entropy_model_residuals(pts, hi, &rh, nullptr);
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double fd = (rh[i] - rl[i]) / (2 * step);
                const double an = jac[i][std::size_t(p)];
                CHECK(an == doctest::Approx(fd).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("fit_entropy_model: noiseless round-trip over the parameter grid") {
    for (double h_s : {0.3, 0.45, 0.6}) {
        for (double mu : {0.1, 0.5, 1.0}) {
            for (double nu : {0.2, 0.35, 0.5}) {
                const auto pts = synthetic_points(h_s, mu, nu);
                const EntropyModel m = fit_entropy_model(pts);
                CHECK(m.h_s == doctest::Approx(h_s).epsilon(1e-3));
                CHECK(m.mu == doctest::Approx(mu).epsilon(1e-3));
                CHECK(m.nu == doctest::Approx(nu).epsilon(1e-3));
                CHECK(m.h_inf == doctest::Approx(1.0 - h_s).epsilon(1e-3));
            }
        }
    }
}

TEST_CASE("fit_entropy_model: degenerate and invalid inputs") {
    std::vector<std::pair<double, double>> flat = {{100, 0.5}, {200, 0.5}, {400, 0.5}, {800, 0.5}};
    const EntropyModel m = fit_entropy_model(flat);
    CHECK(m.warned());

    std::vector<std::pair<double, double>> few = {{100, 0.5}, {200, 0.4}, {400, 0.3}};
    CHECK_THROWS_AS(fit_entropy_model(few), DomainError);
    std::vector<std::pair<double, double>> dup = {{100, 0.5}, {100, 0.4}, {400, 0.3}, {500, 0.2}};
    CHECK_THROWS_AS(fit_entropy_model(dup), DomainError);
    std::vector<std::pair<double, double>> bad_h = {{100, 1.5}, {200, 0.4}, {400, 0.3}, {500, 0.2}};
    CHECK_THROWS_AS(fit_entropy_model(bad_h), DomainError);
    std::vector<std::pair<double, double>> bad_n = {{-5, 0.5}, {200, 0.4}, {400, 0.3}, {500, 0.2}};
    CHECK_THROWS_AS(fit_entropy_model(bad_n), DomainError);
}

TEST_CASE("fit_entropy_model: recovered parameters are a local minimum") {
    const auto pts = synthetic_points(0.42, 0.3, 0.35);
    const EntropyModel m = fit_entropy_model(pts);
    auto rms_at = [&](double h_s, double mu, double nu) {
        double ss = 0;
        for (const auto& [n, h] : pts) {
            const double r = entropy_model_value(n, h_s, mu, nu) - h;
            ss += r * r;
        }
        return std::sqrt(ss / double(pts.size()));
    };
    const double base = rms_at(m.h_s, m.mu, m.nu);
    for (double f : {0.99, 1.01}) {
        CHECK(rms_at(m.h_s * f, m.mu, m.nu) > base);
        CHECK(rms_at(m.h_s, m.mu * f, m.nu) > base);
        CHECK(rms_at(m.h_s, m.mu, m.nu * f) > base);
    }
}

TEST_CASE("stabilization_length: closed form") {
    EntropyModel m;
    m.h_s = 0.5;
    m.mu = 1.0;
    m.nu = 1.0;
    CHECK(stabilization_length(m) == 10);  // need 1/N <= 0.1

    EntropyModel m2 = m;
    m2.mu = 2.0;
    CHECK(stabilization_length(m2) < stabilization_length(m));  // doubling mu shrinks N_s

    EntropyModel bad;
    bad.h_s = -0.1;
    bad.mu = 1;
    bad.nu = 1;
    CHECK_THROWS_AS(stabilization_length(bad), DomainError);
}

TEST_CASE("stabilization_length: closed form agrees with a curve scan") {
    std::mt19937_64 rng(31);
    auto complexity = [](const EntropyModel& m, double n) {
        return 1.0 - entropy_model_value(n, m.h_s, m.mu, m.nu);
    };
    for (int trial = 0; trial < 1000; ++trial) {
        EntropyModel m;
        m.h_s = 0.3 + 0.3 * double(rng() % 1000) / 1000.0;
        m.mu = 0.1 + 0.9 * double(rng() % 1000) / 1000.0;
        m.nu = 0.2 + 0.3 * double(rng() % 1000) / 1000.0;
        const std::int64_t n_s = stabilization_length(m);
        const double target = 0.8 * m.h_s;
        // Doubling search + bisection over the (increasing) complexity curve,
        // using only curve evaluations.
        std::int64_t hi = 1;
        while (complexity(m, double(hi)) < target && hi < (std::int64_t(1) << 62)) hi *= 2;
        std::int64_t lo = hi / 2;
        while (lo + 1 < hi) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (complexity(m, double(mid)) >= target) hi = mid;
            else lo = mid;
        }
        const std::int64_t scanned = complexity(m, 1.0) >= target ? 1 : hi;
        CHECK(n_s == scanned);
    }
}

TEST_CASE("welch_t_test: identical samples give p = 1") {
    const std::vector<double> a = {1, 2, 3, 4, 5};
    const TTestResult r = welch_t_test(a, a);
    CHECK(r.t == 0.0);
    CHECK(r.p == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("welch_t_test: reference pair (1..5) vs (2..6)") {
    const std::vector<double> a = {1, 2, 3, 4, 5};
    const std::vector<double> b = {2, 3, 4, 5, 6};
    const TTestResult r = welch_t_test(a, b);
    CHECK(r.t == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.dof == doctest::Approx(8.0).epsilon(1e-12));
    // Cross-checked against an independent statistical implementation.
    CHECK(r.p == doctest::Approx(0.3465935071).epsilon(1e-6));
}

TEST_CASE("welch_t_test: frozen external reference values") {
    // Expected (t, p, dof) computed with an independent reference
    // implementation on these exact samples.
    const std::vector<double> x0 = {-1.11188, 0.318902, 0.279041, 1.010515, -0.580878,
                                    -0.52517, -0.57138, -0.924083, -2.612549};
    const std::vector<double> y0 = {1.925555, 1.724668, -1.785814, -0.142069, -0.61361, -0.555016};
    TTestResult r = welch_t_test(x0, y0);
    CHECK(r.t == doctest::Approx(-0.899141075825).epsilon(1e-9));
    CHECK(r.p == doctest::Approx(0.393705497327).epsilon(1e-9));
    CHECK(r.dof == doctest::Approx(8.371182534).epsilon(1e-9));

    const std::vector<double> x1 = {-2.139621, -0.024455, 0.355551, 0.417011, 0.832462};
    const std::vector<double> y1 = {0.059901, 0.455242,  0.642689,  1.496982, 0.289672,
                                    0.45021,  -0.623615, -0.667573, 1.923264};
    r = welch_t_test(x1, y1);
    CHECK(r.t == doctest::Approx(-0.935720045385).epsilon(1e-9));
    CHECK(r.p == doctest::Approx(0.383157189514).epsilon(1e-9));

    const std::vector<double> x2 = {1.580851, -0.22945, 0.389349, -1.265119, 1.091992,
                                    2.778313, 1.19364,  0.218638, 0.881761,  -1.009085};
    const std::vector<double> y2 = {-1.874941, 1.660551, -0.307212, -1.520017, -0.820887};
    r = welch_t_test(x2, y2);
    CHECK(r.t == doctest::Approx(1.554642867424).epsilon(1e-9));
    CHECK(r.p == doctest::Approx(0.162871376888).epsilon(1e-9));
}

TEST_CASE("welch_t_test: p matches quadrature oracle on random pairs") {
    std::mt19937_64 rng(77);
    auto normal = [&rng](double mean, double sd) {
        // Box-Muller from the raw engine to keep draws platform-stable.
        const double u1 = (double(rng() % 1000000) + 0.5) / 1000000.0;
        const double u2 = double(rng() % 1000000) / 1000000.0;
        return mean + sd * std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::acos(-1.0) * u2);
    };
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a, b;
        const int n1 = 3 + int(rng() % 12), n2 = 3 + int(rng() % 12);
        for (int i = 0; i < n1; ++i) a.push_back(normal(0.0, 1.0));
        for (int i = 0; i < n2; ++i) b.push_back(normal(0.4, 1.6));
        const TTestResult r = welch_t_test(a, b);
        const double p_ref = p_two_sided_quadrature(r.t, r.dof);
        CHECK(r.p == doctest::Approx(p_ref).epsilon(1e-6));
    }
}

TEST_CASE("welch_t_test: symmetry, zero variance, errors") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a, b;
        for (int i = 0; i < 6; ++i) a.push_back(double(rng() % 100));
        for (int i = 0; i < 9; ++i) b.push_back(double(rng() % 100) + 10);
        const TTestResult ab = welch_t_test(a, b);
        const TTestResult ba = welch_t_test(b, a);
        CHECK(ab.t == doctest::Approx(-ba.t).epsilon(1e-12));
        CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-12));
        CHECK(ab.dof == doctest::Approx(ba.dof).epsilon(1e-12));
    }

    const std::vector<double> c1 = {2, 2, 2};
    const std::vector<double> c2 = {5, 5, 5};
    const TTestResult same = welch_t_test(c1, c1);
    CHECK(same.zero_variance);
    CHECK(same.p == 1.0);
    const TTestResult diff = welch_t_test(c1, c2);
    CHECK(diff.zero_variance);
    CHECK(diff.p == 0.0);

    CHECK_THROWS_AS(welch_t_test(std::vector<double>{1.0}, c1), DomainError);
}

TEST_CASE("system_summary: filter, means, model-relative deviation") {
    EntropyModel m;
    m.h_s = 0.45;
    m.mu = 0.3;
    m.nu = 0.35;
    m.h_inf = 0.55;
    m.n_s = 1000;

    SUBCASE("single row has zero deviations") {
        std::vector<ScaleMetrics> rows(1);
        rows[0].n_tokens = 5000;
        rows[0].d = 0.05;
        rows[0].h = 0.6;
        const SystemSummary s = system_summary(rows, m, LengthUnit::Symbols);
        CHECK(s.n == 1);
        CHECK(s.sd_d == 0.0);
        CHECK(s.sd_h_model == 0.0);
        CHECK(s.mean_d == doctest::Approx(0.05));
    }

    SUBCASE("rows exactly on the curve have zero model-relative sd") {
        std::vector<ScaleMetrics> rows;
        for (double n : {2000.0, 4000.0, 8000.0, 16000.0}) {
            ScaleMetrics r;
            r.n_tokens = std::int64_t(n);
            r.d = 0.04;
            r.h = entropy_model_value(n, m.h_s, m.mu, m.nu);
            rows.push_back(r);
        }
        const SystemSummary s = system_summary(rows, m, LengthUnit::Symbols);
        CHECK(s.n == 4);
        CHECK(s.sd_h_model == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(s.sd_d == doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("rows below the stabilization length are excluded") {
        std::vector<ScaleMetrics> rows(3);
        rows[0].n_tokens = 10;
        rows[1].n_tokens = 999;
        rows[2].n_tokens = 1000;
        const SystemSummary s = system_summary(rows, m, LengthUnit::Symbols);
        CHECK(s.n == 1);
        rows[2].n_tokens = 999;
        CHECK_THROWS_AS(system_summary(rows, m, LengthUnit::Symbols), DomainError);
    }

    SUBCASE("characters unit reads n_chars") {
        std::vector<ScaleMetrics> rows(2);
        rows[0].n_chars = 1500;
        rows[0].n_tokens = 10;
        rows[1].n_chars = 100;
        rows[1].n_tokens = 99999;
        const SystemSummary s = system_summary(rows, m, LengthUnit::Characters);
        CHECK(s.n == 1);
    }
}

TEST_CASE("fit over bundled english/spanish reference tables") {
    auto load_points = [](const std::string& name, int col_n, int col_h) {
        std::ifstream in(std::filesystem::path(ENTROSCALE_SOURCE_DIR) / "data/reference" / name);
        REQUIRE(in.good());
        std::string line;
        std::getline(in, line);
        std::vector<std::pair<double, double>> pts;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = csv_split(line);
            const double n = std::stod(f[std::size_t(col_n)]);
            const double h = std::stod(f[std::size_t(col_h)]);
            if (n <= 0) continue;
            bool dup = false;  // the source tables carry one duplicated row
            for (const auto& [pn, ph] : pts) {
                if (pn == n) dup = true;
            }
            if (!dup) pts.emplace_back(n, h);
        }
        return pts;
    };

    // Frozen optima independently verified with a reference least-squares
    // implementation on the same tables (asymptote, mu, nu, rms).
    const EntropyModel eng = fit_entropy_model(load_points("english.csv", 4, 6));
    CHECK(eng.h_inf == doctest::Approx(0.3465).epsilon(5e-3));
    CHECK(eng.mu == doctest::Approx(0.5781).epsilon(2e-2));
    CHECK(eng.nu == doctest::Approx(0.2266).epsilon(2e-2));
    CHECK(eng.rms_error == doctest::Approx(0.00715).epsilon(2e-2));
    // ... and strictly better than the reference parameter triple on the
    // same data (whose rms is 0.00957 under either reading of the triple).
    CHECK(eng.rms_error < 0.0095);

    const EntropyModel spa = fit_entropy_model(load_points("spanish.csv", 4, 6));
    CHECK(spa.h_inf == doctest::Approx(0.3643).epsilon(5e-3));
    CHECK(spa.rms_error == doctest::Approx(0.00727).epsilon(2e-2));

    // Post-stabilization English rows: Table-3-style summary at N_s = 12000
    // symbols. Means match the recorded 0.5239 well inside +-0.05.
    std::vector<ScaleMetrics> rows;
    {
        std::ifstream in(std::filesystem::path(ENTROSCALE_SOURCE_DIR) / "data/reference/english.csv");
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = csv_split(line);
            ScaleMetrics r;
            r.scale = Scale::Fundamental;
            r.n_chars = std::stoll(f[1]);
            r.n_tokens = std::stoll(f[4]);
            r.d = std::stod(f[5]);
            r.h = std::stod(f[6]);
            if (r.n_tokens > 0) rows.push_back(r);
        }
    }
    EntropyModel table3 = eng;
    table3.n_s = 12000;
    const SystemSummary s = system_summary(rows, table3, LengthUnit::Symbols);
    CHECK(s.n == 47);
    CHECK(s.mean_h == doctest::Approx(0.5239).epsilon(0.002));
}
