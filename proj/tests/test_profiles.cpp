#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "entroscale/csv.hpp"
#include "entroscale/profiles.hpp"

using namespace entroscale;

namespace {

CorpusEntry entry(std::string id, std::string category, Text text) {
    CorpusEntry e;
    e.id = std::move(id);
    e.category = std::move(category);
    e.text = std::move(text);
    return e;
}

// Bundled per-text reference rows: (char_L, fs_L, fs_d, fs_h).
struct RefRow {
    double char_l, fs_l, fs_d, fs_h;
};

std::vector<RefRow> load_reference(const std::string& name) {
    std::ifstream in(std::filesystem::path(ENTROSCALE_SOURCE_DIR) / "data/reference" / name);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);  // header
    std::vector<RefRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = csv_split(line);
        rows.push_back({std::stod(f[1]), std::stod(f[4]), std::stod(f[5]), std::stod(f[6])});
    }
    return rows;
}

}  // namespace

TEST_CASE("union_profile: single text equals its own profile") {
    const std::vector<CorpusEntry> one = {entry("a", "english", U"aab")};
    const SystemProfile p = union_profile(one, Scale::Character);
    CHECK(p.system == "english");
    CHECK(p.dist.total == 3);
    CHECK(p.dist.distinct() == 2);
    CHECK(p.ranks.probs[0] == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(union_profile(std::vector<CorpusEntry>{}, Scale::Character), DomainError);
}

TEST_CASE("union_profile: disjoint symbol sets add up") {
    const std::vector<CorpusEntry> two = {entry("a", "x", U"aabb"), entry("b", "x", U"ccdd")};
    const SystemProfile p = union_profile(two, Scale::Character);
    CHECK(p.dist.total == 8);
    CHECK(p.dist.distinct() == 4);
    // Equal counts tie-break lexicographically by symbol.
    CHECK(p.dist.entries[0].symbol == U"a");
    CHECK(p.dist.entries[3].symbol == U"d");
}

TEST_CASE("union_profile: counts merged by symbol across texts") {
    const std::vector<CorpusEntry> two = {entry("a", "x", U"abab"), entry("b", "x", U"ab")};
    const SystemProfile p = union_profile(two, Scale::Character);
    CHECK(p.dist.total == 6);
    CHECK(p.dist.distinct() == 2);
    CHECK(p.dist.entries[0].count == 3);
    double sum = 0;
    for (double q : p.ranks.probs) sum += q;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 1; i < p.ranks.probs.size(); ++i) {
        CHECK(p.ranks.probs[i] <= p.ranks.probs[i - 1] + 1e-15);
    }
}

TEST_CASE("detect_transition: ranks of symbol-length change") {
    SymbolDistribution d;
    d.entries = {{U" ", 10}, {U"of", 5}, {U"e", 2}};
    d.total = 17;
    const Transition t = detect_transition(d);
    REQUIRE(t.first_multichar_rank.has_value());
    REQUIRE(t.last_singlechar_rank.has_value());
    CHECK(*t.first_multichar_rank == 2);
    CHECK(t.first_multichar_symbol == U"of");
    CHECK(*t.last_singlechar_rank == 3);
    CHECK(t.last_singlechar_symbol == U"e");

    SymbolDistribution all_single;
    all_single.entries = {{U"a", 3}, {U"b", 1}};
    all_single.total = 4;
    const Transition t2 = detect_transition(all_single);
    CHECK_FALSE(t2.first_multichar_rank.has_value());
    CHECK(*t2.last_singlechar_rank == 2);

    SymbolDistribution all_multi;
    all_multi.entries = {{U"ab", 3}, {U"cd", 1}};
    all_multi.total = 4;
    const Transition t3 = detect_transition(all_multi);
    CHECK(*t3.first_multichar_rank == 1);
    CHECK_FALSE(t3.last_singlechar_rank.has_value());
}

TEST_CASE("detect_transition: invariant under probability scaling") {
    SymbolDistribution d;
    d.entries = {{U"xy", 60}, {U"a", 30}, {U"b", 10}};
    d.total = 100;
    const Transition t1 = detect_transition(d);
    for (auto& e : d.entries) e.count *= 7;
    d.total *= 7;
    const Transition t2 = detect_transition(d);
    CHECK(*t1.first_multichar_rank == *t2.first_multichar_rank);
    CHECK(*t1.last_singlechar_rank == *t2.last_singlechar_rank);
}

TEST_CASE("heaps_series: exact synthetic recovery") {
    std::vector<ScaleMetrics> rows;
    for (double n : {100.0, 400.0, 1600.0, 6400.0, 25600.0}) {
        ScaleMetrics m;
        m.n_chars = std::int64_t(n);
        m.distinct = std::int64_t(std::llround(2.0 * std::sqrt(n)));
        rows.push_back(m);
    }
    const HeapsSeries s = heaps_series(rows);
    CHECK(s.beta == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(s.k == doctest::Approx(2.0).epsilon(2e-2));

    // Exact powers (D not rounded) recover to high precision.
    std::vector<ScaleMetrics> exact;
    for (double n : {64.0, 256.0, 1024.0, 4096.0}) {
        ScaleMetrics m;
        m.n_chars = std::int64_t(n);
        m.distinct = std::int64_t(2.0 * std::sqrt(n));  // all integral
        exact.push_back(m);
    }
    const HeapsSeries se = heaps_series(exact);
    CHECK(se.beta == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(se.k == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(se.residual_rms == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("heaps_series: constant diversity gives zero slope; errors") {
    std::vector<ScaleMetrics> rows;
    for (double n : {10.0, 100.0, 1000.0}) {
        ScaleMetrics m;
        m.n_chars = std::int64_t(n);
        m.distinct = 7;
        rows.push_back(m);
    }
    CHECK(heaps_series(rows).beta == doctest::Approx(0.0).epsilon(1e-12));

    rows.resize(2);
    CHECK_THROWS_AS(heaps_series(rows), DomainError);
    std::vector<ScaleMetrics> dup(5);
    for (auto& m : dup) {
        m.n_chars = 50;
        m.distinct = 5;
    }
    CHECK_THROWS_AS(heaps_series(dup), DomainError);  // N values not distinct
}

TEST_CASE("heaps_series: bundled english reference rows grow sublinearly") {
    const auto ref = load_reference("english.csv");
    REQUIRE(ref.size() > 100);
    std::vector<ScaleMetrics> rows;
    for (const RefRow& r : ref) {
        if (r.fs_l <= 0) continue;
        ScaleMetrics m;
        m.scale = Scale::Fundamental;
        m.n_chars = std::int64_t(r.char_l);
        m.n_tokens = std::int64_t(r.fs_l);
        m.distinct = std::int64_t(std::llround(r.fs_d * r.fs_l));
        m.d = r.fs_d;
        m.h = r.fs_h;
        rows.push_back(m);
    }
    const HeapsSeries s = heaps_series(rows);
    CHECK(s.beta > 0.0);
    CHECK(s.beta < 1.0);
    CHECK(s.beta == doctest::Approx(0.71).epsilon(0.08));  // regression guard
}

TEST_CASE("heaps_series: slope rises with vocabulary growth rate") {
    // Token stream where a new type appears with probability
    // (1 + alpha * D) / (1 + n): vocabulary grows like n^alpha, so the
    // fitted exponent should track the generator's discount alpha.
    auto beta_for = [](double alpha) {
        std::mt19937_64 rng(42);
        std::vector<ScaleMetrics> rows;
        std::int64_t types = 1;
        std::int64_t n = 1;
        for (std::int64_t target : {200, 800, 3200, 12800, 51200}) {
            while (n < target) {
                ++n;
                const double u = double(rng() % 1000000) / 1000000.0;
                if (u < (1.0 + alpha * double(types)) / (1.0 + double(n))) ++types;
            }
            ScaleMetrics m;
            m.n_chars = n;
            m.distinct = types;
            rows.push_back(m);
        }
        return heaps_series(rows).beta;
    };
    const double low = beta_for(0.2);
    const double mid = beta_for(0.5);
    const double high = beta_for(0.8);
    CHECK(low < mid);
    CHECK(mid < high);
    CHECK(mid == doctest::Approx(0.5).epsilon(0.25));
}
