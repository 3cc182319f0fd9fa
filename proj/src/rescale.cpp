#include "entroscale/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace entroscale {

RankVector rank_vector_of(const SymbolDistribution& dist) {
    if (dist.total < 1) throw DomainError("empty distribution");
    RankVector v;
    v.probs.reserve(dist.entries.size());
    for (const SymbolEntry& e : dist.entries) {
        v.probs.push_back(double(e.count) / double(dist.total));
    }
    return v;
}

std::int64_t rank_to_bin(std::int64_t rank, std::int64_t d, std::int64_t s) {
    if (rank <= 1) return 1;
    // S^(log_D i); the 1e-9 nudge keeps mathematically integral values (the
    // S == D identity in particular) from flooring one bin short.
    const double x = std::exp(std::log(double(s)) * std::log(double(rank)) / std::log(double(d)));
    const auto j = std::int64_t(std::floor(x + 1e-9));
    return std::clamp<std::int64_t>(j, 1, s);
}

RankVector downgrade(const RankVector& p, std::int64_t s, bool resort) {
    const std::int64_t d = p.scale();
    if (d < 2) throw DomainError("no downgrade defined for scale 1");
    if (s < 1 || s > d) throw DomainError("invalid-scale: S must be in [1, D]");
    RankVector out;
    out.probs.assign(std::size_t(s), 0.0);
    for (std::int64_t i = 1; i <= d; ++i) {
        out.probs[std::size_t(rank_to_bin(i, d, s) - 1)] += p.probs[std::size_t(i - 1)];
    }
    if (resort) {
        std::sort(out.probs.begin(), out.probs.end(), std::greater<double>());
    }
    return out;
}

std::vector<std::vector<std::uint8_t>> downgrade_matrix(std::int64_t d, std::int64_t s) {
    if (d < 2) throw DomainError("no downgrade defined for scale 1");
    if (s < 1 || s > d) throw DomainError("invalid-scale: S must be in [1, D]");
    std::vector<std::vector<std::uint8_t>> g(std::size_t(d), std::vector<std::uint8_t>(std::size_t(s), 0));
    for (std::int64_t i = 1; i <= d; ++i) {
        g[std::size_t(i - 1)][std::size_t(rank_to_bin(i, d, s) - 1)] = 1;
    }
    return g;
}

}  // namespace entroscale
