#pragma once

#include <cstdint>
#include <vector>

#include "entroscale/metrics.hpp"

namespace entroscale {

// A probability profile by rank (rank 1 first). Vectors built from a
// distribution are non-increasing and sum to 1; downgraded vectors keep bin
// order, whose masses need not be monotone.
struct RankVector {
    std::vector<double> probs;

    std::int64_t scale() const { return std::int64_t(probs.size()); }
};

RankVector rank_vector_of(const SymbolDistribution& dist);

// Destination bin for a source rank under the logarithmic rank-binning map
// j = floor(S^(log_D i)), clamped to [1, S]. Rank 1 always maps to bin 1.
std::int64_t rank_to_bin(std::int64_t rank, std::int64_t d, std::int64_t s);

// Downgrades a D-rank profile to S bins. Mass is conserved exactly: every
// source rank lands in exactly one bin. With resort, bins are re-sorted in
// descending order; default keeps bin order.
RankVector downgrade(const RankVector& p, std::int64_t s, bool resort = false);

// The equivalent 0/1 matrix (D rows, S columns, one 1 per row); provided for
// inspection and tests.
std::vector<std::vector<std::uint8_t>> downgrade_matrix(std::int64_t d, std::int64_t s);

}  // namespace entroscale
