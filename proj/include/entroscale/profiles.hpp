#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "entroscale/corpus.hpp"
#include "entroscale/rescale.hpp"

namespace entroscale {

// Rank/frequency profile of one communication system, built from the union
// of its member texts' symbol counts (each text tiled independently).
struct SystemProfile {
    std::string system;
    SymbolDistribution dist;  // merged counts, rank order
    RankVector ranks;
    std::optional<std::int64_t> first_multichar_rank;
    std::optional<std::int64_t> last_singlechar_rank;
    Text first_multichar_symbol;
    Text last_singlechar_symbol;
};

SymbolDistribution merge_distributions(std::span<const SymbolDistribution> parts);

SystemProfile profile_from_distribution(std::string system, SymbolDistribution dist);

SystemProfile union_profile(std::span<const CorpusEntry> texts, Scale scale,
                            const SearchBudget* budget = nullptr);

struct Transition {
    std::optional<std::int64_t> first_multichar_rank;
    std::optional<std::int64_t> last_singlechar_rank;
    Text first_multichar_symbol;
    Text last_singlechar_symbol;
};

// Lowest rank whose symbol spans more than one character, and highest rank
// whose symbol is a single character.
Transition detect_transition(const SymbolDistribution& dist);

struct HeapsSeries {
    std::vector<std::pair<double, double>> points;  // (N_chars, D) per text
    double k = 0.0;
    double beta = 0.0;
    double residual_rms = 0.0;  // in log space
};

// Least-squares fit of log D against log N over per-text rows: D ~ k * N^beta.
HeapsSeries heaps_series(std::span<const ScaleMetrics> rows);

}  // namespace entroscale
