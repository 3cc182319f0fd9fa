#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "entroscale/scales.hpp"

namespace entroscale {

struct SymbolEntry {
    Text symbol;
    std::int64_t count = 0;
};

// Symbol inventory of one description: unique symbols with occurrence counts,
// ordered by descending count (ties broken lexicographically by symbol).
// Probabilities are count/total.
struct SymbolDistribution {
    std::vector<SymbolEntry> entries;
    std::int64_t total = 0;  // N, token count

    std::int64_t distinct() const { return std::int64_t(entries.size()); }  // D
};

SymbolDistribution distribution_of(const Tiling& tiling);
SymbolDistribution distribution_of_tokens(std::span<const Text> tokens);

// Normalized entropy h = -sum p_i log_D p_i, clamped to [0,1]. A single
// distinct symbol is the degenerate case and yields 0.
double entropy(const SymbolDistribution& dist);

// d = D / N.
double specific_diversity(const SymbolDistribution& dist);

struct ScaleMetrics {
    Scale scale = Scale::Character;
    std::int64_t n_chars = 0;
    std::int64_t n_tokens = 0;
    std::int64_t distinct = 0;
    double d = 0.0;
    double h = 0.0;
    bool degenerate = false;
};

ScaleMetrics metrics_of(Scale scale, std::int64_t n_chars, const SymbolDistribution& dist);

// Tiles the text at the requested scale and reduces it to scalar metrics.
// n_chars is always the character count, whatever the scale. The budget is
// used only at the fundamental scale (defaults apply when null).
ScaleMetrics metrics_at_scale(TextView text, Scale scale, const SearchBudget* budget = nullptr);

const char* scale_name(Scale scale);
Scale scale_from_name(std::string_view name);

}  // namespace entroscale
