#include "entroscale/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace entroscale {

namespace {

SymbolDistribution from_counts(std::unordered_map<TextView, std::int64_t>&& counts,
                               std::int64_t total) {
    SymbolDistribution dist;
    dist.total = total;
    dist.entries.reserve(counts.size());
    for (auto& [sym, count] : counts) {
        dist.entries.push_back({Text(sym), count});
    }
    std::sort(dist.entries.begin(), dist.entries.end(), [](const SymbolEntry& a, const SymbolEntry& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.symbol < b.symbol;
    });
    return dist;
}

}  // namespace

SymbolDistribution distribution_of(const Tiling& tiling) {
    if (!tiling.valid()) throw DomainError("invalid tiling");
    std::unordered_map<TextView, std::int64_t> counts;
    const std::size_t n = tiling.token_count();
    for (std::size_t i = 0; i < n; ++i) ++counts[tiling.segment(i)];
    return from_counts(std::move(counts), std::int64_t(n));
}

SymbolDistribution distribution_of_tokens(std::span<const Text> tokens) {
    std::unordered_map<TextView, std::int64_t> counts;
    for (const Text& t : tokens) ++counts[TextView(t)];
    return from_counts(std::move(counts), std::int64_t(tokens.size()));
}

double entropy(const SymbolDistribution& dist) {
    const std::int64_t d = dist.distinct();
    if (d < 1) throw DomainError("empty distribution");
    if (d == 1) return 0.0;
    const double n = double(dist.total);
    double sum_clnc = 0.0;
    for (const SymbolEntry& e : dist.entries) {
        sum_clnc += double(e.count) * std::log(double(e.count));
    }
    const double h = (std::log(n) - sum_clnc / n) / std::log(double(d));
    return std::clamp(h, 0.0, 1.0);
}

double specific_diversity(const SymbolDistribution& dist) {
    if (dist.total < 1) throw DomainError("empty distribution");
    return double(dist.distinct()) / double(dist.total);
}

ScaleMetrics metrics_of(Scale scale, std::int64_t n_chars, const SymbolDistribution& dist) {
    ScaleMetrics m;
    m.scale = scale;
    m.n_chars = n_chars;
    m.n_tokens = dist.total;
    m.distinct = dist.distinct();
    m.d = specific_diversity(dist);
    m.h = entropy(dist);
    m.degenerate = m.distinct == 1;
    return m;
}

ScaleMetrics metrics_at_scale(TextView text, Scale scale, const SearchBudget* budget) {
    const auto n_chars = std::int64_t(text.size());
    switch (scale) {
        case Scale::Character:
            return metrics_of(scale, n_chars, distribution_of(tile_characters(text)));
        case Scale::Word: {
            const WordTokens words = tile_words(text);
            return metrics_of(scale, n_chars, distribution_of_tokens(words.tokens));
        }
        case Scale::Fundamental: {
            const SearchBudget def{};
            const Tiling t = fundamental_tiling(text, budget ? *budget : def);
            return metrics_of(scale, n_chars, distribution_of(t));
        }
    }
    throw DomainError("unknown scale");
}

const char* scale_name(Scale scale) {
    switch (scale) {
        case Scale::Character: return "char";
        case Scale::Word: return "word";
        case Scale::Fundamental: return "fundamental";
    }
    return "?";
}

Scale scale_from_name(std::string_view name) {
    if (name == "char" || name == "character") return Scale::Character;
    if (name == "word") return Scale::Word;
    if (name == "fundamental") return Scale::Fundamental;
    throw DomainError("unknown scale name: " + std::string(name));
}

}  // namespace entroscale
