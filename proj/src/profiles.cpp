#include "entroscale/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace entroscale {

SymbolDistribution merge_distributions(std::span<const SymbolDistribution> parts) {
    std::unordered_map<Text, std::int64_t> counts;
    std::int64_t total = 0;
    for (const SymbolDistribution& p : parts) {
        total += p.total;
        for (const SymbolEntry& e : p.entries) counts[e.symbol] += e.count;
    }
    SymbolDistribution dist;
    dist.total = total;
    dist.entries.reserve(counts.size());
    for (auto& [sym, count] : counts) dist.entries.push_back({sym, count});
    std::sort(dist.entries.begin(), dist.entries.end(), [](const SymbolEntry& a, const SymbolEntry& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.symbol < b.symbol;
    });
    return dist;
}

Transition detect_transition(const SymbolDistribution& dist) {
    Transition t;
    for (std::size_t i = 0; i < dist.entries.size(); ++i) {
        const auto rank = std::int64_t(i) + 1;
        if (dist.entries[i].symbol.size() > 1) {
            if (!t.first_multichar_rank) {
                t.first_multichar_rank = rank;
                t.first_multichar_symbol = dist.entries[i].symbol;
            }
        } else {
            t.last_singlechar_rank = rank;
            t.last_singlechar_symbol = dist.entries[i].symbol;
        }
    }
    return t;
}

SystemProfile profile_from_distribution(std::string system, SymbolDistribution dist) {
    SystemProfile p;
    p.system = std::move(system);
    p.ranks = rank_vector_of(dist);
    const Transition t = detect_transition(dist);
    p.first_multichar_rank = t.first_multichar_rank;
    p.last_singlechar_rank = t.last_singlechar_rank;
    p.first_multichar_symbol = t.first_multichar_symbol;
    p.last_singlechar_symbol = t.last_singlechar_symbol;
    p.dist = std::move(dist);
    return p;
}

SystemProfile union_profile(std::span<const CorpusEntry> texts, Scale scale,
                            const SearchBudget* budget) {
    if (texts.empty()) throw DomainError("union_profile requires at least one text");
    std::vector<SymbolDistribution> parts;
    parts.reserve(texts.size());
    const SearchBudget def{};
    for (const CorpusEntry& entry : texts) {
        switch (scale) {
            case Scale::Character:
                parts.push_back(distribution_of(tile_characters(entry.text)));
                break;
            case Scale::Word: {
                const WordTokens words = tile_words(entry.text);
                parts.push_back(distribution_of_tokens(words.tokens));
                break;
            }
            case Scale::Fundamental:
                parts.push_back(distribution_of(fundamental_tiling(entry.text, budget ? *budget : def)));
                break;
        }
    }
    return profile_from_distribution(texts.front().category, merge_distributions(parts));
}

HeapsSeries heaps_series(std::span<const ScaleMetrics> rows) {
    HeapsSeries series;
    for (const ScaleMetrics& r : rows) {
        if (r.n_chars > 0 && r.distinct > 0) {
            series.points.emplace_back(double(r.n_chars), double(r.distinct));
        }
    }
    std::size_t distinct_n = 0;
    {
        std::vector<double> ns;
        for (const auto& [n, d] : series.points) ns.push_back(n);
        std::sort(ns.begin(), ns.end());
        distinct_n = std::unique(ns.begin(), ns.end()) - ns.begin();
    }
    if (distinct_n < 3) throw DomainError("insufficient-points: need >= 3 rows with distinct N");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(series.points.size());
    for (const auto& [N, D] : series.points) {
        const double x = std::log(N), y = std::log(D);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    series.beta = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - series.beta * sx) / n;
    series.k = std::exp(intercept);

    double ss = 0;
    for (const auto& [N, D] : series.points) {
        const double e = std::log(D) - (intercept + series.beta * std::log(N));
        ss += e * e;
    }
    series.residual_rms = std::sqrt(ss / n);
    return series;
}

}  // namespace entroscale
