#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entroscale/unicode.hpp"

namespace entroscale {

enum class Scale { Character, Word, Fundamental };

// An exact, ordered, non-overlapping segmentation of one text. `cuts` holds
// character offsets, strictly increasing from 0 to text.size(); segment i is
// text[cuts[i], cuts[i+1]). Concatenating the segments reproduces the text.
struct Tiling {
    Text text;
    std::vector<std::uint32_t> cuts;
    Scale scale = Scale::Character;

    std::size_t token_count() const { return cuts.empty() ? 0 : cuts.size() - 1; }
    TextView segment(std::size_t i) const {
        return TextView(text).substr(cuts[i], cuts[i + 1] - cuts[i]);
    }
    bool valid() const;
};

struct SearchBudget {
    int max_passes = 10000;
    int restarts = 4;          // randomized restarts in addition to the plain start
    int candidate_pool = 64;   // top-K adjacent pairs / sample width per pass
    std::uint64_t rng_seed = 0;
};

// One segment per character.
Tiling tile_characters(TextView text);

// Word-scale tokens. Not an exact tiling: whitespace is consumed, each
// punctuation character becomes its own token, and a capitalized
// sentence-initial token is folded to lowercase when its lowercase form
// occurs elsewhere in the same text.
struct WordTokens {
    std::vector<Text> tokens;
    std::size_t char_count = 0;
};
WordTokens tile_words(TextView text);

// Minimum-entropy exact tiling found by merge/split steepest descent from the
// character tiling, with randomized restarts. Deterministic for a fixed
// budget. Degenerate (single-symbol) tilings are never returned except for
// texts made of one repeated character.
Tiling fundamental_tiling(TextView text, const SearchBudget& budget = {});

struct OracleResult {
    Tiling tiling;
    double entropy = 0.0;
    bool degenerate = false;
    std::uint64_t enumerated = 0;  // 2^(L-1) segmentations examined
};

// Exhaustive minimum over all segmentations, texts of length 2..16. Shares
// the tie-break rule with fundamental_tiling: lower entropy, then smaller D,
// then larger token count, then lexicographically smallest symbol inventory.
OracleResult oracle_fundamental(TextView text);

}  // namespace entroscale
