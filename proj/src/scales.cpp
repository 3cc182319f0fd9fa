#include "entroscale/scales.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace entroscale {

namespace {

double xlnx(std::int64_t c) { return c > 0 ? double(c) * std::log(double(c)) : 0.0; }

// Normalized entropy (log base D) from token count, distinct count and
// sum of c*ln(c) over symbol counts. 0 for degenerate descriptions.
double entropy_from_aggregates(std::int64_t n, std::int64_t d, double sum_clnc) {
    if (d <= 1 || n <= 0) return 0.0;
    const double h = (std::log(double(n)) - sum_clnc / double(n)) / std::log(double(d));
    return std::clamp(h, 0.0, 1.0);
}

bool uniform_text(TextView text) {
    for (char32_t c : text) {
        if (c != text.front()) return false;
    }
    return true;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::int32_t kNone = -1;

// Mutable tiling state for the local search. Tokens are contiguous substrings
// of the text; a token is addressed by its start offset. Symbol identity is
// interned by substring content; adjacent-pair counts, token count, distinct
// count and sum(c*ln c) are maintained incrementally.
class SearchState {
public:
    explicit SearchState(TextView text) : text_(text) { reset_to_characters(); }

    void reset_to_characters() {
        const auto n = static_cast<std::int32_t>(text_.size());
        next_.assign(n, kNone);
        prev_.assign(n, kNone);
        len_.assign(n, 1);
        symid_.assign(n, kNone);
        sym_ids_.clear();
        sym_str_.clear();
        sym_count_.clear();
        pair_count_.clear();
        n_tokens_ = n;
        n_distinct_ = 0;
        sum_clnc_ = 0.0;
        for (std::int32_t i = 0; i < n; ++i) {
            next_[i] = i + 1 < n ? i + 1 : kNone;
            prev_[i] = i > 0 ? i - 1 : kNone;
            symid_[i] = intern(text_.substr(i, 1));
        }
        for (std::int32_t i = 0; i < n; ++i) bump(symid_[i], +1);
        for (std::int32_t i = 0; i + 1 < n; ++i) pair_bump(symid_[i], symid_[i + 1], +1);
    }

    std::int64_t token_count() const { return n_tokens_; }
    std::int64_t distinct_count() const { return n_distinct_; }
    double current_entropy() const { return entropy_from_aggregates(n_tokens_, n_distinct_, sum_clnc_); }

    // Recomputed from counts, immune to incremental drift.
    double exact_entropy() const {
        double sum = 0.0;
        for (std::int64_t c : sym_count_) sum += xlnx(c);
        return entropy_from_aggregates(n_tokens_, n_distinct_, sum);
    }

    struct Move {
        enum Kind { MergeAll, MergeOne, Split } kind = MergeAll;
        std::int32_t a = kNone, b = kNone;  // MergeAll symbols
        std::int64_t m = 0;                 // MergeAll occurrence count
        std::int32_t pos = kNone;           // MergeOne / Split token
        std::int32_t off = 0;               // Split offset
        double h_after = 0.0;
    };

    // One steepest-descent pass: evaluate candidates, apply the single best
    // strictly improving move. Returns false when no move improves.
    bool improve_once(std::mt19937_64& rng, int candidate_pool) {
        scan();
        const double h0 = current_entropy();
        std::optional<Move> best;
        auto consider = [&](const Move& mv) {
            if (mv.h_after < (best ? best->h_after : h0) - 1e-15) best = mv;
        };

        // Top-K most frequent adjacent pairs, merged at every occurrence.
        collect_top_pairs(candidate_pool);
        for (const auto& [key, raw_count] : top_pairs_) {
            const auto a = static_cast<std::int32_t>(key >> 32);
            const auto b = static_cast<std::int32_t>(key & 0xFFFFFFFF);
            std::int64_t m = raw_count;
            if (a == b) {
                auto it = self_greedy_.find(a);
                m = it == self_greedy_.end() ? 0 : it->second;
            }
            if (m <= 0) continue;
            Move mv{Move::MergeAll, a, b, m, kNone, 0, 0.0};
            if (eval_merge(a, b, m, &mv.h_after)) consider(mv);
        }

        const bool exhaustive = n_tokens_ <= 2 * std::int64_t(candidate_pool);

        // Per-occurrence merges.
        auto eval_merge_at = [&](std::int32_t pos) {
            const std::int32_t j = next_[pos];
            if (j == kNone) return;
            Move mv{Move::MergeOne, symid_[pos], symid_[j], 1, pos, 0, 0.0};
            if (eval_merge(symid_[pos], symid_[j], 1, &mv.h_after)) consider(mv);
        };
        // Per-occurrence splits.
        auto eval_split_at = [&](std::int32_t pos, std::int32_t off) {
            Move mv{Move::Split, kNone, kNone, 0, pos, off, 0.0};
            if (eval_split(pos, off, &mv.h_after)) consider(mv);
        };

        if (exhaustive) {
            for (std::int32_t pos : heads_) eval_merge_at(pos);
            for (std::int32_t pos : heads_) {
                const std::int32_t len = len_[pos];
                if (len < 2) continue;
                if (len <= 24) {
                    for (std::int32_t off = 1; off < len; ++off) eval_split_at(pos, off);
                } else {
                    for (int k = 0; k < 8; ++k) eval_split_at(pos, 1 + std::int32_t(rng() % (len - 1)));
                }
            }
        } else {
            for (int k = 0; k < candidate_pool; ++k) {
                eval_merge_at(heads_[rng() % heads_.size()]);
            }
            for (int k = 0; k < candidate_pool; ++k) {
                const std::int32_t pos = heads_[rng() % heads_.size()];
                const std::int32_t len = len_[pos];
                if (len >= 2) eval_split_at(pos, 1 + std::int32_t(rng() % (len - 1)));
            }
        }

        if (!best) return false;
        apply(*best);
        return true;
    }

    void random_premerges(std::mt19937_64& rng) {
        scan();
        if (heads_.size() < 3) return;
        const std::int64_t cap = std::min<std::int64_t>(512, std::max<std::int64_t>(1, n_tokens_ / 4));
        const int count = 1 + int(rng() % cap);
        for (int k = 0; k < count && n_tokens_ > 2; ++k) {
            for (int attempt = 0; attempt < 8; ++attempt) {
                const std::int32_t pos = heads_[rng() % heads_.size()];
                if (len_[pos] == 0 || next_[pos] == kNone) continue;
                apply_merge_one(pos);
                break;
            }
        }
        if (n_distinct_ <= 1) reset_to_characters();
    }

    Tiling to_tiling(Scale scale) const {
        Tiling t;
        t.text = Text(text_);
        t.scale = scale;
        t.cuts.reserve(std::size_t(n_tokens_) + 1);
        std::int32_t i = text_.empty() ? kNone : 0;
        t.cuts.push_back(0);
        while (i != kNone) {
            t.cuts.push_back(std::uint32_t(i + len_[i]));
            i = next_[i];
        }
        return t;
    }

    std::vector<Text> inventory() const {
        std::vector<Text> inv;
        for (std::size_t sid = 0; sid < sym_str_.size(); ++sid) {
            if (sym_count_[sid] > 0) inv.emplace_back(sym_str_[sid]);
        }
        std::sort(inv.begin(), inv.end());
        return inv;
    }

private:
    static std::uint64_t pair_key(std::int32_t a, std::int32_t b) {
        return (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b);
    }

    std::int32_t intern(TextView s) {
        auto [it, fresh] = sym_ids_.try_emplace(s, std::int32_t(sym_str_.size()));
        if (fresh) {
            sym_str_.push_back(s);
            sym_count_.push_back(0);
        }
        return it->second;
    }

    std::int32_t find_sym(TextView s) const {
        auto it = sym_ids_.find(s);
        return it == sym_ids_.end() ? kNone : it->second;
    }

    std::int64_t count_of(std::int32_t sid) const { return sid == kNone ? 0 : sym_count_[sid]; }

    void bump(std::int32_t sid, std::int64_t delta) {
        auto& c = sym_count_[sid];
        sum_clnc_ -= xlnx(c);
        if (c > 0 && c + delta <= 0) --n_distinct_;
        if (c == 0 && delta > 0) ++n_distinct_;
        c += delta;
        sum_clnc_ += xlnx(c);
    }

    void pair_bump(std::int32_t a, std::int32_t b, std::int64_t delta) {
        if (a == kNone || b == kNone) return;
        auto it = pair_count_.try_emplace(pair_key(a, b), 0).first;
        it->second += delta;
        if (it->second <= 0) pair_count_.erase(it);
    }

    // Entropy after applying count deltas; each entry is (current, delta).
    // Returns false when the move would leave fewer than two distinct symbols.
    bool hypothetical(std::initializer_list<std::pair<std::int64_t, std::int64_t>> deltas,
                      std::int64_t dn, double* h_out) const {
        std::int64_t d = n_distinct_;
        double sum = sum_clnc_;
        for (const auto& [cur, delta] : deltas) {
            if (cur > 0 && cur + delta <= 0) --d;
            if (cur == 0 && delta > 0) ++d;
            sum += xlnx(cur + delta) - xlnx(cur);
        }
        if (d <= 1) return false;
        *h_out = entropy_from_aggregates(n_tokens_ + dn, d, sum);
        return true;
    }

    bool eval_merge(std::int32_t a, std::int32_t b, std::int64_t m, double* h_out) const {
        merged_buf_.assign(sym_str_[a]);
        merged_buf_.append(sym_str_[b]);
        const std::int64_t c_ab = count_of(find_sym(merged_buf_));
        if (a == b) {
            return hypothetical({{count_of(a), -2 * m}, {c_ab, m}}, -m, h_out);
        }
        return hypothetical({{count_of(a), -m}, {count_of(b), -m}, {c_ab, m}}, -m, h_out);
    }

    bool eval_split(std::int32_t pos, std::int32_t off, double* h_out) const {
        const TextView s1 = text_.substr(pos, off);
        const TextView s2 = text_.substr(pos + off, len_[pos] - off);
        const std::int64_t c_s = count_of(symid_[pos]);
        if (s1 == s2) {
            return hypothetical({{c_s, -1}, {count_of(find_sym(s1)), 2}}, +1, h_out);
        }
        return hypothetical({{c_s, -1}, {count_of(find_sym(s1)), 1}, {count_of(find_sym(s2)), 1}},
                            +1, h_out);
    }

    void apply(const Move& mv) {
        switch (mv.kind) {
            case Move::MergeAll: {
                std::int32_t i = 0;
                while (i != kNone) {
                    const std::int32_t j = next_[i];
                    if (j != kNone && symid_[i] == mv.a && symid_[j] == mv.b) {
                        apply_merge_one(i);
                    }
                    i = next_[i];
                }
                break;
            }
            case Move::MergeOne:
                apply_merge_one(mv.pos);
                break;
            case Move::Split:
                apply_split(mv.pos, mv.off);
                break;
        }
    }

    void apply_merge_one(std::int32_t pos) {
        const std::int32_t j = next_[pos];
        const std::int32_t a = symid_[pos];
        const std::int32_t b = symid_[j];
        const std::int32_t p = prev_[pos];
        const std::int32_t q = next_[j];
        const std::int32_t sp = p == kNone ? kNone : symid_[p];
        const std::int32_t sq = q == kNone ? kNone : symid_[q];
        pair_bump(sp, a, -1);
        pair_bump(a, b, -1);
        pair_bump(b, sq, -1);
        len_[pos] += len_[j];
        len_[j] = 0;
        const std::int32_t ab = intern(text_.substr(pos, len_[pos]));
        symid_[pos] = ab;
        next_[pos] = q;
        if (q != kNone) prev_[q] = pos;
        bump(a, -1);
        bump(b, -1);
        bump(ab, +1);
        --n_tokens_;
        pair_bump(sp, ab, +1);
        pair_bump(ab, sq, +1);
    }

    void apply_split(std::int32_t pos, std::int32_t off) {
        const std::int32_t s = symid_[pos];
        const std::int32_t p = prev_[pos];
        const std::int32_t q = next_[pos];
        const std::int32_t sp = p == kNone ? kNone : symid_[p];
        const std::int32_t sq = q == kNone ? kNone : symid_[q];
        pair_bump(sp, s, -1);
        pair_bump(s, sq, -1);
        const std::int32_t full = len_[pos];
        const std::int32_t mid = pos + off;
        len_[pos] = off;
        len_[mid] = full - off;
        const std::int32_t s1 = intern(text_.substr(pos, off));
        const std::int32_t s2 = intern(text_.substr(mid, full - off));
        symid_[pos] = s1;
        symid_[mid] = s2;
        next_[pos] = mid;
        prev_[mid] = pos;
        next_[mid] = q;
        if (q != kNone) prev_[q] = mid;
        bump(s, -1);
        bump(s1, +1);
        bump(s2, +1);
        ++n_tokens_;
        pair_bump(sp, s1, +1);
        pair_bump(s1, s2, +1);
        pair_bump(s2, sq, +1);
    }

    // Walk the token list once: collect live heads and greedy merge counts
    // for runs of a repeated symbol (floor(run/2) per run).
    void scan() {
        heads_.clear();
        self_greedy_.clear();
        std::int32_t i = text_.empty() ? kNone : 0;
        std::int32_t run_sym = kNone;
        std::int64_t run_len = 0;
        auto flush = [&]() {
            if (run_len >= 2) self_greedy_[run_sym] += run_len / 2;
            run_len = 0;
        };
        while (i != kNone) {
            heads_.push_back(i);
            if (symid_[i] == run_sym) {
                ++run_len;
            } else {
                flush();
                run_sym = symid_[i];
                run_len = 1;
            }
            i = next_[i];
        }
        flush();
    }

    void collect_top_pairs(int k) {
        pair_scratch_.assign(pair_count_.begin(), pair_count_.end());
        auto by_count_then_key = [](const auto& lhs, const auto& rhs) {
            if (lhs.second != rhs.second) return lhs.second > rhs.second;
            return lhs.first < rhs.first;
        };
        if (pair_scratch_.size() > std::size_t(k)) {
            std::nth_element(pair_scratch_.begin(), pair_scratch_.begin() + k,
                             pair_scratch_.end(), by_count_then_key);
            pair_scratch_.resize(k);
        }
        std::sort(pair_scratch_.begin(), pair_scratch_.end(), by_count_then_key);
        top_pairs_ = pair_scratch_;
    }

    TextView text_;
    std::vector<std::int32_t> next_, prev_, len_, symid_;
    std::unordered_map<TextView, std::int32_t> sym_ids_;
    std::vector<TextView> sym_str_;
    std::vector<std::int64_t> sym_count_;
    std::unordered_map<std::uint64_t, std::int64_t> pair_count_;
    std::int64_t n_tokens_ = 0;
    std::int64_t n_distinct_ = 0;
    double sum_clnc_ = 0.0;

    std::vector<std::int32_t> heads_;
    std::unordered_map<std::int32_t, std::int64_t> self_greedy_;
    std::vector<std::pair<std::uint64_t, std::int64_t>> pair_scratch_;
    std::vector<std::pair<std::uint64_t, std::int64_t>> top_pairs_;
    mutable Text merged_buf_;
};

struct TilingScore {
    double h = 0.0;
    std::int64_t distinct = 0;
    std::int64_t tokens = 0;
    std::vector<Text> inventory;
};

// Tie-break rule shared by the search and the oracle: lower entropy, then
// smaller D, then larger N, then lexicographically smallest inventory.
bool score_better(const TilingScore& a, const TilingScore& b) {
    if (a.h < b.h - 1e-12) return true;
    if (a.h > b.h + 1e-12) return false;
    if (a.distinct != b.distinct) return a.distinct < b.distinct;
    if (a.tokens != b.tokens) return a.tokens > b.tokens;
    return std::lexicographical_compare(a.inventory.begin(), a.inventory.end(),
                                        b.inventory.begin(), b.inventory.end());
}

}  // namespace

bool Tiling::valid() const {
    if (cuts.size() < 2) return cuts.empty() && text.empty();
    if (cuts.front() != 0 || cuts.back() != text.size()) return false;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        if (cuts[i] <= cuts[i - 1]) return false;
    }
    return true;
}

Tiling tile_characters(TextView text) {
    if (text.empty()) throw DomainError("empty-text");
    Tiling t;
    t.text = Text(text);
    t.scale = Scale::Character;
    t.cuts.resize(text.size() + 1);
    for (std::size_t i = 0; i <= text.size(); ++i) t.cuts[i] = std::uint32_t(i);
    return t;
}

WordTokens tile_words(TextView text) {
    if (text.empty()) throw DomainError("empty-text");

    struct RawToken {
        Text value;
        bool sentence_initial = false;
        bool word = false;  // false for punctuation tokens
    };
    std::vector<RawToken> raw;
    bool at_sentence_start = true;
    std::size_t i = 0;
    while (i < text.size()) {
        const char32_t c = text[i];
        if (is_space_cp(c)) {
            ++i;
            continue;
        }
        if (is_word_punct_cp(c)) {
            raw.push_back({Text(1, c), false, false});
            at_sentence_start = (c == U'.' || c == U'!' || c == U'?');
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && !is_space_cp(text[j]) && !is_word_punct_cp(text[j])) ++j;
        raw.push_back({Text(text.substr(i, j - i)), at_sentence_start, true});
        at_sentence_start = false;
        i = j;
    }
    if (raw.empty()) throw DomainError("text-with-no-tokens");

    std::unordered_set<Text> seen;
    for (const auto& t : raw) seen.insert(t.value);

    auto capitalized = [](const Text& t) {
        if (!is_upper_cp(t.front())) return false;
        for (std::size_t k = 1; k < t.size(); ++k) {
            if (is_upper_cp(t[k])) return false;
        }
        return true;
    };

    WordTokens out;
    out.char_count = text.size();
    out.tokens.reserve(raw.size());
    for (auto& t : raw) {
        if (t.word && t.sentence_initial && capitalized(t.value)) {
            Text folded = t.value;
            folded[0] = to_lower_cp(folded[0]);
            if (seen.count(folded)) {
                out.tokens.push_back(std::move(folded));
                continue;
            }
        }
        out.tokens.push_back(std::move(t.value));
    }
    return out;
}

Tiling fundamental_tiling(TextView text, const SearchBudget& budget) {
    if (text.empty()) throw DomainError("empty-text");
    if (text.size() < 2) throw DomainError("single-character-text: no nondegenerate tiling");
    if (budget.max_passes < 1 || budget.restarts < 0 || budget.candidate_pool < 1) {
        throw DomainError("invalid search budget");
    }
    if (uniform_text(text)) {
        // Only one distinct character: every useful description is the
        // degenerate one; report the character tiling, flagged downstream.
        Tiling t = tile_characters(text);
        t.scale = Scale::Fundamental;
        return t;
    }

    std::optional<TilingScore> best_score;
    Tiling best_tiling;
    SearchState state(text);
    for (int r = 0; r <= budget.restarts; ++r) {
        std::mt19937_64 rng(mix_seed(budget.rng_seed, std::uint64_t(r)));
        if (r > 0) {
            state.reset_to_characters();
            state.random_premerges(rng);
        }
        for (int pass = 0; pass < budget.max_passes; ++pass) {
            if (!state.improve_once(rng, budget.candidate_pool)) break;
        }
        if (state.distinct_count() <= 1) continue;  // perturbed start collapsed
        TilingScore score{state.exact_entropy(), state.distinct_count(), state.token_count(),
                          state.inventory()};
        if (!best_score || score_better(score, *best_score)) {
            best_score = std::move(score);
            best_tiling = state.to_tiling(Scale::Fundamental);
        }
    }
    return best_tiling;
}

OracleResult oracle_fundamental(TextView text) {
    if (text.empty()) throw DomainError("empty-text");
    if (text.size() < 2) throw DomainError("single-character-text: no nondegenerate tiling");
    if (text.size() > 16) throw DomainError("text-too-long");

    const std::size_t len = text.size();
    OracleResult res;
    res.enumerated = std::uint64_t(1) << (len - 1);

    if (uniform_text(text)) {
        res.tiling = tile_characters(text);
        res.tiling.scale = Scale::Fundamental;
        res.entropy = 0.0;
        res.degenerate = true;
        return res;
    }

    std::optional<TilingScore> best;
    std::vector<std::uint32_t> best_cuts;
    std::vector<std::uint32_t> cuts;
    std::vector<TextView> segs;
    std::vector<TextView> uniq;
    std::vector<std::int64_t> counts;

    for (std::uint64_t mask = 0; mask < res.enumerated; ++mask) {
        cuts.clear();
        cuts.push_back(0);
        for (std::size_t b = 0; b + 1 < len; ++b) {
            if (mask >> b & 1) cuts.push_back(std::uint32_t(b + 1));
        }
        cuts.push_back(std::uint32_t(len));

        segs.clear();
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            segs.push_back(text.substr(cuts[k], cuts[k + 1] - cuts[k]));
        }
        uniq.clear();
        counts.clear();
        for (const TextView& s : segs) {
            bool found = false;
            for (std::size_t u = 0; u < uniq.size(); ++u) {
                if (uniq[u] == s) {
                    ++counts[u];
                    found = true;
                    break;
                }
            }
            if (!found) {
                uniq.push_back(s);
                counts.push_back(1);
            }
        }
        if (uniq.size() <= 1) continue;  // degenerate segmentations excluded

        double sum = 0.0;
        for (std::int64_t c : counts) sum += xlnx(c);
        const double h =
            entropy_from_aggregates(std::int64_t(segs.size()), std::int64_t(uniq.size()), sum);

        TilingScore score;
        score.h = h;
        score.distinct = std::int64_t(uniq.size());
        score.tokens = std::int64_t(segs.size());
        if (best) {
            // Scalar pre-check; the inventory is materialized only on full ties.
            bool worth_checking = false;
            if (h < best->h - 1e-12) {
                worth_checking = true;
            } else if (h <= best->h + 1e-12) {
                if (score.distinct != best->distinct) {
                    worth_checking = score.distinct < best->distinct;
                } else if (score.tokens != best->tokens) {
                    worth_checking = score.tokens > best->tokens;
                } else {
                    worth_checking = true;
                }
            }
            if (!worth_checking) continue;
        }
        score.inventory.reserve(uniq.size());
        for (const TextView& s : uniq) score.inventory.emplace_back(s);
        std::sort(score.inventory.begin(), score.inventory.end());
        if (!best || score_better(score, *best)) {
            best = std::move(score);
            best_cuts = cuts;
        }
    }

    res.tiling.text = Text(text);
    res.tiling.cuts = best_cuts;
    res.tiling.scale = Scale::Fundamental;
    res.entropy = best->h;
    res.degenerate = false;
    return res;
}

}  // namespace entroscale
