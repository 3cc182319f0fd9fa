#include "entroscale/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <thread>

#include <json.hpp>

#include "entroscale/analysis.hpp"
#include "entroscale/corpus.hpp"
#include "entroscale/csv.hpp"
#include "entroscale/profiles.hpp"
#include "entroscale/svg.hpp"

namespace entroscale {

namespace {

namespace fs = std::filesystem;

SearchBudget budget_from(const RunConfig& cfg) {
    SearchBudget b;
    b.max_passes = cfg.max_passes;
    b.restarts = cfg.restarts;
    b.candidate_pool = cfg.candidate_pool;
    b.rng_seed = cfg.seed;
    return b;
}

LengthUnit unit_from(const RunConfig& cfg) {
    if (cfg.length_unit == "symbols") return LengthUnit::Symbols;
    if (cfg.length_unit == "chars" || cfg.length_unit == "characters") return LengthUnit::Characters;
    throw DomainError("unknown length unit: " + cfg.length_unit);
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    const int n_threads = std::clamp(workers, 1, 64);
    if (n_threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(n_threads));
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Filename-safe category tag.
std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
        out.push_back(ok ? c : '_');
    }
    return out.empty() ? "uncategorized" : out;
}

// UTF-8 with control characters (C0, DEL and C1) rendered as \uXXXX, for
// CSV/plot symbol text.
std::string printable_symbol(TextView sym) {
    std::string out;
    for (char32_t cp : sym) {
        if (cp < 0x20 || (cp >= 0x7F && cp <= 0x9F)) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04X", unsigned(cp));
            out += buf;
        } else {
            out += encode_utf8(cp);
        }
    }
    return out;
}

bool is_midi_category(const std::string& category) { return category == "midi-music"; }

std::vector<Scale> parse_scales(const std::vector<std::string>& names) {
    std::vector<Scale> scales;
    for (const std::string& n : names) scales.push_back(scale_from_name(n));
    if (scales.empty()) throw DomainError("no scales requested");
    return scales;
}

fs::path scan_input_path(const RunConfig& cfg) {
    if (!cfg.scan_path.empty()) return cfg.scan_path;
    return fs::path(cfg.out_dir) / (cfg.format == "json" ? "scan.json" : "scan.csv");
}

std::vector<ResultRow> load_scan_rows(const RunConfig& cfg) {
    const fs::path path = scan_input_path(cfg);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scan results: " + path.string());
    if (path.extension() == ".json") return read_results_json(in);
    return read_results_csv(in);
}

// Per-category fundamental-scale fit points from scan rows; duplicate
// lengths keep the first row so the fit precondition (distinct N) holds.
struct CategoryRows {
    std::vector<ScaleMetrics> rows;
    std::vector<std::pair<double, double>> points;
};

std::map<std::string, CategoryRows> fundamental_rows_by_category(
    const std::vector<ResultRow>& all, const RunConfig& cfg, LengthUnit unit) {
    std::map<std::string, CategoryRows> by_cat;
    for (const ResultRow& r : all) {
        if (r.metrics.scale != Scale::Fundamental || r.metrics.degenerate) continue;
        if (!(r.metrics.h > 0.0) || !(r.metrics.h < 1.0)) continue;
        if (r.metrics.n_chars < cfg.min_length) continue;
        const auto n = unit == LengthUnit::Symbols ? r.metrics.n_tokens : r.metrics.n_chars;
        if (n <= 0) continue;
        auto& bucket = by_cat[r.category];
        bool dup = false;
        for (const auto& [pn, ph] : bucket.points) {
            if (pn == double(n)) {
                dup = true;
                break;
            }
        }
        bucket.rows.push_back(r.metrics);
        if (!dup) bucket.points.emplace_back(double(n), r.metrics.h);
    }
    return by_cat;
}

void write_fit_json(const fs::path& path, const EntropyModel& model) {
    nlohmann::json j{{"h_s", model.h_s},         {"mu", model.mu},   {"nu", model.nu},
                     {"h_inf", model.h_inf},     {"N_s", model.n_s}, {"rms", model.rms_error},
                     {"warnings", model.warnings}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace

int cmd_scan(const RunConfig& cfg) {
    Manifest manifest;
    std::vector<Scale> scales;
    try {
        manifest = load_manifest(cfg.manifest);
        scales = parse_scales(cfg.scales);
        fs::create_directories(cfg.out_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    std::vector<EntryError> load_errors;
    const std::vector<CorpusEntry> entries = load_entries(manifest, &load_errors);

    struct Task {
        const CorpusEntry* entry;
        Scale scale;
    };
    std::vector<Task> tasks;
    std::vector<std::string> skips;
    for (const CorpusEntry& e : entries) {
        if (std::int64_t(e.text.size()) < cfg.min_length) {
            skips.push_back(e.id + ": shorter than --min-length, skipped");
            continue;
        }
        for (Scale s : scales) {
            if (s == Scale::Word && is_midi_category(e.category)) {
                skips.push_back(e.id + ": word scale not applicable to midi-music, row skipped");
                continue;
            }
            tasks.push_back({&e, s});
        }
    }

    const SearchBudget budget = budget_from(cfg);
    std::vector<std::optional<ResultRow>> slots(tasks.size());
    std::vector<std::optional<std::string>> row_errors(tasks.size());
    parallel_for(tasks.size(), cfg.workers, [&](std::size_t i) {
        const Task& t = tasks[i];
        try {
            ResultRow row;
            row.id = t.entry->id;
            row.category = t.entry->category;
            row.metrics = metrics_at_scale(t.entry->text, t.scale, &budget);
            slots[i] = std::move(row);
        } catch (const std::exception& e) {
            row_errors[i] = t.entry->id + " @ " + scale_name(t.scale) + ": " + e.what();
        }
    });

    std::vector<ResultRow> rows;
    rows.reserve(tasks.size());
    for (auto& slot : slots) {
        if (slot) rows.push_back(std::move(*slot));
    }

    const fs::path out_path =
        fs::path(cfg.out_dir) / (cfg.format == "json" ? "scan.json" : "scan.csv");
    try {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw IoError("cannot write " + out_path.string());
        write_results(rows, cfg.format == "json" ? ResultFormat::Json : ResultFormat::Csv, out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    for (const std::string& s : skips) std::cerr << "note: " << s << '\n';
    for (const EntryError& e : load_errors) {
        std::cerr << "error: " << e.id << " (" << e.path << "): " << e.message << '\n';
    }
    for (const auto& err : row_errors) {
        if (err) std::cerr << "error: " << *err << '\n';
    }
    const std::size_t n_errors =
        load_errors.size() + std::size_t(std::count_if(row_errors.begin(), row_errors.end(),
                                                       [](const auto& e) { return bool(e); }));
    std::cout << "scan: " << rows.size() << " rows, " << n_errors << " errors, " << skips.size()
              << " skipped -> " << out_path.string() << '\n';
    return n_errors ? 2 : 0;
}

int cmd_profile(const RunConfig& cfg) {
    Manifest manifest;
    Scale scale = Scale::Fundamental;
    try {
        manifest = load_manifest(cfg.manifest);
        if (cfg.scales.size() > 1) {
            throw DomainError("profile takes exactly one scale");
        }
        if (!cfg.scales.empty()) scale = scale_from_name(cfg.scales.front());
        if (cfg.downgrade_scale < 1) throw DomainError("invalid downgrade scale");
        fs::create_directories(cfg.out_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    std::vector<EntryError> load_errors;
    const std::vector<CorpusEntry> entries = load_entries(manifest, &load_errors);
    for (const EntryError& e : load_errors) {
        std::cerr << "error: " << e.id << " (" << e.path << "): " << e.message << '\n';
    }

    // Group by category, preserving manifest order.
    std::vector<std::string> order;
    std::map<std::string, std::vector<const CorpusEntry*>> groups;
    for (const CorpusEntry& e : entries) {
        if (!groups.count(e.category)) order.push_back(e.category);
        groups[e.category].push_back(&e);
    }

    const SearchBudget budget = budget_from(cfg);
    std::size_t failures = load_errors.size();
    for (const std::string& category : order) {
        if (scale == Scale::Word && is_midi_category(category)) {
            std::cerr << "note: " << category << ": word scale not applicable, skipped\n";
            continue;
        }
        const auto& members = groups[category];
        std::vector<std::optional<SymbolDistribution>> dists(members.size());
        std::vector<std::optional<std::string>> errs(members.size());
        parallel_for(members.size(), cfg.workers, [&](std::size_t i) {
            try {
                switch (scale) {
                    case Scale::Character:
                        dists[i] = distribution_of(tile_characters(members[i]->text));
                        break;
                    case Scale::Word:
                        dists[i] = distribution_of_tokens(tile_words(members[i]->text).tokens);
                        break;
                    case Scale::Fundamental:
                        dists[i] = distribution_of(fundamental_tiling(members[i]->text, budget));
                        break;
                }
            } catch (const std::exception& e) {
                errs[i] = members[i]->id + ": " + e.what();
            }
        });
        std::vector<SymbolDistribution> parts;
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (errs[i]) {
                std::cerr << "error: " << *errs[i] << '\n';
                ++failures;
            } else if (dists[i]) {
                parts.push_back(std::move(*dists[i]));
            }
        }
        if (parts.empty()) {
            std::cerr << "note: " << category << ": no usable texts, profile skipped\n";
            continue;
        }
        SystemProfile profile = profile_from_distribution(category, merge_distributions(parts));

        const std::string tag = sanitize(category);
        const fs::path csv_path = fs::path(cfg.out_dir) / ("profile." + tag + ".csv");
        const fs::path svg_path = fs::path(cfg.out_dir) / ("profile." + tag + ".svg");
        try {
            std::ofstream out(csv_path, std::ios::binary);
            if (!out) throw IoError("cannot write " + csv_path.string());
            out << "rank,symbol,count,probability,length\n";
            for (std::size_t i = 0; i < profile.dist.entries.size(); ++i) {
                const SymbolEntry& e = profile.dist.entries[i];
                out << (i + 1) << ',' << csv_quote(printable_symbol(e.symbol)) << ',' << e.count
                    << ',' << fmt_double(double(e.count) / double(profile.dist.total)) << ','
                    << e.symbol.size() << '\n';
            }

            const std::int64_t d = profile.dist.distinct();
            std::int64_t s_eff = std::min<std::int64_t>(cfg.downgrade_scale, d);
            std::vector<double> bins;
            if (d >= 2) {
                bins = downgrade(profile.ranks, s_eff, cfg.resort).probs;
            } else {
                bins = profile.ranks.probs;
                s_eff = d;
            }
            std::vector<ProfileTag> tags;
            if (!cfg.resort) {  // bin positions only match ranks in natural order
                if (profile.first_multichar_rank) {
                    tags.push_back({"'" + printable_symbol(profile.first_multichar_symbol) + "'",
                                    s_eff < d ? rank_to_bin(*profile.first_multichar_rank, d, s_eff)
                                              : *profile.first_multichar_rank,
                                    *profile.first_multichar_rank});
                }
                if (profile.last_singlechar_rank) {
                    tags.push_back({"'" + printable_symbol(profile.last_singlechar_symbol) + "'",
                                    s_eff < d ? rank_to_bin(*profile.last_singlechar_rank, d, s_eff)
                                              : *profile.last_singlechar_rank,
                                    *profile.last_singlechar_rank});
                }
            }
            render_profile_svg(svg_path, category + " profile", bins, s_eff, d, tags);
        } catch (const Error& e) {
            std::cerr << "error: " << category << ": " << e.what() << '\n';
            ++failures;
            continue;
        }
        std::cout << "profile: " << category << " D=" << profile.dist.distinct()
                  << " N=" << profile.dist.total << " -> " << csv_path.string() << '\n';
    }
    return failures ? 2 : 0;
}

int cmd_fit(const RunConfig& cfg) {
    std::vector<ResultRow> rows;
    LengthUnit unit;
    try {
        unit = unit_from(cfg);
        rows = load_scan_rows(cfg);
        fs::create_directories(cfg.out_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    const auto by_cat = fundamental_rows_by_category(rows, cfg, unit);
    if (by_cat.empty()) {
        std::cerr << "error: no usable fundamental-scale rows in scan results\n";
        return 1;
    }
    std::size_t skipped = 0;
    for (const auto& [category, bucket] : by_cat) {
        if (bucket.points.size() < 4) {
            std::cerr << "note: " << category << ": fewer than 4 usable points, fit skipped\n";
            ++skipped;
            continue;
        }
        try {
            const EntropyModel model = fit_entropy_model(bucket.points);
            const std::string tag = sanitize(category);
            write_fit_json(fs::path(cfg.out_dir) / ("fit." + tag + ".json"), model);
            render_fit_svg(fs::path(cfg.out_dir) / ("fit." + tag + ".svg"),
                           category + " entropy vs length", bucket.points, model);
            std::cout << "fit: " << category << " h_s=" << fmt_double(model.h_s)
                      << " mu=" << fmt_double(model.mu) << " nu=" << fmt_double(model.nu)
                      << " h_inf=" << fmt_double(model.h_inf) << " N_s=" << model.n_s
                      << " rms=" << fmt_double(model.rms_error) << '\n';
        } catch (const Error& e) {
            std::cerr << "error: " << category << ": " << e.what() << '\n';
            ++skipped;
        }
    }
    if (skipped == by_cat.size()) return 1;
    return skipped ? 2 : 0;
}

int cmd_compare(const RunConfig& cfg) {
    std::vector<ResultRow> rows;
    LengthUnit unit;
    try {
        unit = unit_from(cfg);
        rows = load_scan_rows(cfg);
        fs::create_directories(cfg.out_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    const auto by_cat = fundamental_rows_by_category(rows, cfg, unit);

    struct CatStats {
        EntropyModel model;
        SystemSummary summary;
        std::vector<double> ds, hs;  // post-stabilization samples
    };
    std::map<std::string, CatStats> stats;
    std::size_t partial = 0;
    for (const auto& [category, bucket] : by_cat) {
        if (bucket.points.size() < 4) {
            std::cerr << "note: " << category << ": fewer than 4 usable points, skipped\n";
            ++partial;
            continue;
        }
        CatStats cs;
        try {
            cs.model = fit_entropy_model(bucket.points);
            cs.summary = system_summary(bucket.rows, cs.model, unit);
        } catch (const Error& e) {
            std::cerr << "note: " << category << ": " << e.what() << '\n';
            ++partial;
            continue;
        }
        for (const ScaleMetrics& m : bucket.rows) {
            const auto n = unit == LengthUnit::Symbols ? m.n_tokens : m.n_chars;
            if (n >= cs.model.n_s) {
                cs.ds.push_back(m.d);
                cs.hs.push_back(m.h);
            }
        }
        stats.emplace(category, std::move(cs));
    }
    if (stats.size() < 2) {
        std::cerr << "error: need at least 2 categories with post-stabilization rows\n";
        return 1;
    }

    const fs::path out_path = fs::path(cfg.out_dir) / "compare.csv";
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << out_path.string() << '\n';
        return 1;
    }
    out << "kind,category_a,category_b,n_a,n_b,N_s_a,N_s_b,d_mean_a,d_sd_a,h_mean_a,h_sd_a,"
           "d_mean_b,d_sd_b,h_mean_b,h_sd_b,t_d,p_d,t_h,p_h,note\n";
    for (const auto& [category, cs] : stats) {
        out << "category," << csv_quote(category) << ",," << cs.summary.n << ",," << cs.model.n_s
            << ",," << fmt_double(cs.summary.mean_d) << ',' << fmt_double(cs.summary.sd_d) << ','
            << fmt_double(cs.summary.mean_h) << ',' << fmt_double(cs.summary.sd_h_model)
            << ",,,,,,,,,\n";
    }
    for (auto it_a = stats.begin(); it_a != stats.end(); ++it_a) {
        for (auto it_b = std::next(it_a); it_b != stats.end(); ++it_b) {
            const CatStats& a = it_a->second;
            const CatStats& b = it_b->second;
            out << "pair," << csv_quote(it_a->first) << ',' << csv_quote(it_b->first) << ','
                << a.ds.size() << ',' << b.ds.size() << ',' << a.model.n_s << ',' << b.model.n_s
                << ',' << fmt_double(a.summary.mean_d) << ',' << fmt_double(a.summary.sd_d) << ','
                << fmt_double(a.summary.mean_h) << ',' << fmt_double(a.summary.sd_h_model) << ','
                << fmt_double(b.summary.mean_d) << ',' << fmt_double(b.summary.sd_d) << ','
                << fmt_double(b.summary.mean_h) << ',' << fmt_double(b.summary.sd_h_model) << ',';
            if (a.ds.size() >= 2 && b.ds.size() >= 2) {
                const TTestResult td = welch_t_test(a.ds, b.ds);
                const TTestResult th = welch_t_test(a.hs, b.hs);
                out << fmt_double(td.t) << ',' << fmt_double(td.p) << ',' << fmt_double(th.t)
                    << ',' << fmt_double(th.p) << ',';
                if (td.zero_variance || th.zero_variance) out << "zero-variance";
            } else {
                out << ",,,,empty-after-filter";
                ++partial;
            }
            out << '\n';
        }
    }
    std::cout << "compare: " << stats.size() << " categories -> " << out_path.string() << '\n';
    return partial ? 2 : 0;
}

int cmd_oracle(const RunConfig& cfg, const std::string& text_utf8) {
    (void)cfg;
    try {
        const Text text = decode_utf8(text_utf8);
        const OracleResult res = oracle_fundamental(text);
        std::string joined;
        for (std::size_t i = 0; i < res.tiling.token_count(); ++i) {
            if (i) joined += "|";
            joined += printable_symbol(res.tiling.segment(i));
        }
        const SymbolDistribution dist = distribution_of(res.tiling);
        std::cout << "text: " << printable_symbol(text) << '\n'
                  << "segmentations: " << res.enumerated << '\n'
                  << "tiling: " << joined << '\n'
                  << "N: " << dist.total << '\n'
                  << "D: " << dist.distinct() << '\n'
                  << "h: " << fmt_double(res.entropy) << '\n'
                  << "degenerate: " << (res.degenerate ? "true" : "false") << '\n';
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace entroscale
