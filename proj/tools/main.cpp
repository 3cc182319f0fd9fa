#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "entroscale/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"entroscale: symbol diversity and entropy of text-coded communication systems\n"
                 "at the character, word and fundamental observation scales"};
    app.require_subcommand(1);

    entroscale::RunConfig cfg;
    std::string oracle_text;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "Search RNG seed")->capture_default_str();
        sub->add_option("--restarts", cfg.restarts, "Randomized search restarts")
            ->capture_default_str();
        sub->add_option("--max-passes", cfg.max_passes, "Search pass cap")->capture_default_str();
        sub->add_option("--pool", cfg.candidate_pool, "Candidate pool per search pass")
            ->capture_default_str();
        sub->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
        sub->add_option("--min-length", cfg.min_length, "Minimum text length in characters")
            ->capture_default_str();
    };

    CLI::App* scan = app.add_subcommand("scan", "Per-text metrics at the requested scales");
    scan->add_option("--manifest", cfg.manifest, "Corpus manifest CSV")->required();
    scan->add_option("--scales", cfg.scales, "Scales: char, word, fundamental")
        ->delimiter(',')
        ->capture_default_str();
    scan->add_option("--format", cfg.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    add_common(scan);

    CLI::App* profile = app.add_subcommand("profile", "Per-category union rank profiles + plots");
    profile->add_option("--manifest", cfg.manifest, "Corpus manifest CSV")->required();
    profile->add_option("--scales", cfg.scales, "Single scale for the profile")
        ->delimiter(',');
    profile->add_option("--downgrade", cfg.downgrade_scale, "Plot scale S")->capture_default_str();
    profile->add_flag("--resort", cfg.resort, "Re-sort downgraded bins in descending order");
    add_common(profile);

    CLI::App* fit = app.add_subcommand("fit", "Entropy-stabilization model per category");
    fit->add_option("--scan", cfg.scan_path, "scan.csv/json produced by the scan command");
    fit->add_option("--length-unit", cfg.length_unit, "Fit lengths: symbols or chars")
        ->check(CLI::IsMember({"symbols", "chars"}))
        ->capture_default_str();
    add_common(fit);

    CLI::App* compare = app.add_subcommand("compare", "Cross-category statistics report");
    compare->add_option("--scan", cfg.scan_path, "scan.csv/json produced by the scan command");
    compare->add_option("--length-unit", cfg.length_unit, "Row lengths: symbols or chars")
        ->check(CLI::IsMember({"symbols", "chars"}))
        ->capture_default_str();
    add_common(compare);

    CLI::App* oracle = app.add_subcommand("oracle", "Exhaustive minimum-entropy tiling (len <= 16)");
    oracle->add_option("text", oracle_text, "Text literal")->required();

    CLI11_PARSE(app, argc, argv);

    // profile defaults to the fundamental scale unless one is given explicitly
    if (profile->parsed() && profile->get_option("--scales")->count() == 0) {
        cfg.scales = {"fundamental"};
    }

    try {
        if (scan->parsed()) return entroscale::cmd_scan(cfg);
        if (profile->parsed()) return entroscale::cmd_profile(cfg);
        if (fit->parsed()) return entroscale::cmd_fit(cfg);
        if (compare->parsed()) return entroscale::cmd_compare(cfg);
        if (oracle->parsed()) return entroscale::cmd_oracle(cfg, oracle_text);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
