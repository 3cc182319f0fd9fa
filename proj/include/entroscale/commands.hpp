#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace entroscale {

// Exit codes shared by all commands: 0 success, 1 configuration or manifest
// error, 2 completed with partial per-file failures.
struct RunConfig {
    std::string manifest;
    std::string out_dir = ".";
    std::string scan_path;  // input for fit/compare; defaults to <out_dir>/scan.csv
    std::vector<std::string> scales = {"char", "word", "fundamental"};
    std::string format = "csv";  // csv | json
    std::int64_t downgrade_scale = 129;
    bool resort = false;
    std::uint64_t seed = 0;
    int restarts = 4;
    int max_passes = 10000;
    int candidate_pool = 64;
    int workers = 1;
    std::int64_t min_length = 0;
    std::string length_unit = "symbols";  // symbols | chars
};

int cmd_scan(const RunConfig& cfg);
int cmd_profile(const RunConfig& cfg);
int cmd_fit(const RunConfig& cfg);
int cmd_compare(const RunConfig& cfg);
int cmd_oracle(const RunConfig& cfg, const std::string& text_utf8);

}  // namespace entroscale
