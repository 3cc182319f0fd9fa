#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "entroscale/metrics.hpp"
#include "entroscale/unicode.hpp"

namespace entroscale {

enum class DecodeMode {
    Utf8,        // strict UTF-8, decode errors are reported
    ByteMapped,  // every byte becomes one character (Windows-1252 table)
    Auto,        // UTF-8 with byte-mapped fallback
};

struct CorpusEntry {
    std::string id;
    std::string category;
    Text text;
    std::size_t byte_length = 0;
    DecodeMode decode_mode = DecodeMode::Utf8;  // mode actually applied, never Auto
};

// Loads and decodes one file; the id defaults to the file stem.
CorpusEntry load_text(const std::filesystem::path& path, DecodeMode mode);

struct ManifestEntry {
    std::filesystem::path path;
    std::string id;
    std::string category;
    DecodeMode decode = DecodeMode::Utf8;
};

struct Manifest {
    std::vector<ManifestEntry> entries;
};

// CSV with header `path,id,category,decode`; decode is one of utf8,
// byte-mapped, auto, or empty (= utf8). Relative paths resolve against the
// manifest's directory. Duplicate ids are a parse error.
Manifest load_manifest(const std::filesystem::path& path);

struct EntryError {
    std::string id;
    std::string path;
    std::string message;
};

// Loads the manifest's entries in order. Per-entry failures (missing or
// undecodable files) are recorded without aborting the stream.
std::vector<CorpusEntry> load_entries(const Manifest& manifest,
                                      std::vector<EntryError>* errors = nullptr);

struct ResultRow {
    std::string id;
    std::string category;
    ScaleMetrics metrics;
};

enum class ResultFormat { Csv, Json };

// CSV columns exactly: id,category,scale,N_chars,N_tokens,D,d,h,degenerate.
// JSON is an array of objects with the same keys. Floats carry 9 significant
// digits.
void write_results(const std::vector<ResultRow>& rows, ResultFormat format, std::ostream& out);
std::vector<ResultRow> read_results_csv(std::istream& in);
std::vector<ResultRow> read_results_json(std::istream& in);

}  // namespace entroscale
