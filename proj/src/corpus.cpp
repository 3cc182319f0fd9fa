#include "entroscale/corpus.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "entroscale/csv.hpp"

namespace entroscale {

namespace {

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure: " + path.string());
    return std::move(buf).str();
}

DecodeMode decode_from_string(const std::string& s, int line) {
    if (s.empty() || s == "utf8" || s == "utf-8") return DecodeMode::Utf8;
    if (s == "byte-mapped" || s == "bytes") return DecodeMode::ByteMapped;
    if (s == "auto") return DecodeMode::Auto;
    throw ParseError("unknown decode mode '" + s + "'", line);
}

}  // namespace

CorpusEntry load_text(const std::filesystem::path& path, DecodeMode mode) {
    const std::string bytes = read_file_bytes(path);
    CorpusEntry entry;
    entry.id = path.stem().string();
    entry.byte_length = bytes.size();
    switch (mode) {
        case DecodeMode::Utf8:
            entry.text = decode_utf8(bytes);
            entry.decode_mode = DecodeMode::Utf8;
            break;
        case DecodeMode::ByteMapped:
            entry.text = decode_byte_mapped(bytes);
            entry.decode_mode = DecodeMode::ByteMapped;
            break;
        case DecodeMode::Auto:
            try {
                entry.text = decode_utf8(bytes);
                entry.decode_mode = DecodeMode::Utf8;
            } catch (const DecodeError&) {
                entry.text = decode_byte_mapped(bytes);
                entry.decode_mode = DecodeMode::ByteMapped;
            }
            break;
    }
    return entry;
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path.string());
    const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";

    Manifest manifest;
    std::unordered_set<std::string> ids;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = csv_split(line);
        if (!header_seen) {
            if (fields.size() != 4 || fields[0] != "path" || fields[1] != "id" ||
                fields[2] != "category" || fields[3] != "decode") {
                throw ParseError("manifest header must be path,id,category,decode", line_no);
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 4) {
            throw ParseError("expected 4 fields, got " + std::to_string(fields.size()), line_no);
        }
        ManifestEntry e;
        e.path = std::filesystem::path(fields[0]);
        if (e.path.is_relative()) e.path = base / e.path;
        e.id = fields[1].empty() ? e.path.stem().string() : fields[1];
        e.category = fields[2];
        e.decode = decode_from_string(fields[3], line_no);
        if (!ids.insert(e.id).second) {
            throw ParseError("duplicate id '" + e.id + "'", line_no);
        }
        manifest.entries.push_back(std::move(e));
    }
    return manifest;
}

std::vector<CorpusEntry> load_entries(const Manifest& manifest, std::vector<EntryError>* errors) {
    std::vector<CorpusEntry> out;
    out.reserve(manifest.entries.size());
    for (const ManifestEntry& me : manifest.entries) {
        try {
            CorpusEntry e = load_text(me.path, me.decode);
            e.id = me.id;
            e.category = me.category;
            out.push_back(std::move(e));
        } catch (const Error& err) {
            if (errors) errors->push_back({me.id, me.path.string(), err.what()});
        }
    }
    return out;
}

void write_results(const std::vector<ResultRow>& rows, ResultFormat format, std::ostream& out) {
    if (format == ResultFormat::Csv) {
        out << "id,category,scale,N_chars,N_tokens,D,d,h,degenerate\n";
        for (const ResultRow& r : rows) {
            out << csv_quote(r.id) << ',' << csv_quote(r.category) << ','
                << scale_name(r.metrics.scale) << ',' << r.metrics.n_chars << ','
                << r.metrics.n_tokens << ',' << r.metrics.distinct << ','
                << fmt_double(r.metrics.d) << ',' << fmt_double(r.metrics.h) << ','
                << (r.metrics.degenerate ? "true" : "false") << '\n';
        }
        if (!out) throw IoError("write failure");
        return;
    }
    nlohmann::json arr = nlohmann::json::array();
    for (const ResultRow& r : rows) {
        arr.push_back({{"id", r.id},
                       {"category", r.category},
                       {"scale", scale_name(r.metrics.scale)},
                       {"N_chars", r.metrics.n_chars},
                       {"N_tokens", r.metrics.n_tokens},
                       {"D", r.metrics.distinct},
                       {"d", r.metrics.d},
                       {"h", r.metrics.h},
                       {"degenerate", r.metrics.degenerate}});
    }
    out << arr.dump(2) << '\n';
    if (!out) throw IoError("write failure");
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
    std::vector<ResultRow> rows;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = csv_split(line);
        if (!header_seen) {
            if (fields.size() != 9 || fields[0] != "id") {
                throw ParseError("unexpected results header", line_no);
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 9) {
            throw ParseError("expected 9 fields, got " + std::to_string(fields.size()), line_no);
        }
        ResultRow r;
        r.id = fields[0];
        r.category = fields[1];
        try {
            r.metrics.scale = scale_from_name(fields[2]);
            r.metrics.n_chars = std::stoll(fields[3]);
            r.metrics.n_tokens = std::stoll(fields[4]);
            r.metrics.distinct = std::stoll(fields[5]);
            r.metrics.d = std::stod(fields[6]);
            r.metrics.h = std::stod(fields[7]);
        } catch (const std::exception& e) {
            throw ParseError(std::string("bad field: ") + e.what(), line_no);
        }
        if (fields[8] == "true") r.metrics.degenerate = true;
        else if (fields[8] == "false") r.metrics.degenerate = false;
        else throw ParseError("bad degenerate flag '" + fields[8] + "'", line_no);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ResultRow> read_results_json(std::istream& in) {
    nlohmann::json arr = nlohmann::json::parse(in);
    std::vector<ResultRow> rows;
    for (const auto& o : arr) {
        ResultRow r;
        r.id = o.at("id").get<std::string>();
        r.category = o.at("category").get<std::string>();
        r.metrics.scale = scale_from_name(o.at("scale").get<std::string>());
        r.metrics.n_chars = o.at("N_chars").get<std::int64_t>();
        r.metrics.n_tokens = o.at("N_tokens").get<std::int64_t>();
        r.metrics.distinct = o.at("D").get<std::int64_t>();
        r.metrics.d = o.at("d").get<double>();
        r.metrics.h = o.at("h").get<double>();
        r.metrics.degenerate = o.at("degenerate").get<bool>();
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace entroscale
