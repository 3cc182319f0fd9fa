#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "entroscale/corpus.hpp"
#include "entroscale/csv.hpp"

using namespace entroscale;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static int counter = 0;
    fs::path dir = fs::temp_directory_path() / ("entroscale_corpus_" + std::to_string(counter++));
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, std::string_view bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), std::streamsize(bytes.size()));
}

}  // namespace

TEST_CASE("utf8 decode: ascii identity") {
    CHECK(decode_utf8("abc") == U"abc");
    CHECK(decode_utf8("").empty());
    CHECK(decode_utf8("caf\xc3\xa9") == U"café");
    CHECK(decode_utf8("\xe2\x82\xac") == U"€");
    CHECK(decode_utf8("\xf0\x9d\x84\x9e") == U"\U0001d11e");
}

TEST_CASE("utf8 decode: malformed input rejected") {
    CHECK_THROWS_AS(decode_utf8("\x80"), DecodeError);                  // stray continuation
    CHECK_THROWS_AS(decode_utf8("\xc0\xaf"), DecodeError);              // overlong '/'
    CHECK_THROWS_AS(decode_utf8("\xe2\x82"), DecodeError);              // truncated
    CHECK_THROWS_AS(decode_utf8("\xed\xa0\x80"), DecodeError);          // surrogate
    CHECK_THROWS_AS(decode_utf8("\xf4\x90\x80\x80"), DecodeError);      // > U+10FFFF
    CHECK_THROWS_AS(decode_utf8("\xfe"), DecodeError);                  // invalid lead
}

TEST_CASE("utf8 encode/decode round-trip") {
    const Text sample = U"aé€\U0001d11e z";
    CHECK(decode_utf8(encode_utf8(sample)) == sample);
}

TEST_CASE("byte-mapped decode: identity on low bytes, cp1252 on high") {
    CHECK(decode_byte_mapped("AAAA") == U"AAAA");
    const std::string bytes = std::string("\xff\x00\x41", 3);
    const Text t = decode_byte_mapped(bytes);
    REQUIRE(t.size() == 3);  // character count equals byte count
    CHECK(t[0] == char32_t(0xFF));
    CHECK(t[1] == char32_t(0x00));
    CHECK(t[2] == U'A');
    CHECK(decode_byte_mapped("\x80")[0] == char32_t(0x20AC));  // euro sign
    CHECK(decode_byte_mapped("\x9d")[0] == char32_t(0x009D));  // unassigned passes through
}

TEST_CASE("byte-mapped decode is a bijection on bytes") {
    std::string all;
    for (int b = 0; b < 256; ++b) all.push_back(char(b));
    CHECK(encode_byte_mapped(decode_byte_mapped(all)) == all);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::string buf;
        const std::size_t len = rng() % 300;
        for (std::size_t i = 0; i < len; ++i) buf.push_back(char(rng() & 0xFF));
        CHECK(encode_byte_mapped(decode_byte_mapped(buf)) == buf);
    }
}

TEST_CASE("load_text modes and errors") {
    const fs::path dir = temp_dir();
    write_file(dir / "plain.txt", "abc");
    write_file(dir / "binary.bin", std::string("\xff\x00\x41", 3));

    const CorpusEntry utf8 = load_text(dir / "plain.txt", DecodeMode::Utf8);
    CHECK(utf8.text == U"abc");
    CHECK(utf8.byte_length == 3);
    CHECK(utf8.id == "plain");
    CHECK(utf8.decode_mode == DecodeMode::Utf8);

    const CorpusEntry mapped = load_text(dir / "binary.bin", DecodeMode::ByteMapped);
    CHECK(mapped.text.size() == 3);
    CHECK(mapped.decode_mode == DecodeMode::ByteMapped);

    CHECK_THROWS_AS(load_text(dir / "binary.bin", DecodeMode::Utf8), DecodeError);
    const CorpusEntry fallback = load_text(dir / "binary.bin", DecodeMode::Auto);
    CHECK(fallback.decode_mode == DecodeMode::ByteMapped);
    CHECK_THROWS_AS(load_text(dir / "missing.txt", DecodeMode::Utf8), IoError);
}

TEST_CASE("manifest: parsing, order, duplicate ids, partial failures") {
    const fs::path dir = temp_dir();
    write_file(dir / "a.txt", "hello");
    write_file(dir / "b.txt", "world");

    SUBCASE("well-formed") {
        write_file(dir / "m.csv",
                   "path,id,category,decode\n"
                   "a.txt,a,english,\n"
                   "b.txt,b,english,utf8\n");
        const Manifest m = load_manifest(dir / "m.csv");
        REQUIRE(m.entries.size() == 2);
        CHECK(m.entries[0].id == "a");
        CHECK(m.entries[1].decode == DecodeMode::Utf8);
        std::vector<EntryError> errs;
        const auto entries = load_entries(m, &errs);
        REQUIRE(entries.size() == 2);
        CHECK(errs.empty());
        CHECK(entries[0].text == U"hello");
        CHECK(entries[1].category == "english");
    }

    SUBCASE("empty manifest yields empty stream") {
        write_file(dir / "empty.csv", "path,id,category,decode\n");
        CHECK(load_manifest(dir / "empty.csv").entries.empty());
        write_file(dir / "empty2.csv", "");
        CHECK(load_manifest(dir / "empty2.csv").entries.empty());
    }

    SUBCASE("duplicate id is a parse error with line number") {
        write_file(dir / "dup.csv",
                   "path,id,category,decode\n"
                   "a.txt,same,english,\n"
                   "b.txt,same,english,\n");
        try {
            load_manifest(dir / "dup.csv");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 3);
        }
    }

    SUBCASE("missing file reported without aborting the stream") {
        write_file(dir / "partial.csv",
                   "path,id,category,decode\n"
                   "a.txt,a,english,\n"
                   "gone.txt,g,english,\n");
        std::vector<EntryError> errs;
        const auto entries = load_entries(load_manifest(dir / "partial.csv"), &errs);
        CHECK(entries.size() == 1);
        REQUIRE(errs.size() == 1);
        CHECK(errs[0].id == "g");
    }

    SUBCASE("bad header / bad decode rejected") {
        write_file(dir / "bad1.csv", "path,name,category,decode\na.txt,a,e,\n");
        CHECK_THROWS_AS(load_manifest(dir / "bad1.csv"), ParseError);
        write_file(dir / "bad2.csv", "path,id,category,decode\na.txt,a,e,latin1\n");
        CHECK_THROWS_AS(load_manifest(dir / "bad2.csv"), ParseError);
    }
}

TEST_CASE("write_results: csv schema and round-trips") {
    std::vector<ResultRow> rows;

    SUBCASE("zero records give a header-only csv") {
        std::ostringstream out;
        write_results(rows, ResultFormat::Csv, out);
        CHECK(out.str() == "id,category,scale,N_chars,N_tokens,D,d,h,degenerate\n");
    }

    ResultRow r;
    r.id = "sample, with comma";
    r.category = "english-speech";
    r.metrics = {Scale::Character, 1122, 1122, 33, 0.0294, 0.830, false};
    rows.push_back(r);

    SUBCASE("csv round-trip preserves fields") {
        std::ostringstream out;
        write_results(rows, ResultFormat::Csv, out);
        std::istringstream in(out.str());
        const auto back = read_results_csv(in);
        REQUIRE(back.size() == 1);
        CHECK(back[0].id == r.id);
        CHECK(back[0].category == r.category);
        CHECK(back[0].metrics.scale == Scale::Character);
        CHECK(back[0].metrics.n_chars == 1122);
        CHECK(back[0].metrics.d == doctest::Approx(0.0294).epsilon(1e-12));
        CHECK(back[0].metrics.h == doctest::Approx(0.830).epsilon(1e-12));
        CHECK_FALSE(back[0].metrics.degenerate);
    }

    SUBCASE("json round-trip preserves fields") {
        std::ostringstream out;
        write_results(rows, ResultFormat::Json, out);
        std::istringstream in(out.str());
        const auto back = read_results_json(in);
        REQUIRE(back.size() == 1);
        CHECK(back[0].metrics.n_tokens == 1122);
        CHECK(back[0].metrics.h == doctest::Approx(0.830).epsilon(1e-15));
    }

    SUBCASE("floats keep at least 6 significant digits") {
        rows[0].metrics.h = 0.123456789;
        std::ostringstream out;
        write_results(rows, ResultFormat::Csv, out);
        CHECK(out.str().find("0.123456789") != std::string::npos);
    }
}

TEST_CASE("reference table row re-emits unchanged") {
    // First row of the bundled English reference table, character scale.
    std::ifstream ref(fs::path(ENTROSCALE_SOURCE_DIR) / "data/reference/english.csv");
    REQUIRE(ref.good());
    std::string header, first;
    std::getline(ref, header);
    std::getline(ref, first);
    const auto fields = csv_split(first);
    REQUIRE(fields.size() == 10);
    CHECK(fields[0] == "1381.JohnBall.txt");

    ResultRow row;
    row.id = fields[0];
    row.category = "english-speech";
    row.metrics.scale = Scale::Character;
    row.metrics.n_chars = std::stoll(fields[1]);
    row.metrics.n_tokens = row.metrics.n_chars;
    row.metrics.d = std::stod(fields[2]);
    row.metrics.h = std::stod(fields[3]);
    row.metrics.distinct = std::llround(row.metrics.d * double(row.metrics.n_tokens));

    std::ostringstream out;
    write_results({row}, ResultFormat::Csv, out);
    std::istringstream in(out.str());
    const auto back = read_results_csv(in);
    REQUIRE(back.size() == 1);
    CHECK(back[0].metrics.n_chars == 1122);
    CHECK(back[0].metrics.h == doctest::Approx(0.830).epsilon(1e-12));
}
