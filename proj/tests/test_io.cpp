#include "icr/error.hpp"
#include "icr/io.hpp"
#include "icr/rng.hpp"
#include "test_util.hpp"

#include <doctest.h>
#include <zlib.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <string>

using namespace icr;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path d = fs::temp_directory_path() / "icr_io_tests";
    fs::create_directories(d);
    return d;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("doubles print in shortest form and parse back exactly") {
    CounterRng rng(1);
    for (int i = 0; i < 2000; ++i) {
        const double v = rng.normal() * std::pow(10.0, static_cast<double>(rng.below(40)) - 20.0);
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(3.0) == "3");
    CHECK(code_of([] { parse_double("1.5x"); }) == ErrorCode::MalformedInput);
    CHECK(code_of([] { parse_double(""); }) == ErrorCode::MalformedInput);
}

TEST_CASE("csv matrices round trip") {
    CounterRng rng(2);
    const Matrix m = testutil::random_matrix(4, 3, rng);
    CHECK(parse_csv_matrix(format_csv_matrix(m)) == m);
    const Matrix parsed = parse_csv_matrix(" 1, 2 \n3,4\n\n");
    CHECK(parsed.rows() == 2);
    CHECK(parsed(1, 0) == 3.0);
}

TEST_CASE("csv errors carry the position of the bad cell") {
    try {
        parse_csv_matrix("1,2,3\n4,abc,6\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row() == 1);
        CHECK(e.col() == 1);
        CHECK(e.code() == ErrorCode::MalformedInput);
    }
    try {
        parse_csv_matrix("1,2\n3,inf\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row() == 1);
        CHECK(e.col() == 1);
    }
    CHECK_THROWS_AS(parse_csv_matrix("1,2\n3\n"), ParseError);
    CHECK_THROWS_AS(parse_csv_matrix("1,2\n\n3,4\n"), ParseError);
    CHECK(code_of([] { parse_csv_matrix(""); }) == ErrorCode::MalformedInput);
}

TEST_CASE("binary matrices round trip bit for bit") {
    Matrix m(2, 3);
    m << 1.0, -0.0, std::numeric_limits<double>::denorm_min(), 1e300, -2.5, 0.1;
    const auto bytes = serialize_matrix(m);
    CHECK(bytes.size() == 8 + 16 + 6 * 8);
    const Matrix back = parse_matrix_binary(bytes);
    CHECK(back == m);
    CHECK(std::signbit(back(0, 1)));

    auto bad = bytes;
    bad[0] = 'X';
    CHECK(code_of([&] { parse_matrix_binary(bad); }) == ErrorCode::BadMagic);
    auto shorter = bytes;
    shorter.pop_back();
    CHECK(code_of([&] { parse_matrix_binary(shorter); }) == ErrorCode::TruncatedPayload);
    auto longer = bytes;
    longer.push_back(0);
    CHECK(code_of([&] { parse_matrix_binary(longer); }) == ErrorCode::TrailingBytes);
    CHECK(code_of([&] { parse_matrix_binary(std::span(bytes).first(12)); }) == ErrorCode::TruncatedPayload);
}

TEST_CASE("matrix files are detected by content") {
    const fs::path d = scratch_dir();
    CounterRng rng(3);
    const Matrix m = testutil::random_matrix(3, 5, rng);
    write_matrix_binary(d / "m.icrmat", m);
    write_matrix_csv(d / "m.csv", m);
    CHECK(read_matrix(d / "m.icrmat") == m);
    CHECK(read_matrix(d / "m.csv") == m);
    write_matrix_csv(d / "v.csv", m.row(0));
    CHECK(read_vector(d / "v.csv") == Vector(m.row(0).transpose()));
    CHECK_THROWS_AS(read_vector(d / "m.csv"), Error);
    CHECK(code_of([&] { read_matrix(d / "missing.csv"); }) == ErrorCode::IoError);
}

TEST_CASE("gzip input is inflated transparently") {
    const fs::path d = scratch_dir();
    const std::string text = "1,2\n3,4\n";
    gzFile f = gzopen((d / "m.csv.gz").string().c_str(), "wb");
    REQUIRE(f != nullptr);
    gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
    gzclose(f);
    const auto bytes = read_file_bytes(d / "m.csv.gz");
    CHECK(std::string(bytes.begin(), bytes.end()) == text);
    CHECK(read_matrix(d / "m.csv.gz")(1, 1) == 4.0);
}

TEST_CASE("graymap encoding") {
    const std::vector<std::uint8_t> px{0, 128, 255, 7, 8, 9};
    const auto bytes = encode_pgm(2, 3, px);
    const std::string header = "P5\n3 2\n255\n";
    REQUIRE(bytes.size() == header.size() + 6);
    CHECK(std::string(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(header.size())) == header);
    CHECK(bytes.back() == 9);
    CHECK_THROWS_AS(encode_pgm(2, 2, px), Error);
}
