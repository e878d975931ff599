#include "icr/io.hpp"

#include "icr/error.hpp"

#include <zlib.h>

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace icr {

static_assert(std::endian::native == std::endian::little,
              "binary matrix container assumes a little-endian host");

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool try_parse(std::string_view token, double& out) {
    token = trim(token);
    if (token.empty()) return false;
    if (token.front() == '+') token.remove_prefix(1);
    auto res = std::from_chars(token.data(), token.data() + token.size(), out);
    return res.ec == std::errc() && res.ptr == token.data() + token.size();
}

}  // namespace

double parse_double(std::string_view token) {
    double v = 0;
    if (!try_parse(token, v))
        throw Error(ErrorCode::MalformedInput, "not a number: '" + std::string(token) + "'");
    return v;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec))
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    // gzread passes plain files through unchanged
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::vector<std::uint8_t> out;
    std::array<std::uint8_t, 1 << 16> chunk;
    for (;;) {
        const int n = gzread(f, chunk.data(), static_cast<unsigned>(chunk.size()));
        if (n < 0) {
            int errnum = 0;
            std::string msg = gzerror(f, &errnum);
            gzclose(f);
            throw Error(ErrorCode::IoError, "read failed for " + path.string() + ": " + msg);
        }
        if (n == 0) break;
        out.insert(out.end(), chunk.begin(), chunk.begin() + n);
    }
    gzclose(f);
    return out;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Matrix parse_csv_matrix(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    std::size_t line_no = 0;
    std::size_t pending_blank = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (trim(line).empty()) {
            ++pending_blank;
            ++line_no;
            continue;
        }
        if (pending_blank > 0)
            throw ParseError("blank line inside matrix", line_no - pending_blank, 0);

        std::vector<double> row;
        std::size_t col = 0;
        for (;;) {
            const auto comma = line.find(',');
            const std::string_view cell = line.substr(0, comma);
            double v = 0;
            if (!try_parse(cell, v))
                throw ParseError("malformed cell '" + std::string(trim(cell)) + "'", line_no, col);
            if (!std::isfinite(v)) throw ParseError("non-finite cell", line_no, col);
            row.push_back(v);
            ++col;
            if (comma == std::string_view::npos) break;
            line = line.substr(comma + 1);
        }
        if (rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw ParseError("row has " + std::to_string(row.size()) + " cells, expected " +
                                 std::to_string(width),
                             line_no, std::min(row.size(), width));
        }
        rows.push_back(std::move(row));
        ++line_no;
    }
    if (rows.empty()) throw Error(ErrorCode::MalformedInput, "empty matrix file");

    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

std::string format_csv_matrix(const Matrix& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | p[b];
    return v;
}

}  // namespace

std::vector<std::uint8_t> serialize_matrix(const Matrix& m) {
    std::vector<std::uint8_t> out(kMatrixMagic.begin(), kMatrixMagic.end());
    put_u64(out, static_cast<std::uint64_t>(m.rows()));
    put_u64(out, static_cast<std::uint64_t>(m.cols()));
    out.reserve(out.size() + static_cast<std::size_t>(m.size()) * 8);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) put_u64(out, std::bit_cast<std::uint64_t>(m(i, j)));
    return out;
}

Matrix parse_matrix_binary(std::span<const std::uint8_t> bytes) {
    constexpr std::size_t header = 24;
    if (bytes.size() < kMatrixMagic.size() ||
        std::memcmp(bytes.data(), kMatrixMagic.data(), kMatrixMagic.size()) != 0)
        throw Error(ErrorCode::BadMagic, "missing ICRMAT01 magic");
    if (bytes.size() < header) throw Error(ErrorCode::TruncatedPayload, "matrix header truncated");
    const std::uint64_t rows = get_u64(bytes.data() + 8);
    const std::uint64_t cols = get_u64(bytes.data() + 16);
    const std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() - header) / 8;
    if (cols != 0 && rows > limit / cols)
        throw Error(ErrorCode::TruncatedPayload, "matrix dimensions overflow");
    const std::uint64_t need = header + rows * cols * 8;
    if (bytes.size() < need) throw Error(ErrorCode::TruncatedPayload, "matrix payload truncated");
    if (bytes.size() > need) throw Error(ErrorCode::TrailingBytes, "bytes after matrix payload");

    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    const std::uint8_t* p = bytes.data() + header;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j, p += 8) m(i, j) = std::bit_cast<double>(get_u64(p));
    return m;
}

Matrix read_matrix(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    if (bytes.size() >= kMatrixMagic.size() &&
        std::memcmp(bytes.data(), kMatrixMagic.data(), kMatrixMagic.size()) == 0)
        return parse_matrix_binary(bytes);
    return parse_csv_matrix(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void write_matrix_binary(const std::filesystem::path& path, const Matrix& m) {
    write_file_bytes(path, serialize_matrix(m));
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
    write_text_file(path, format_csv_matrix(m));
}

Vector read_vector(const std::filesystem::path& path) {
    const Matrix m = read_matrix(path);
    if (m.rows() != 1 && m.cols() != 1)
        throw Error(ErrorCode::DimensionMismatch,
                    path.string() + " is not a vector (" + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + ")");
    return Eigen::Map<const Vector>(m.data(), m.size());
}

std::vector<std::uint8_t> encode_pgm(int rows, int cols, std::span<const std::uint8_t> pixels) {
    if (rows < 1 || cols < 1 || pixels.size() != static_cast<std::size_t>(rows) * cols)
        throw Error(ErrorCode::DimensionMismatch, "pgm pixel count does not match dimensions");
    const std::string head = "P5\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
    std::vector<std::uint8_t> out(head.begin(), head.end());
    out.insert(out.end(), pixels.begin(), pixels.end());
    return out;
}

void write_pgm(const std::filesystem::path& path, int rows, int cols,
               std::span<const std::uint8_t> pixels) {
    write_file_bytes(path, encode_pgm(rows, cols, pixels));
}

}  // namespace icr
