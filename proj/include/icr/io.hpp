#pragma once

#include "icr/model.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace icr {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Strict numeric parse of a whole token; throws MalformedInput.
double parse_double(std::string_view token);

/// Whole file as bytes. Input that starts with the gzip magic is inflated.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Plain comma-separated numerics, one matrix row per line, no header.
/// Blank trailing lines are ignored. A bad cell raises ParseError with its
/// 0-based row and column.
Matrix parse_csv_matrix(std::string_view text);
std::string format_csv_matrix(const Matrix& m);

inline constexpr std::string_view kMatrixMagic = "ICRMAT01";

/// "ICRMAT01", u64 rows, u64 cols (little endian), then rows*cols float64
/// little endian in row-major order.
std::vector<std::uint8_t> serialize_matrix(const Matrix& m);
Matrix parse_matrix_binary(std::span<const std::uint8_t> bytes);

/// Binary container when the file starts with the magic, CSV otherwise.
Matrix read_matrix(const std::filesystem::path& path);
void write_matrix_binary(const std::filesystem::path& path, const Matrix& m);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

/// A matrix with a single row or a single column, flattened.
Vector read_vector(const std::filesystem::path& path);

/// Binary portable graymap (P5, maxval 255). `pixels` is row-major.
std::vector<std::uint8_t> encode_pgm(int rows, int cols, std::span<const std::uint8_t> pixels);
void write_pgm(const std::filesystem::path& path, int rows, int cols,
               std::span<const std::uint8_t> pixels);

}  // namespace icr
