#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace icr {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    NonSparsifyingPrior,
    PowerIterationStall,
    NonFiniteInput,
    MaxItersExceeded,
    ProblemTooLarge,
    BadMagic,
    TruncatedPayload,
    TrailingBytes,
    MalformedInput,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Thrown by the CSV reader; remembers where the bad cell was (0-based).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t col)
        : Error(ErrorCode::MalformedInput, what), row_(row), col_(col) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

}  // namespace icr
