#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chemlab {

enum class ErrorCode {
    UnknownNodeType,
    ArityMismatch,
    TagOveruse,
    OrientationClash,
    MissingCapType,
    InterfaceMismatch,
    UnknownType,
    DuplicateRewriteName,
    BadValence,
    UnknownChemistry,
    ConfigSyntax,
    StaleMatch,
    ConflictingMatches,
    InsufficientTokens,
    ParityMismatch,
    SyntaxError,
    NotFound,
    BadRequest,
};

std::string_view to_string(ErrorCode code);

// Library error. Line and column are 1-based; 0 means "not applicable".
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::size_t line = 0, std::size_t column = 0);

    ErrorCode code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    ErrorCode code_;
    std::size_t line_;
    std::size_t column_;
};

} // namespace chemlab
