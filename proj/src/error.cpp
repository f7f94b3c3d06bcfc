#include "chemlab/error.hpp"

namespace chemlab {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::UnknownNodeType: return "UnknownNodeType";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::TagOveruse: return "TagOveruse";
    case ErrorCode::OrientationClash: return "OrientationClash";
    case ErrorCode::MissingCapType: return "MissingCapType";
    case ErrorCode::InterfaceMismatch: return "InterfaceMismatch";
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::DuplicateRewriteName: return "DuplicateRewriteName";
    case ErrorCode::BadValence: return "BadValence";
    case ErrorCode::UnknownChemistry: return "UnknownChemistry";
    case ErrorCode::ConfigSyntax: return "ConfigSyntax";
    case ErrorCode::StaleMatch: return "StaleMatch";
    case ErrorCode::ConflictingMatches: return "ConflictingMatches";
    case ErrorCode::InsufficientTokens: return "InsufficientTokens";
    case ErrorCode::ParityMismatch: return "ParityMismatch";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::BadRequest: return "BadRequest";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(message), code_(code), line_(line), column_(column)
{
}

} // namespace chemlab
