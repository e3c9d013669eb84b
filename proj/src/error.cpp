#include "agwf/error.hpp"

namespace agwf {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MalformedDocument: return "MalformedDocument";
        case ErrorCode::MissingActivity: return "MissingActivity";
        case ErrorCode::MissingTimestamp: return "MissingTimestamp";
        case ErrorCode::UnparsableTimestamp: return "UnparsableTimestamp";
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::EmptyDocument: return "EmptyDocument";
        case ErrorCode::DuplicateCaseId: return "DuplicateCaseId";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::EmptyExpression: return "EmptyExpression";
        case ErrorCode::NoLogReference: return "NoLogReference";
        case ErrorCode::MissingDirective: return "MissingDirective";
        case ErrorCode::UnknownEntityKey: return "UnknownEntityKey";
        case ErrorCode::DuplicateKey: return "DuplicateKey";
        case ErrorCode::EntityTypeMismatch: return "EntityTypeMismatch";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::EmptyPrompt: return "EmptyPrompt";
        case ErrorCode::BackendTimeout: return "BackendTimeout";
        case ErrorCode::BackendEmptyResponse: return "BackendEmptyResponse";
        case ErrorCode::TransportError: return "TransportError";
        case ErrorCode::MalformedResponse: return "MalformedResponse";
        case ErrorCode::ToolSelectionFailed: return "ToolSelectionFailed";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::InvalidWorkflow: return "InvalidWorkflow";
        case ErrorCode::CallbackCheckFailed: return "CallbackCheckFailed";
        case ErrorCode::UnknownCallback: return "UnknownCallback";
        case ErrorCode::RouteMissing: return "RouteMissing";
        case ErrorCode::ScoreMissing: return "ScoreMissing";
        case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
    }
    return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message, const SourceLocation& where) {
    std::string out(to_string(code));
    out += ": ";
    out += message;
    if (where.line) {
        out += " (line " + std::to_string(*where.line) + ")";
    }
    if (where.offset) {
        out += " (offset " + std::to_string(*where.offset) + ")";
    }
    return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, SourceLocation where)
    : std::runtime_error(format_message(code, message, where)),
      code_(code),
      where_(where),
      detail_(message) {}

}  // namespace agwf
