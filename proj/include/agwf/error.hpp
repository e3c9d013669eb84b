#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace agwf {

enum class ErrorCode {
    // event log ingestion
    MalformedDocument,
    MissingActivity,
    MissingTimestamp,
    UnparsableTimestamp,
    MissingColumn,
    EmptyDocument,
    DuplicateCaseId,
    // predicates
    SyntaxError,
    EmptyExpression,
    // tools and memory
    NoLogReference,
    MissingDirective,
    UnknownEntityKey,
    DuplicateKey,
    EntityTypeMismatch,
    IoError,
    // agents
    EmptyPrompt,
    BackendTimeout,
    BackendEmptyResponse,
    TransportError,
    MalformedResponse,
    ToolSelectionFailed,
    // workflows
    ConfigError,
    InvalidWorkflow,
    CallbackCheckFailed,
    UnknownCallback,
    // task kinds
    RouteMissing,
    ScoreMissing,
    ScoreOutOfRange,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Source location attached to parse errors. `line` is 1-based; `offset` is a
/// 0-based character offset (used by the predicate parser).
struct SourceLocation {
    std::optional<std::size_t> line;
    std::optional<std::size_t> offset;
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, SourceLocation where = {});

    ErrorCode code() const noexcept { return code_; }
    const SourceLocation& where() const noexcept { return where_; }
    /// Message without the "<Code>: " prefix that what() carries.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    SourceLocation where_;
    std::string detail_;
};

}  // namespace agwf
