#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "agwf/event_log.hpp"

namespace agwf {

enum class CompareOp { Equal, NotEqual, Less, LessEqual, Greater, GreaterEqual };

std::string_view to_string(CompareOp op) noexcept;

struct Comparison {
    std::string attribute;
    CompareOp op = CompareOp::Equal;
    Scalar literal;
};

/// Conjunction of case-attribute comparisons.
///
/// Grammar (whitespace-insensitive):
///
///     predicate  := comparison ("and" comparison)*
///     comparison := identifier op literal
///     op         := "=" | "!=" | "<>" | "<" | "<=" | ">" | ">=" | "≠" | "≤" | "≥"
///     literal    := quoted text | integer | real | true | false
///
/// Identifiers start with a letter or `_` and may contain letters, digits,
/// `_`, `:`, `.` and `-`.
class CasePredicate {
public:
    explicit CasePredicate(std::vector<Comparison> comparisons);

    const std::vector<Comparison>& comparisons() const noexcept { return comparisons_; }

    /// A missing attribute or an incomparable pair of values makes the
    /// comparison false; evaluation never throws.
    bool matches(const Trace& trace) const;

    std::string to_string() const;

private:
    std::vector<Comparison> comparisons_;
};

/// Throws Error with EmptyExpression or SyntaxError (offset in where()).
CasePredicate parse_predicate(std::string_view expression);

/// Partitions traces into (matching, remainder), preserving order.
std::pair<EventLog, EventLog> split_log(const EventLog& log, const CasePredicate& predicate);

}  // namespace agwf
