#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace agwf {

/// Millisecond-precision UTC instant.
using Timestamp = std::chrono::time_point<std::chrono::system_clock, std::chrono::milliseconds>;

/// Attribute value as found in XES/CSV sources.
using Scalar = std::variant<std::string, std::int64_t, double, bool, Timestamp>;

using AttributeMap = std::map<std::string, Scalar>;

/// Parses ISO-8601 instants: `YYYY-MM-DD`, optionally followed by `T` (or a
/// space) and `hh:mm[:ss[.fraction]]`, optionally followed by `Z` or an offset
/// `±hh:mm` / `±hhmm` / `±hh`. Naive instants are taken as UTC; sub-millisecond
/// digits are truncated.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// Renders `YYYY-MM-DDThh:mm:ss.mmmZ`.
std::string format_iso8601(Timestamp ts);

/// Text rendering used in transcripts and tool output.
std::string scalar_to_string(const Scalar& value);

struct Event {
    std::string activity;
    Timestamp timestamp;
    AttributeMap attributes;

    bool operator==(const Event&) const = default;
};

struct Trace {
    std::string case_id;
    AttributeMap case_attributes;
    std::vector<Event> events;

    bool operator==(const Trace&) const = default;

    std::vector<std::string> activities() const;
};

struct EventLog {
    std::vector<Trace> traces;
    std::string source_name;

    bool operator==(const EventLog&) const = default;

    std::size_t event_count() const;
};

/// Stable sort of a trace's events by timestamp (ties keep source order).
void sort_events(Trace& trace);

}  // namespace agwf
