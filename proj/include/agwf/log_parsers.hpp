#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "agwf/event_log.hpp"

namespace agwf {

/// Parses an XES document. Event-level `concept:name` / `time:timestamp` become
/// the activity and timestamp; trace-level attributes become case attributes,
/// with the trace's `concept:name` as case id (`case_<index>` when absent).
/// Attribute elements of unknown type are kept as text.
///
/// Throws Error with MalformedDocument (carries the XML line), MissingActivity,
/// MissingTimestamp, UnparsableTimestamp or DuplicateCaseId.
EventLog parse_xes(std::string_view document, std::string source_name = {});

struct CsvMapping {
    std::string case_column = "case:concept:name";
    std::string activity_column = "concept:name";
    std::string timestamp_column = "time:timestamp";
    /// "iso8601", "unix_seconds", "unix_millis", or a strftime-style pattern
    /// (interpreted as UTC).
    std::string timestamp_format = "iso8601";
};

/// Parses RFC-4180 CSV with a mandatory header row. Rows are grouped by the
/// case column in first-appearance order. Columns named `case:<attr>` become
/// case attributes `<attr>`; every other unmapped column becomes an event
/// attribute. All attribute values are kept as text.
///
/// Throws Error with EmptyDocument, MissingColumn, UnparsableTimestamp (row
/// number in `where().line`, header is row 1) or MalformedDocument.
EventLog parse_csv(std::string_view document, const CsvMapping& mapping = {}, std::string source_name = {});

/// Loads `.xes` or `.csv` by extension. Missing files raise IoError.
EventLog load_event_log(const std::filesystem::path& path, const CsvMapping& mapping = {});

}  // namespace agwf
