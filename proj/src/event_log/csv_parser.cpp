#include <algorithm>
#include <charconv>
#include <ctime>
#include <iomanip>
#include <map>
#include <sstream>

#include "agwf/error.hpp"
#include "agwf/log_parsers.hpp"

namespace agwf {

namespace {

struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;  // physical line where the record starts
};

// RFC-4180 record splitter: quoted fields may contain separators, doubled
// quotes and line breaks. Accepts both CRLF and LF.
std::vector<CsvRecord> split_records(std::string_view doc) {
    std::vector<CsvRecord> records;
    CsvRecord current;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    std::size_t line = 1;
    std::size_t quote_line = 0;
    current.line = 1;

    auto end_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = current.fields.size() == 1 && current.fields[0].empty();
        if (!blank) records.push_back(std::move(current));
        current = CsvRecord{};
        current.line = line;
    };

    for (std::size_t i = 0; i < doc.size(); ++i) {
        const char c = doc[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < doc.size() && doc[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty() || field_was_quoted) {
                    throw Error(ErrorCode::MalformedDocument, "unexpected quote inside unquoted field",
                                SourceLocation{line, std::nullopt});
                }
                in_quotes = true;
                field_was_quoted = true;
                quote_line = line;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < doc.size() && doc[i + 1] == '\n') break;
                ++line;
                end_record();
                break;
            case '\n':
                ++line;
                end_record();
                break;
            default:
                if (field_was_quoted) {
                    throw Error(ErrorCode::MalformedDocument, "text after closing quote",
                                SourceLocation{line, std::nullopt});
                }
                field += c;
        }
    }
    if (in_quotes) {
        throw Error(ErrorCode::MalformedDocument, "unterminated quoted field", SourceLocation{quote_line, std::nullopt});
    }
    if (!field.empty() || field_was_quoted || !current.fields.empty()) end_record();
    return records;
}

std::optional<Timestamp> parse_with_format(const std::string& raw, const std::string& format) {
    using namespace std::chrono;
    if (format == "iso8601") return parse_iso8601(raw);
    if (format == "unix_seconds" || format == "unix_millis") {
        std::int64_t v = 0;
        const auto* end = raw.data() + raw.size();
        const auto [ptr, ec] = std::from_chars(raw.data(), end, v);
        if (ec != std::errc{} || ptr != end) return std::nullopt;
        return format == "unix_seconds" ? Timestamp{seconds{v}} : Timestamp{milliseconds{v}};
    }
    std::tm tm{};
    std::istringstream in(raw);
    in >> std::get_time(&tm, format.c_str());
    if (in.fail()) return std::nullopt;
    in >> std::ws;
    if (!in.eof()) return std::nullopt;
    const year_month_day date{year{tm.tm_year + 1900}, month{static_cast<unsigned>(tm.tm_mon + 1)},
                              day{static_cast<unsigned>(tm.tm_mday)}};
    if (!date.ok()) return std::nullopt;
    return Timestamp{sys_days{date}.time_since_epoch() + hours{tm.tm_hour} + minutes{tm.tm_min} +
                     seconds{tm.tm_sec}};
}

}  // namespace

EventLog parse_csv(std::string_view document, const CsvMapping& mapping, std::string source_name) {
    const auto records = split_records(document);
    if (records.empty()) throw Error(ErrorCode::EmptyDocument, "CSV document has no header row");

    const auto& header = records.front().fields;
    auto column_of = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw Error(ErrorCode::MissingColumn, "column '" + name + "' not found in header");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t case_col = column_of(mapping.case_column);
    const std::size_t activity_col = column_of(mapping.activity_column);
    const std::size_t ts_col = column_of(mapping.timestamp_column);

    EventLog log;
    log.source_name = std::move(source_name);
    std::map<std::string, std::size_t> trace_index;

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::size_t row = r + 1;
        if (rec.fields.size() != header.size()) {
            throw Error(ErrorCode::MalformedDocument,
                        "row " + std::to_string(row) + " has " + std::to_string(rec.fields.size()) +
                            " fields, header has " + std::to_string(header.size()),
                        SourceLocation{row, std::nullopt});
        }
        const std::string& case_id = rec.fields[case_col];
        if (case_id.empty()) {
            throw Error(ErrorCode::MalformedDocument, "row " + std::to_string(row) + " has an empty case id",
                        SourceLocation{row, std::nullopt});
        }
        Event event;
        event.activity = rec.fields[activity_col];
        if (event.activity.empty()) {
            throw Error(ErrorCode::MissingActivity, "row " + std::to_string(row) + " has an empty activity",
                        SourceLocation{row, std::nullopt});
        }
        const auto ts = parse_with_format(rec.fields[ts_col], mapping.timestamp_format);
        if (!ts) {
            throw Error(ErrorCode::UnparsableTimestamp,
                        "row " + std::to_string(row) + ": cannot parse '" + rec.fields[ts_col] + "' as " +
                            mapping.timestamp_format,
                        SourceLocation{row, std::nullopt});
        }
        event.timestamp = *ts;

        auto [it, inserted] = trace_index.try_emplace(case_id, log.traces.size());
        if (inserted) log.traces.push_back(Trace{case_id, {}, {}});
        Trace& trace = log.traces[it->second];

        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c == case_col || c == activity_col || c == ts_col) continue;
            const std::string& name = header[c];
            if (name.rfind("case:", 0) == 0) {
                trace.case_attributes.insert_or_assign(name.substr(5), rec.fields[c]);
            } else {
                event.attributes.insert_or_assign(name, rec.fields[c]);
            }
        }
        trace.events.push_back(std::move(event));
    }

    for (auto& trace : log.traces) sort_events(trace);
    return log;
}

}  // namespace agwf
