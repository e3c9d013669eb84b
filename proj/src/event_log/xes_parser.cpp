#include <expat.h>

#include <charconv>
#include <cstring>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "agwf/error.hpp"
#include "agwf/log_parsers.hpp"

namespace agwf {

namespace {

struct RawAttribute {
    std::string key;
    Scalar value;
};

std::optional<std::int64_t> to_int(std::string_view s) {
    std::int64_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return v;
}

std::optional<double> to_double(const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// Interprets one attribute element (`<string key=.. value=..>` etc). Values
// that do not parse as their declared type fall back to text.
std::optional<RawAttribute> read_attribute(std::string_view tag, const XML_Char** attrs) {
    const char* key = nullptr;
    const char* value = "";
    for (auto** a = attrs; *a; a += 2) {
        if (std::strcmp(a[0], "key") == 0) key = a[1];
        if (std::strcmp(a[0], "value") == 0) value = a[1];
    }
    if (!key) return std::nullopt;
    const std::string raw = value;

    RawAttribute out{key, raw};
    if (tag == "int") {
        if (auto v = to_int(raw)) out.value = *v;
    } else if (tag == "float") {
        if (auto v = to_double(raw)) out.value = *v;
    } else if (tag == "boolean") {
        if (raw == "true") out.value = true;
        if (raw == "false") out.value = false;
    } else if (tag == "date") {
        if (auto v = parse_iso8601(raw)) out.value = *v;
    }
    return out;
}

bool is_attribute_tag(std::string_view tag) {
    return tag != "event" && tag != "trace" && tag != "extension" && tag != "global" && tag != "classifier";
}

struct PendingEvent {
    Event event;
    bool has_activity = false;
    bool has_timestamp = false;
    std::optional<std::string> bad_timestamp;
};

struct PendingTrace {
    Trace trace;
    std::vector<PendingEvent> events;
};

// SAX builder. Only attribute elements that are direct children of <trace>
// or <event> are interpreted; nested list/container values are skipped.
class XesBuilder {
public:
    explicit XesBuilder(std::string source_name) { log_.source_name = std::move(source_name); }

    void start(std::string_view tag, const XML_Char** attrs) {
        const std::size_t depth = path_.size();
        if (depth == 0) {
            if (tag != "log") fail(Error(ErrorCode::MalformedDocument, "root element <log> not found"));
        } else if (depth == 1 && tag == "trace") {
            trace_.emplace();
        } else if (depth == 2 && trace_ && parent() == "trace") {
            if (tag == "event") {
                event_.emplace();
            } else if (is_attribute_tag(tag)) {
                if (auto attr = read_attribute(tag, attrs)) {
                    if (attr->key == "concept:name") {
                        trace_->trace.case_id = scalar_to_string(attr->value);
                    } else {
                        trace_->trace.case_attributes.insert_or_assign(attr->key, attr->value);
                    }
                }
            }
        } else if (depth == 3 && event_ && parent() == "event" && is_attribute_tag(tag)) {
            if (auto attr = read_attribute(tag, attrs)) add_event_attribute(std::move(*attr));
        }
        path_.emplace_back(tag);
    }

    void end() {
        const std::string tag = path_.back();
        path_.pop_back();
        if (path_.size() == 2 && tag == "event" && event_) {
            trace_->events.push_back(std::move(*event_));
            event_.reset();
        } else if (path_.size() == 1 && tag == "trace" && trace_) {
            finish_trace();
            trace_.reset();
        }
    }

    bool failed() const noexcept { return error_ != nullptr; }
    const Error& error() const { return *error_; }
    void fail(Error e) {
        if (!error_) error_ = std::make_unique<Error>(std::move(e));
    }
    EventLog take() { return std::move(log_); }

private:
    const std::string& parent() const { return path_.back(); }

    void add_event_attribute(RawAttribute attr) {
        if (attr.key == "concept:name") {
            event_->event.activity = scalar_to_string(attr.value);
            event_->has_activity = !event_->event.activity.empty();
        } else if (attr.key == "time:timestamp") {
            if (const auto* ts = std::get_if<Timestamp>(&attr.value)) {
                event_->event.timestamp = *ts;
                event_->has_timestamp = true;
            } else {
                event_->bad_timestamp = scalar_to_string(attr.value);
            }
        } else {
            event_->event.attributes.insert_or_assign(attr.key, attr.value);
        }
    }

    void finish_trace() {
        Trace& trace = trace_->trace;
        if (trace.case_id.empty()) trace.case_id = "case_" + std::to_string(log_.traces.size());
        for (std::size_t i = 0; i < trace_->events.size(); ++i) {
            auto& pending = trace_->events[i];
            const std::string where = "event " + std::to_string(i) + " of trace '" + trace.case_id + "'";
            if (pending.bad_timestamp) {
                return fail(Error(ErrorCode::UnparsableTimestamp,
                                  where + " has unparsable time:timestamp '" + *pending.bad_timestamp + "'"));
            }
            if (!pending.has_activity) return fail(Error(ErrorCode::MissingActivity, where + " has no concept:name"));
            if (!pending.has_timestamp) return fail(Error(ErrorCode::MissingTimestamp, where + " has no time:timestamp"));
            trace.events.push_back(std::move(pending.event));
        }
        if (!case_ids_.insert(trace.case_id).second) {
            return fail(Error(ErrorCode::DuplicateCaseId, "case id '" + trace.case_id + "' appears more than once"));
        }
        sort_events(trace);
        log_.traces.push_back(std::move(trace));
    }

    EventLog log_;
    std::vector<std::string> path_;
    std::optional<PendingTrace> trace_;
    std::optional<PendingEvent> event_;
    std::set<std::string> case_ids_;
    std::unique_ptr<Error> error_;
};

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
    auto& b = *static_cast<XesBuilder*>(user);
    if (b.failed()) return;
    // Exceptions must not cross expat's C frames.
    try {
        b.start(name, attrs);
    } catch (const Error& e) {
        b.fail(e);
    } catch (const std::exception& e) {
        b.fail(Error(ErrorCode::MalformedDocument, e.what()));
    }
}

void XMLCALL on_end(void* user, const XML_Char*) {
    auto& b = *static_cast<XesBuilder*>(user);
    if (b.failed()) return;
    try {
        b.end();
    } catch (const Error& e) {
        b.fail(e);
    } catch (const std::exception& e) {
        b.fail(Error(ErrorCode::MalformedDocument, e.what()));
    }
}

}  // namespace

EventLog parse_xes(std::string_view document, std::string source_name) {
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"),
                                                                                          &XML_ParserFree);
    if (!parser) throw Error(ErrorCode::MalformedDocument, "cannot create XML parser");
    XesBuilder builder(std::move(source_name));
    XML_SetUserData(parser.get(), &builder);
    XML_SetElementHandler(parser.get(), on_start, on_end);

    const auto status = XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()), XML_TRUE);
    if (builder.failed()) throw builder.error();
    if (status != XML_STATUS_OK) {
        const auto line = static_cast<std::size_t>(XML_GetCurrentLineNumber(parser.get()));
        throw Error(ErrorCode::MalformedDocument,
                    std::string(XML_ErrorString(XML_GetErrorCode(parser.get()))) + " at line " + std::to_string(line),
                    SourceLocation{line, std::nullopt});
    }
    return builder.take();
}

EventLog load_event_log(const std::filesystem::path& path, const CsvMapping& mapping) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open event log '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();

    std::string ext = path.extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".xes") return parse_xes(buffer.str(), path.filename().string());
    if (ext == ".csv") return parse_csv(buffer.str(), mapping, path.filename().string());
    throw Error(ErrorCode::IoError, "unsupported event log extension '" + ext + "' (expected .xes or .csv)");
}

}  // namespace agwf
