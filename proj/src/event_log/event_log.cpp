#include "agwf/event_log.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

namespace agwf {

namespace {

using namespace std::chrono;

// Reads exactly `width` digits at `pos`.
std::optional<int> read_digits(std::string_view text, std::size_t& pos, std::size_t width) {
    if (pos + width > text.size()) return std::nullopt;
    int value = 0;
    for (std::size_t i = 0; i < width; ++i) {
        const char c = text[pos + i];
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        value = value * 10 + (c - '0');
    }
    pos += width;
    return value;
}

bool consume(std::string_view text, std::size_t& pos, char expected) {
    if (pos < text.size() && text[pos] == expected) {
        ++pos;
        return true;
    }
    return false;
}

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);

    std::size_t pos = 0;
    const auto y = read_digits(text, pos, 4);
    if (!y || !consume(text, pos, '-')) return std::nullopt;
    const auto mo = read_digits(text, pos, 2);
    if (!mo || !consume(text, pos, '-')) return std::nullopt;
    const auto d = read_digits(text, pos, 2);
    if (!d) return std::nullopt;

    const year_month_day date{year{*y}, month{static_cast<unsigned>(*mo)}, day{static_cast<unsigned>(*d)}};
    if (!date.ok()) return std::nullopt;

    milliseconds time_of_day{0};
    if (pos < text.size() && (text[pos] == 'T' || text[pos] == 't' || text[pos] == ' ')) {
        ++pos;
        const auto hh = read_digits(text, pos, 2);
        if (!hh || !consume(text, pos, ':')) return std::nullopt;
        const auto mm = read_digits(text, pos, 2);
        if (!mm) return std::nullopt;
        int ss = 0;
        long frac_ms = 0;
        if (consume(text, pos, ':')) {
            const auto s = read_digits(text, pos, 2);
            if (!s) return std::nullopt;
            ss = *s;
            if (consume(text, pos, '.') || consume(text, pos, ',')) {
                int digits = 0;
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                    if (digits < 3) frac_ms = frac_ms * 10 + (text[pos] - '0');
                    ++digits;
                    ++pos;
                }
                if (digits == 0) return std::nullopt;
                for (int i = digits; i < 3; ++i) frac_ms *= 10;
            }
        }
        if (*hh > 23 || *mm > 59 || ss > 60) return std::nullopt;
        time_of_day = hours{*hh} + minutes{*mm} + seconds{ss} + milliseconds{frac_ms};
    }

    minutes offset{0};
    if (pos < text.size()) {
        const char sign = text[pos];
        if (sign == 'Z' || sign == 'z') {
            ++pos;
        } else if (sign == '+' || sign == '-') {
            ++pos;
            const auto oh = read_digits(text, pos, 2);
            if (!oh) return std::nullopt;
            int om = 0;
            if (pos < text.size()) {
                consume(text, pos, ':');
                const auto m = read_digits(text, pos, 2);
                if (!m) return std::nullopt;
                om = *m;
            }
            offset = hours{*oh} + minutes{om};
            if (sign == '-') offset = -offset;
        } else {
            return std::nullopt;
        }
    }
    if (pos != text.size()) return std::nullopt;

    return Timestamp{sys_days{date}.time_since_epoch() + time_of_day - offset};
}

std::string format_iso8601(Timestamp ts) {
    const auto day_point = floor<days>(ts);
    const year_month_day date{day_point};
    auto rest = ts - day_point;
    const auto h = duration_cast<hours>(rest);
    rest -= h;
    const auto m = duration_cast<minutes>(rest);
    rest -= m;
    const auto s = duration_cast<seconds>(rest);
    rest -= s;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()), static_cast<int>(h.count()),
                  static_cast<int>(m.count()), static_cast<int>(s.count()), static_cast<int>(rest.count()));
    return buf;
}

std::string scalar_to_string(const Scalar& value) {
    struct Visitor {
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const {
            std::ostringstream out;
            out << d;
            return out.str();
        }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(Timestamp t) const { return format_iso8601(t); }
    };
    return std::visit(Visitor{}, value);
}

std::vector<std::string> Trace::activities() const {
    std::vector<std::string> out;
    out.reserve(events.size());
    for (const auto& e : events) out.push_back(e.activity);
    return out;
}

std::size_t EventLog::event_count() const {
    std::size_t n = 0;
    for (const auto& t : traces) n += t.events.size();
    return n;
}

void sort_events(Trace& trace) {
    std::stable_sort(trace.events.begin(), trace.events.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
}

}  // namespace agwf
