#include "agwf/predicate.hpp"

#include <cctype>
#include <charconv>
#include <optional>

#include "agwf/error.hpp"

namespace agwf {

std::string_view to_string(CompareOp op) noexcept {
    switch (op) {
        case CompareOp::Equal: return "=";
        case CompareOp::NotEqual: return "!=";
        case CompareOp::Less: return "<";
        case CompareOp::LessEqual: return "<=";
        case CompareOp::Greater: return ">";
        case CompareOp::GreaterEqual: return ">=";
    }
    return "?";
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    CasePredicate parse() {
        skip_ws();
        if (pos_ == text_.size()) throw Error(ErrorCode::EmptyExpression, "predicate expression is empty");
        std::vector<Comparison> out;
        out.push_back(comparison());
        while (true) {
            skip_ws();
            if (pos_ == text_.size()) break;
            if (!keyword("and")) fail("expected 'and' or end of expression");
            out.push_back(comparison());
        }
        return CasePredicate(std::move(out));
    }

private:
    [[noreturn]] void fail(const std::string& message) const { fail_at(pos_, message); }

    [[noreturn]] void fail_at(std::size_t offset, const std::string& message) const {
        throw Error(ErrorCode::SyntaxError, message, SourceLocation{std::nullopt, offset});
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool starts_with(std::string_view s) const { return text_.substr(pos_).substr(0, s.size()) == s; }

    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '.' || c == '-';
    }

    bool keyword(std::string_view word) {
        if (pos_ + word.size() > text_.size()) return false;
        for (std::size_t i = 0; i < word.size(); ++i) {
            if (std::tolower(static_cast<unsigned char>(text_[pos_ + i])) != word[i]) return false;
        }
        const std::size_t after = pos_ + word.size();
        if (after < text_.size() && ident_char(text_[after])) return false;
        pos_ = after;
        return true;
    }

    Comparison comparison() {
        skip_ws();
        Comparison c;
        c.attribute = identifier();
        skip_ws();
        c.op = op();
        skip_ws();
        c.literal = literal();
        return c;
    }

    std::string identifier() {
        if (pos_ >= text_.size()) fail("expected attribute name");
        if (!ident_start(text_[pos_])) fail("expected attribute name");
        const std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    CompareOp op() {
        if (pos_ >= text_.size()) fail("expected comparison operator");
        if (starts_with("==")) fail("unsupported operator '==' (use '=')");
        struct Spelling {
            std::string_view text;
            CompareOp op;
        };
        // Longest spellings first.
        static constexpr Spelling spellings[] = {
            {"!=", CompareOp::NotEqual},  {"<>", CompareOp::NotEqual},  {"<=", CompareOp::LessEqual},
            {">=", CompareOp::GreaterEqual}, {"\xE2\x89\xA0", CompareOp::NotEqual},
            {"\xE2\x89\xA4", CompareOp::LessEqual}, {"\xE2\x89\xA5", CompareOp::GreaterEqual},
            {"=", CompareOp::Equal},      {"<", CompareOp::Less},       {">", CompareOp::Greater},
        };
        for (const auto& s : spellings) {
            if (starts_with(s.text)) {
                pos_ += s.text.size();
                return s.op;
            }
        }
        fail("expected comparison operator");
    }

    Scalar literal() {
        if (pos_ >= text_.size()) fail("expected literal");
        const char c = text_[pos_];
        if (c == '"' || c == '\'') return quoted(c);
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') return number();
        if (keyword("true")) return true;
        if (keyword("false")) return false;
        fail("expected literal (quoted text, number, true or false)");
    }

    Scalar quoted(char quote) {
        const std::size_t start = pos_++;
        std::string out;
        while (pos_ < text_.size()) {
            const char c = text_[pos_++];
            if (c == quote) return out;
            if (c == '\\') {
                if (pos_ >= text_.size()) break;
                out += text_[pos_++];
            } else {
                out += c;
            }
        }
        fail_at(start, "unterminated quoted literal");
    }

    Scalar number() {
        const std::size_t start = pos_;
        if (text_[pos_] == '-' || text_[pos_] == '+') ++pos_;
        bool is_real = false;
        bool digits = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                digits = true;
            } else if (c == '.' || c == 'e' || c == 'E') {
                is_real = true;
                if ((c == 'e' || c == 'E') && pos_ + 1 < text_.size() &&
                    (text_[pos_ + 1] == '-' || text_[pos_ + 1] == '+')) {
                    ++pos_;
                }
            } else {
                break;
            }
            ++pos_;
        }
        if (pos_ < text_.size() && ident_char(text_[pos_])) fail_at(start, "malformed number");
        std::string token(text_.substr(start, pos_ - start));
        if (!token.empty() && token.front() == '+') token.erase(0, 1);
        if (!digits) fail_at(start, "malformed number");
        if (!is_real) {
            std::int64_t v = 0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
            if (ec == std::errc{} && ptr == token.data() + token.size()) return v;
        }
        try {
            std::size_t used = 0;
            const double d = std::stod(token, &used);
            if (used == token.size()) return d;
        } catch (const std::exception&) {
        }
        fail_at(start, "malformed number");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::optional<double> as_number(const Scalar& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    if (const auto* s = std::get_if<std::string>(&v)) {
        try {
            std::size_t used = 0;
            const double d = std::stod(*s, &used);
            if (used == s->size()) return d;
        } catch (const std::exception&) {
        }
    }
    return std::nullopt;
}

template <typename T>
int three_way(const T& a, const T& b) {
    return a < b ? -1 : (b < a ? 1 : 0);
}

// Orders an attribute value against a literal; nullopt when the two cannot be
// compared (such comparisons evaluate to false).
std::optional<int> order(const Scalar& attr, const Scalar& lit) {
    const bool lit_numeric = std::holds_alternative<std::int64_t>(lit) || std::holds_alternative<double>(lit);
    const bool attr_numeric = std::holds_alternative<std::int64_t>(attr) || std::holds_alternative<double>(attr);

    if (const auto* ai = std::get_if<std::int64_t>(&attr)) {
        if (const auto* li = std::get_if<std::int64_t>(&lit)) return three_way(*ai, *li);
    }
    if (lit_numeric || attr_numeric) {
        const auto a = as_number(attr);
        const auto l = as_number(lit);
        if (a && l) return three_way(*a, *l);
        return std::nullopt;
    }
    if (const auto* lb = std::get_if<bool>(&lit)) {
        if (const auto* ab = std::get_if<bool>(&attr)) return three_way(*ab, *lb);
        if (const auto* as = std::get_if<std::string>(&attr)) {
            if (*as == "true") return three_way(true, *lb);
            if (*as == "false") return three_way(false, *lb);
        }
        return std::nullopt;
    }
    if (const auto* ls = std::get_if<std::string>(&lit)) {
        if (const auto* as = std::get_if<std::string>(&attr)) return three_way(*as, *ls);
        if (const auto* at = std::get_if<Timestamp>(&attr)) {
            if (const auto lt = parse_iso8601(*ls)) return three_way(*at, *lt);
            return std::nullopt;
        }
        if (const auto* ab = std::get_if<bool>(&attr)) {
            if (*ls == "true") return three_way(*ab, true);
            if (*ls == "false") return three_way(*ab, false);
        }
    }
    return std::nullopt;
}

std::string literal_to_string(const Scalar& v) {
    if (const auto* s = std::get_if<std::string>(&v)) {
        std::string out = "\"";
        for (const char c : *s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out + "\"";
    }
    return scalar_to_string(v);
}

}  // namespace

CasePredicate::CasePredicate(std::vector<Comparison> comparisons) : comparisons_(std::move(comparisons)) {
    if (comparisons_.empty()) throw Error(ErrorCode::EmptyExpression, "predicate needs at least one comparison");
    for (const auto& c : comparisons_) {
        if (c.attribute.empty()) throw Error(ErrorCode::SyntaxError, "empty attribute name");
    }
}

bool CasePredicate::matches(const Trace& trace) const {
    for (const auto& c : comparisons_) {
        const auto it = trace.case_attributes.find(c.attribute);
        if (it == trace.case_attributes.end()) return false;
        const auto ord = order(it->second, c.literal);
        if (!ord) return false;
        bool ok = false;
        switch (c.op) {
            case CompareOp::Equal: ok = *ord == 0; break;
            case CompareOp::NotEqual: ok = *ord != 0; break;
            case CompareOp::Less: ok = *ord < 0; break;
            case CompareOp::LessEqual: ok = *ord <= 0; break;
            case CompareOp::Greater: ok = *ord > 0; break;
            case CompareOp::GreaterEqual: ok = *ord >= 0; break;
        }
        if (!ok) return false;
    }
    return true;
}

std::string CasePredicate::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < comparisons_.size(); ++i) {
        if (i > 0) out += " and ";
        const auto& c = comparisons_[i];
        out += c.attribute;
        out += ' ';
        out += agwf::to_string(c.op);
        out += ' ';
        out += literal_to_string(c.literal);
    }
    return out;
}

CasePredicate parse_predicate(std::string_view expression) { return Parser(expression).parse(); }

std::pair<EventLog, EventLog> split_log(const EventLog& log, const CasePredicate& predicate) {
    std::pair<EventLog, EventLog> out;
    out.first.source_name = log.source_name;
    out.second.source_name = log.source_name;
    for (const auto& trace : log.traces) {
        (predicate.matches(trace) ? out.first : out.second).traces.push_back(trace);
    }
    return out;
}

}  // namespace agwf
