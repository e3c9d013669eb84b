#include <algorithm>
#include <cctype>

#include "agwf/error.hpp"
#include "agwf/tools.hpp"

namespace agwf {

namespace {

bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool key_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

bool path_delimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '\'' || c == '`' || c == '(' ||
           c == ')' || c == '<' || c == '>' || c == '[' || c == ']' || c == '{' || c == '}' || c == ',' || c == ';';
}

bool ends_with_log_extension(std::string_view token) {
    if (token.size() <= 4) return false;
    std::string ext(token.substr(token.size() - 4));
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext == ".xes" || ext == ".csv";
}

}  // namespace

Tool::Tool(std::string name, std::string documentation, Function function)
    : name_(std::move(name)), documentation_(std::move(documentation)), function_(std::move(function)) {}

std::string Tool::invoke(std::string_view state, EntityMemory& memory) const {
    try {
        return function_(state, memory);
    } catch (const std::exception& e) {
        return std::string(kToolErrorPrefix) + name_ + ": " + e.what();
    }
}

bool is_tool_error(std::string_view output) noexcept { return output.substr(0, kToolErrorPrefix.size()) == kToolErrorPrefix; }

void ToolRegistry::add(Tool tool) {
    if (!is_identifier(tool.name())) throw Error(ErrorCode::ConfigError, "tool name '" + tool.name() + "' is not an identifier");
    const std::string name = tool.name();
    if (!tools_.emplace(name, std::move(tool)).second) {
        throw Error(ErrorCode::ConfigError, "tool '" + name + "' is already registered");
    }
}

const Tool* ToolRegistry::find(std::string_view name) const {
    const auto it = tools_.find(name);
    return it == tools_.end() ? nullptr : &it->second;
}

const Tool& ToolRegistry::at(std::string_view name) const {
    if (const auto* tool = find(name)) return *tool;
    throw Error(ErrorCode::ConfigError, "unknown tool '" + std::string(name) + "'");
}

std::vector<std::string> ToolRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : tools_) out.push_back(name);
    return out;
}

std::optional<std::string> find_directive(std::string_view state, std::string_view name) {
    std::optional<std::string> found;
    std::size_t start = 0;
    while (start <= state.size()) {
        std::size_t end = state.find('\n', start);
        if (end == std::string_view::npos) end = state.size();
        const auto line = trim(state.substr(start, end - start));
        if (line.size() > name.size() && line.substr(0, name.size()) == name && line[name.size()] == ':') {
            found = std::string(trim(line.substr(name.size() + 1)));
        }
        start = end + 1;
    }
    return found;
}

LogHandle resolve_log_reference(std::string_view state, const EntityMemory& memory) {
    std::optional<std::size_t> best_pos;
    std::string best_token;
    bool best_is_key = false;

    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state[i] != '@') continue;
        if (i > 0 && (key_char(state[i - 1]) || state[i - 1] == '.')) continue;
        std::size_t j = i + 1;
        while (j < state.size() && key_char(state[j])) ++j;
        if (j == i + 1) continue;
        best_pos = i;
        best_token = std::string(state.substr(i + 1, j - i - 1));
        best_is_key = true;
    }

    std::size_t i = 0;
    while (i < state.size()) {
        while (i < state.size() && path_delimiter(state[i])) ++i;
        const std::size_t start = i;
        while (i < state.size() && !path_delimiter(state[i])) ++i;
        std::string_view token = state.substr(start, i - start);
        while (!token.empty() && (token.back() == '.' || token.back() == ':' || token.back() == '!' ||
                                  token.back() == '?')) {
            token.remove_suffix(1);
        }
        if (ends_with_log_extension(token) && (!best_pos || start > *best_pos)) {
            best_pos = start;
            best_token = std::string(token);
            best_is_key = false;
        }
    }

    if (!best_pos) throw Error(ErrorCode::NoLogReference, "state references no event log (@key or .xes/.csv path)");
    if (best_is_key) return memory.load_log(best_token);
    return std::make_shared<const EventLog>(load_event_log(best_token));
}

}  // namespace agwf
