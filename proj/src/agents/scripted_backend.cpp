#include <fstream>

#include <nlohmann/json.hpp>

#include "agwf/agents.hpp"
#include "agwf/error.hpp"

namespace agwf {

namespace {

ScriptedBackend::Rule parse_rule(const nlohmann::json& j, std::size_t index) {
    const std::string where = "rules[" + std::to_string(index) + "]";
    if (!j.is_object()) throw Error(ErrorCode::ConfigError, where + " must be an object");
    for (const auto& [key, _] : j.items()) {
        if (key != "match" && key != "regex" && key != "response" && key != "responses") {
            throw Error(ErrorCode::ConfigError, where + ": unknown key '" + key + "'");
        }
    }
    ScriptedBackend::Rule rule;
    const bool has_match = j.contains("match");
    const bool has_regex = j.contains("regex");
    if (has_match == has_regex) throw Error(ErrorCode::ConfigError, where + " needs exactly one of 'match' or 'regex'");
    const auto& m = has_match ? j.at("match") : j.at("regex");
    if (!m.is_string()) throw Error(ErrorCode::ConfigError, where + ": matcher must be a string");
    rule.matcher = m.get<std::string>();
    rule.is_regex = has_regex;

    if (j.contains("response") == j.contains("responses")) {
        throw Error(ErrorCode::ConfigError, where + " needs exactly one of 'response' or 'responses'");
    }
    if (j.contains("response")) {
        if (!j.at("response").is_string()) throw Error(ErrorCode::ConfigError, where + ".response must be a string");
        rule.responses.push_back(j.at("response").get<std::string>());
    } else {
        const auto& list = j.at("responses");
        if (!list.is_array() || list.empty()) {
            throw Error(ErrorCode::ConfigError, where + ".responses must be a non-empty array of strings");
        }
        for (const auto& r : list) {
            if (!r.is_string()) throw Error(ErrorCode::ConfigError, where + ".responses must contain strings");
            rule.responses.push_back(r.get<std::string>());
        }
    }
    return rule;
}

}  // namespace

ScriptedBackend::ScriptedBackend(std::vector<Rule> rules, std::string fallback) : fallback_(std::move(fallback)) {
    rules_.reserve(rules.size());
    for (auto& rule : rules) {
        if (rule.responses.empty()) throw Error(ErrorCode::ConfigError, "scripted rule without responses");
        CompiledRule compiled{std::move(rule), {}, 0};
        if (compiled.rule.is_regex) {
            try {
                compiled.pattern = std::regex(compiled.rule.matcher, std::regex::ECMAScript);
            } catch (const std::regex_error& e) {
                throw Error(ErrorCode::ConfigError, "invalid regex '" + compiled.rule.matcher + "': " + e.what());
            }
        }
        rules_.push_back(std::move(compiled));
    }
}

ScriptedBackend ScriptedBackend::from_json(const nlohmann::json& doc) {
    const nlohmann::json* rules = &doc;
    std::string fallback;
    if (doc.is_object()) {
        for (const auto& [key, _] : doc.items()) {
            if (key != "rules" && key != "fallback") throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'");
        }
        if (!doc.contains("rules")) throw Error(ErrorCode::ConfigError, "scripted rules need a 'rules' array");
        rules = &doc.at("rules");
        if (doc.contains("fallback")) {
            if (!doc.at("fallback").is_string()) throw Error(ErrorCode::ConfigError, "'fallback' must be a string");
            fallback = doc.at("fallback").get<std::string>();
        }
    }
    if (!rules->is_array()) throw Error(ErrorCode::ConfigError, "'rules' must be an array");
    std::vector<Rule> parsed;
    for (std::size_t i = 0; i < rules->size(); ++i) parsed.push_back(parse_rule((*rules)[i], i));
    return ScriptedBackend(std::move(parsed), std::move(fallback));
}

ScriptedBackend ScriptedBackend::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open scripted rules '" + path.string() + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
    }
    return from_json(doc);
}

std::string ScriptedBackend::complete(const CompletionRequest& request) {
    std::lock_guard lock(mutex_);
    std::string response = fallback_;
    for (auto& r : rules_) {
        const bool hit = r.rule.is_regex ? std::regex_search(request.user_prompt.begin(), request.user_prompt.end(), r.pattern)
                                         : request.user_prompt.find(r.rule.matcher) != std::string_view::npos;
        if (!hit) continue;
        response = r.rule.responses[std::min(r.next, r.rule.responses.size() - 1)];
        ++r.next;
        break;
    }
    calls_.push_back(Call{std::string(request.role_prompt), std::string(request.user_prompt), response});
    return response;
}

std::size_t ScriptedBackend::call_count() const {
    std::lock_guard lock(mutex_);
    return calls_.size();
}

std::vector<ScriptedBackend::Call> ScriptedBackend::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

}  // namespace agwf
