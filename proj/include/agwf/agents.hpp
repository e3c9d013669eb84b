#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "agwf/error.hpp"
#include "agwf/tools.hpp"

namespace agwf {

/// An LLM bound to a role-defining system prompt.
struct AgentProfile {
    std::string id;
    std::string role_prompt;
    std::string model_ref;
    double temperature = 0.0;
};

struct CompletionRequest {
    std::string_view role_prompt;
    std::string_view user_prompt;
    std::string_view model_ref;
    double temperature = 0.0;
};

/// Completion contract shared by all backends. Implementations must be safe to
/// call from several executions at once.
class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;

    /// Returns the model's answer. May throw BackendTimeout, TransportError or
    /// MalformedResponse.
    virtual std::string complete(const CompletionRequest& request) = 0;
};

/// Deterministic backend answering from an ordered rule list. The first rule
/// whose matcher accepts the user prompt answers; a rule with several
/// responses hands them out in order and then keeps repeating the last one.
///
/// Rules file (JSON):
///
///     {"rules": [{"match": "<substring>", "response": "<text>"},
///                {"regex": "<ECMAScript pattern>", "responses": ["<a>", "<b>"]}],
///      "fallback": "<text>"}
///
/// A bare array of rules is also accepted (empty fallback).
class ScriptedBackend : public CompletionBackend {
public:
    struct Rule {
        std::string matcher;
        bool is_regex = false;
        std::vector<std::string> responses;
    };

    struct Call {
        std::string role_prompt;
        std::string user_prompt;
        std::string response;
    };

    ScriptedBackend(std::vector<Rule> rules, std::string fallback);
    ScriptedBackend(ScriptedBackend&& other) noexcept
        : rules_(std::move(other.rules_)), fallback_(std::move(other.fallback_)), calls_(std::move(other.calls_)) {}

    static ScriptedBackend from_json(const nlohmann::json& doc);
    /// Throws ConfigError on malformed content, IoError when unreadable.
    static ScriptedBackend load(const std::filesystem::path& path);

    std::string complete(const CompletionRequest& request) override;

    std::size_t call_count() const;
    std::vector<Call> calls() const;

private:
    struct CompiledRule {
        Rule rule;
        std::regex pattern;
        std::size_t next = 0;
    };

    std::vector<CompiledRule> rules_;
    std::string fallback_;
    mutable std::mutex mutex_;
    std::vector<Call> calls_;
};

struct HttpBackendOptions {
    /// Full chat-completions URL, e.g. `http://localhost:8080/v1/chat/completions`.
    std::string endpoint_url;
    std::string api_key;
    /// Used when a profile has no model_ref.
    std::string default_model;
    /// Wall-clock budget for one complete() call including retries.
    std::chrono::milliseconds timeout{120'000};
    /// Extra attempts after a transient failure (connection error, 429, 5xx).
    int retries = 2;
    std::chrono::milliseconds retry_backoff{500};
};

/// OpenAI-compatible chat completions: the role prompt goes out as the system
/// message, the user prompt as the user message, and the first choice's
/// message content comes back.
std::unique_ptr<CompletionBackend> http_chat_backend(HttpBackendOptions options);

/// Asks `backend` to perform a task as `profile`. Throws EmptyPrompt for an
/// empty prompt and BackendEmptyResponse when the backend answers nothing.
std::string complete(const AgentProfile& profile, CompletionBackend& backend, std::string_view user_prompt);

struct ToolSelection {
    const Tool* tool = nullptr;
    /// Prompts sent and raw answers received; both empty on the
    /// single-candidate short cut.
    std::vector<std::string> prompts;
    std::vector<std::string> raw_outputs;
};

/// ToolSelectionFailed with the model's raw answers attached.
class ToolSelectionError : public Error {
public:
    ToolSelectionError(const std::string& message, std::vector<std::string> raw_outputs)
        : Error(ErrorCode::ToolSelectionFailed, message), raw_outputs_(std::move(raw_outputs)) {}

    const std::vector<std::string>& raw_outputs() const noexcept { return raw_outputs_; }

private:
    std::vector<std::string> raw_outputs_;
};

std::string build_selection_prompt(std::string_view state, std::span<const Tool* const> candidates);

/// Lets the agent pick one tool. A single candidate is returned without a
/// backend call. Otherwise the answer's last non-empty line (trimmed) must name
/// a candidate exactly; after one unparsable answer the agent is asked again,
/// and a second failure throws ToolSelectionFailed.
ToolSelection select_tool(const AgentProfile& profile, CompletionBackend& backend, std::string_view state,
                          std::span<const Tool* const> candidates);

}  // namespace agwf
