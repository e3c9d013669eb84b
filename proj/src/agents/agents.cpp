#include <algorithm>
#include <cctype>

#include "agwf/agents.hpp"
#include "agwf/error.hpp"

namespace agwf {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string_view last_nonempty_line(std::string_view text) {
    std::string_view last;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(start, end - start));
        if (!line.empty()) last = line;
        start = end + 1;
    }
    return last;
}

std::string candidate_list(std::span<const Tool* const> candidates) {
    std::string out;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (i > 0) out += ", ";
        out += candidates[i]->name();
    }
    return out;
}

}  // namespace

std::string complete(const AgentProfile& profile, CompletionBackend& backend, std::string_view user_prompt) {
    if (user_prompt.empty()) throw Error(ErrorCode::EmptyPrompt, "agent '" + profile.id + "' got an empty prompt");
    std::string response =
        backend.complete(CompletionRequest{profile.role_prompt, user_prompt, profile.model_ref, profile.temperature});
    if (trim(response).empty()) {
        throw Error(ErrorCode::BackendEmptyResponse, "agent '" + profile.id + "' returned an empty response");
    }
    return response;
}

std::string build_selection_prompt(std::string_view state, std::span<const Tool* const> candidates) {
    std::string prompt = "Choose the single most suitable tool to support the request below.\n\nRequest:\n";
    prompt += state;
    prompt += "\n\nAvailable tools:\n";
    for (const Tool* tool : candidates) {
        prompt += "- " + tool->name() + ": " + tool->documentation() + "\n";
    }
    prompt += "\nYou may reason briefly, but the last line of your answer must contain exactly one tool name from: " +
              candidate_list(candidates) + ".";
    return prompt;
}

ToolSelection select_tool(const AgentProfile& profile, CompletionBackend& backend, std::string_view state,
                          std::span<const Tool* const> candidates) {
    if (candidates.empty()) throw Error(ErrorCode::ToolSelectionFailed, "no candidate tools");
    ToolSelection selection;
    if (candidates.size() == 1) {
        selection.tool = candidates.front();
        return selection;
    }

    // Deterministic listing regardless of the caller's order.
    std::vector<const Tool*> sorted(candidates.begin(), candidates.end());
    std::sort(sorted.begin(), sorted.end(), [](const Tool* a, const Tool* b) { return a->name() < b->name(); });

    std::string prompt = build_selection_prompt(state, sorted);
    for (int attempt = 0; attempt < 2; ++attempt) {
        selection.prompts.push_back(prompt);
        std::string raw = backend.complete(CompletionRequest{profile.role_prompt, prompt, profile.model_ref, profile.temperature});
        const std::string answer(last_nonempty_line(raw));
        selection.raw_outputs.push_back(std::move(raw));
        for (const Tool* tool : sorted) {
            if (tool->name() == answer) {
                selection.tool = tool;
                return selection;
            }
        }
        prompt = build_selection_prompt(state, sorted) + "\n\nYour previous answer ended with \"" + answer +
                 "\", which is not one of the available tools. Reply with exactly one of: " + candidate_list(sorted) +
                 ".";
    }
    std::string message = "agent '" + profile.id + "' did not name a candidate tool; answers:";
    for (const auto& raw : selection.raw_outputs) message += " [" + raw + "]";
    throw ToolSelectionError(message, selection.raw_outputs);
}

}  // namespace agwf
