#include "agwf/task_kinds.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "agwf/engine.hpp"
#include "agwf/error.hpp"

namespace agwf {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        out.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

// Index of the last line whose trimmed text starts with `tag`.
std::optional<std::size_t> last_tagged_line(const std::vector<std::string_view>& lines, std::string_view tag) {
    for (std::size_t i = lines.size(); i-- > 0;) {
        const auto line = trim(lines[i]);
        if (line.substr(0, tag.size()) == tag) return i;
    }
    return std::nullopt;
}

std::string framing(const TaskSpec& task) {
    switch (task.kind) {
        case TaskKind::Plain:
            return {};
        case TaskKind::PromptOptimizer:
            return "Rewrite the inquiry above into a clear, self-contained request tailored to the capabilities of the "
                   "AI agents that will handle it.";
        case TaskKind::Ensemble:
            return "The sections above collate insights from different perspectives. Merge them into one coherent "
                   "answer containing the main results.";
        case TaskKind::Router:
            return "Decide which of the following branches should handle the request.";
        case TaskKind::Evaluator:
            return "Evaluate the quality of the output of task " +
                   (task.evaluator ? task.evaluator->target_task_id : std::string("(unknown)")) + " above.";
        case TaskKind::Improver:
            return "Improve the quality of the output of the previous tasks (second opinion): fix mistakes and make "
                   "it more precise.";
    }
    return {};
}

}  // namespace

std::string build_prompt(const TaskSpec& task, std::string_view state, const std::optional<std::string>& tool_output,
                         const PromptContext& context) {
    std::string prompt(state);
    if (tool_output) {
        prompt += "\n\n--- output of tool " + (context.tool_name.empty() ? std::string("(unnamed)") : context.tool_name) +
                  " ---\n" + *tool_output + "\n--- end of tool output ---";
    }
    prompt += "\n\n";
    if (const auto f = framing(task); !f.empty()) prompt += f + "\n";
    prompt += "Task: " + task.instruction + "\n";
    prompt += "Expected output: " + task.expected_output;
    if (task.kind == TaskKind::Router) {
        std::string options;
        for (std::size_t i = 0; i < context.route_options.size(); ++i) {
            if (i > 0) options += ", ";
            options += context.route_options[i];
        }
        prompt += "\nEnd your answer with a final line `ROUTE: <option>` where <option> is one of: " + options + ".";
    }
    if (task.kind == TaskKind::Evaluator) {
        prompt += "\nEnd your answer with a final line `SCORE: <1.0-10.0>` grading the output from 1.0 (worst) to "
                  "10.0 (best).";
    }
    return prompt;
}

std::string parse_route(std::string_view response) {
    static constexpr std::string_view tag = "ROUTE:";
    const auto lines = lines_of(response);
    const auto idx = last_tagged_line(lines, tag);
    if (!idx) throw Error(ErrorCode::RouteMissing, "response has no 'ROUTE: <token>' line");
    const auto token = trim(trim(lines[*idx]).substr(tag.size()));
    if (token.empty()) throw Error(ErrorCode::RouteMissing, "'ROUTE:' line names no token");
    return std::string(token);
}

EvaluatorResult parse_score(std::string_view response) {
    static constexpr std::string_view tag = "SCORE:";
    const auto lines = lines_of(response);
    const auto idx = last_tagged_line(lines, tag);
    if (!idx) throw Error(ErrorCode::ScoreMissing, "response has no 'SCORE: <number>' line");
    const std::string number(trim(trim(lines[*idx]).substr(tag.size())));

    double score = 0.0;
    try {
        std::size_t used = 0;
        score = std::stod(number, &used);
        if (used != number.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
        throw Error(ErrorCode::ScoreMissing, "'SCORE:' line does not hold a number: '" + number + "'");
    }
    if (!std::isfinite(score) || score < 1.0 || score > 10.0) {
        throw Error(ErrorCode::ScoreOutOfRange, "score " + number + " is outside [1.0, 10.0]");
    }

    std::string rationale;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i == *idx) continue;
        if (!rationale.empty()) rationale += '\n';
        rationale += lines[i];
    }
    return EvaluatorResult{score, std::string(trim(rationale))};
}

WrapBackDecision apply_wrap_back(const EvaluatorConfig& config, const EvaluatorResult& result,
                                 std::size_t retries_used) noexcept {
    return result.score < config.threshold && retries_used < config.max_retries ? WrapBackDecision::Retry
                                                                                 : WrapBackDecision::Accept;
}

std::vector<std::string> route_options(const WorkflowSpec& spec, std::string_view router_task_id) {
    std::vector<std::string> out;
    for (const auto& t : spec.tasks) {
        if (t.guard && t.guard->router_task_id == router_task_id) out.push_back(t.guard->expected_route_token);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<std::string> find_section(std::string_view state, std::string_view task_id) {
    const std::string header = section_header(task_id);
    const std::string marker = "\n" + header + "\n";
    std::size_t pos = std::string_view::npos;
    for (std::size_t p = state.find(marker); p != std::string_view::npos; p = state.find(marker, p + 1)) pos = p;
    if (pos == std::string_view::npos) return std::nullopt;
    const std::size_t body = pos + marker.size();
    const std::size_t next = state.find("\n=== output of ", body);
    return std::string(state.substr(body, next == std::string_view::npos ? std::string_view::npos : next - body));
}

bool guard_skips(const RouterGuard& guard, std::string_view state) {
    const auto section = find_section(state, guard.router_task_id);
    if (!section) return true;
    try {
        return parse_route(*section) != guard.expected_route_token;
    } catch (const Error&) {
        return true;
    }
}

}  // namespace agwf
