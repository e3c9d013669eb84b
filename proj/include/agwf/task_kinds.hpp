#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agwf/workflow.hpp"

namespace agwf {

/// Extra inputs some kinds need when building their prompt.
struct PromptContext {
    /// Tool that produced `tool_output`, if any.
    std::string tool_name;
    /// Route tokens a router may choose from.
    std::vector<std::string> route_options;
};

/// Deterministic prompt template. Skeleton: the state, then the tool output
/// block (if any), then a kind-specific framing line, the instruction, and
/// `Expected output: <expected_output>`. Routers are told to end with
/// `ROUTE: <option>`, evaluators with `SCORE: <1.0-10.0>`.
std::string build_prompt(const TaskSpec& task, std::string_view state, const std::optional<std::string>& tool_output,
                         const PromptContext& context = {});

/// Token of the last line of the form `ROUTE: <token>`. Throws RouteMissing.
std::string parse_route(std::string_view response);

struct EvaluatorResult {
    double score = 0.0;
    std::string rationale;
};

/// Score from the last `SCORE: <number>` line; the rationale is the response
/// without that line. Throws ScoreMissing, or ScoreOutOfRange outside [1, 10].
EvaluatorResult parse_score(std::string_view response);

enum class WrapBackDecision { Accept, Retry };

/// Retry iff the score is below the threshold and retries remain.
WrapBackDecision apply_wrap_back(const EvaluatorConfig& config, const EvaluatorResult& result,
                                 std::size_t retries_used) noexcept;

/// Route tokens of every guard that references `router_task_id`, sorted and
/// de-duplicated.
std::vector<std::string> route_options(const WorkflowSpec& spec, std::string_view router_task_id);

/// Body of the most recent `=== output of <task_id> ===` section of a state.
std::optional<std::string> find_section(std::string_view state, std::string_view task_id);

/// True when the guard's router section does not end with
/// `ROUTE: <expected token>` (including a missing or skipped router section).
bool guard_skips(const RouterGuard& guard, std::string_view state);

}  // namespace agwf
