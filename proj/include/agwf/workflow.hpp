#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "agwf/agents.hpp"
#include "agwf/tools.hpp"

namespace agwf {

enum class TaskKind { Plain, PromptOptimizer, Ensemble, Router, Evaluator, Improver };

std::string_view to_string(TaskKind kind) noexcept;
std::optional<TaskKind> parse_task_kind(std::string_view text) noexcept;

/// Skips the guarded task unless the router's section in the state ends with
/// `ROUTE: <expected_route_token>`.
struct RouterGuard {
    std::string router_task_id;
    std::string expected_route_token;
};

struct EvaluatorConfig {
    double threshold = 5.0;
    std::size_t max_retries = 2;
    std::string target_task_id;
};

struct TaskSpec {
    std::string id;
    TaskKind kind = TaskKind::Plain;
    std::string agent_id;
    std::string instruction;
    std::string expected_output;
    std::set<std::string> tool_names;
    std::optional<RouterGuard> guard;
    std::vector<std::string> callback_names;
    std::optional<EvaluatorConfig> evaluator;
};

struct WorkflowSpec {
    std::vector<TaskSpec> tasks;
    std::map<std::string, std::set<std::string>> prec;
    std::string initial_task;
    std::string final_task;
    std::vector<AgentProfile> agents;
    ToolRegistry registry;

    const TaskSpec* find_task(std::string_view id) const;
    const AgentProfile* find_agent(std::string_view id) const;
    /// Direct predecessors; empty for tasks without a prec entry.
    const std::set<std::string>& predecessors(const std::string& task_id) const;
};

enum class ViolationKind {
    EmptyWorkflow,
    EmptyTaskId,
    DuplicateTaskId,
    DuplicateAgentId,
    EmptyRolePrompt,
    UnknownAgent,
    UnknownTool,
    UnknownPrecTask,
    UnknownInitialTask,
    UnknownFinalTask,
    CycleDetected,
    InitialTaskHasPredecessors,
    UnreachableFromInitial,
    FinalTaskNotReachable,
    EvaluatorConfigMismatch,
    InvalidEvaluatorConfig,
    InvalidGuard,
    UnknownCallback,
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
    ViolationKind kind;
    /// Task id, agent id or edge (`a -> b`) the rule was violated at.
    std::string subject;
    std::string message;
};

/// Structural checks. Beyond the precedence DAG rules this also enforces:
/// agent/tool/callback references resolve; evaluators carry a config with a
/// threshold in [1,10] and target the task placed immediately before them by
/// linearize(); guards name a router task that precedes the guarded task.
std::vector<Violation> validate(const WorkflowSpec& spec);

/// Topological order of every task; among ready tasks the smallest id goes
/// first. Throws InvalidWorkflow when validate() reports violations.
std::vector<std::string> linearize(const WorkflowSpec& spec);

/// Callback names understood by the engine: `require_nonempty`,
/// `require_contains:<needle>`, `write_to_file:<path>`.
bool is_known_callback(std::string_view name) noexcept;

}  // namespace agwf
