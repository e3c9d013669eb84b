#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agwf/agents.hpp"
#include "agwf/entity_memory.hpp"
#include "agwf/error.hpp"
#include "agwf/workflow.hpp"

namespace agwf {

/// `=== output of <task_id> ===`
std::string section_header(std::string_view task_id);

/// The state-extension operator: `previous + "\n" + header + "\n" + addition`.
std::string append_state(std::string_view previous, std::string_view task_id, std::string_view addition);

/// Section text recorded for skipped tasks.
inline constexpr std::string_view kSkippedText = "SKIPPED";

/// One try of a task: the prompt sent and what came back.
struct Attempt {
    std::string prompt;
    std::string response;
    std::optional<std::string> selected_tool;
    std::string tool_output;
};

struct TaskDetail {
    std::string task_id;
    TaskKind kind = TaskKind::Plain;
    std::optional<std::string> selected_tool;
    std::vector<std::string> selection_prompts;
    std::vector<std::string> selection_outputs;
    std::string tool_output;
    bool tool_error = false;
    std::string prompt_sent;
    std::string raw_response;
    /// Number of wrap-back re-executions (on the evaluator and on its target).
    std::size_t retries_used = 0;
    bool skipped = false;
    /// Router decision, for router tasks.
    std::optional<std::string> route;
    /// Accepted score, for evaluator tasks.
    std::optional<double> score;
    std::vector<double> score_history;
    /// Evaluator accepted a below-threshold score after exhausting retries.
    bool low_quality = false;
    /// Every try, including those discarded by wrap-back.
    std::vector<Attempt> attempts;
};

struct ExecutionRecord {
    std::string inquiry;
    std::vector<std::string> task_sequence;
    /// sigma_0 .. sigma_f; states.size() == task_sequence.size() + 1 once complete.
    std::vector<std::string> states;
    std::vector<TaskDetail> details;
    EntityMemory memory_final;
    /// Response of the final task, when it ran.
    std::string final_output;
    bool completed = false;
    /// Set when the run aborted.
    std::optional<ErrorCode> error_code;
    std::string error_message;

    const TaskDetail* detail(std::string_view task_id) const;
    const std::string& final_state() const { return states.back(); }
};

/// Execution abort; carries the partial record.
class ExecutionError : public Error {
public:
    ExecutionError(ErrorCode cause, const std::string& message, ExecutionRecord record)
        : Error(cause, message), record_(std::make_shared<ExecutionRecord>(std::move(record))) {}

    const ExecutionRecord& record() const noexcept { return *record_; }

private:
    std::shared_ptr<ExecutionRecord> record_;
};

/// Which backend serves which agent. Agents without an explicit binding use
/// `fallback`.
struct Backends {
    std::shared_ptr<CompletionBackend> fallback;
    std::map<std::string, std::shared_ptr<CompletionBackend>> per_agent;

    CompletionBackend& for_agent(const std::string& agent_id) const;
};

/// Runs the task's callbacks in declared order. `require_nonempty` and
/// `require_contains:<needle>` throw CallbackCheckFailed; `write_to_file:<path>`
/// writes the response verbatim (IoError on failure). Unknown names throw
/// UnknownCallback.
void run_callbacks(const TaskSpec& task, std::string_view response, const EntityMemory& memory);

/// Sequential execution of a validated workflow. Tasks run in linearize()
/// order; each appends exactly one section to the state. Tool output is shown
/// to the task's agent but never appended. Evaluators may wrap back to their
/// target task (the task immediately before them) up to max_retries times;
/// only the accepted attempt stays in the state.
///
/// Throws InvalidWorkflow for invalid specs and ExecutionError (carrying the
/// partial record) when a backend, selection, routing, scoring or callback
/// step fails.
ExecutionRecord execute(const WorkflowSpec& spec, std::string inquiry, const Backends& backends,
                        EntityMemory memory = {});

}  // namespace agwf
