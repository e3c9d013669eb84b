#include "agwf/engine.hpp"

#include <algorithm>
#include <fstream>

#include "agwf/task_kinds.hpp"

namespace agwf {

std::string section_header(std::string_view task_id) { return "=== output of " + std::string(task_id) + " ==="; }

std::string append_state(std::string_view previous, std::string_view task_id, std::string_view addition) {
    std::string out;
    out.reserve(previous.size() + addition.size() + task_id.size() + 20);
    out += previous;
    out += '\n';
    out += section_header(task_id);
    out += '\n';
    out += addition;
    return out;
}

const TaskDetail* ExecutionRecord::detail(std::string_view task_id) const {
    const auto it = std::find_if(details.begin(), details.end(), [&](const TaskDetail& d) { return d.task_id == task_id; });
    return it == details.end() ? nullptr : &*it;
}

CompletionBackend& Backends::for_agent(const std::string& agent_id) const {
    if (const auto it = per_agent.find(agent_id); it != per_agent.end() && it->second) return *it->second;
    if (!fallback) throw Error(ErrorCode::ConfigError, "no completion backend for agent '" + agent_id + "'");
    return *fallback;
}

void run_callbacks(const TaskSpec& task, std::string_view response, const EntityMemory& /*memory*/) {
    for (const auto& name : task.callback_names) {
        if (name == "require_nonempty") {
            if (response.find_first_not_of(" \t\r\n") == std::string_view::npos) {
                throw Error(ErrorCode::CallbackCheckFailed, "task '" + task.id + "': require_nonempty failed");
            }
        } else if (name.rfind("require_contains:", 0) == 0 && name.size() > 17) {
            const auto needle = std::string_view(name).substr(17);
            if (response.find(needle) == std::string_view::npos) {
                throw Error(ErrorCode::CallbackCheckFailed,
                            "task '" + task.id + "': response does not contain '" + std::string(needle) + "'");
            }
        } else if (name.rfind("write_to_file:", 0) == 0 && name.size() > 14) {
            const std::string path = name.substr(14);
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            out.write(response.data(), static_cast<std::streamsize>(response.size()));
            out.close();
            if (!out) throw Error(ErrorCode::IoError, "task '" + task.id + "': cannot write '" + path + "'");
        } else {
            throw Error(ErrorCode::UnknownCallback, "task '" + task.id + "': unknown callback '" + name + "'");
        }
    }
}

namespace {

class Executor {
public:
    Executor(const WorkflowSpec& spec, const Backends& backends) : spec_(spec), backends_(backends) {}

    ExecutionRecord run(std::string inquiry, EntityMemory memory) {
        const auto order = linearize(spec_);
        record_.inquiry = inquiry;
        record_.states.push_back(std::move(inquiry));
        memory_ = std::move(memory);

        try {
            for (const auto& id : order) {
                const TaskSpec& task = *spec_.find_task(id);
                memory_before_.push_back(memory_);
                record_.details.push_back(TaskDetail{});
                TaskDetail& detail = record_.details.back();
                detail.task_id = task.id;
                detail.kind = task.kind;

                std::string section = attempt(task, record_.states.back(), detail);
                if (task.kind == TaskKind::Evaluator && !detail.skipped) section = evaluate(task, detail, section);
                if (!detail.skipped) run_callbacks(task, section, memory_);

                record_.task_sequence.push_back(task.id);
                record_.states.push_back(append_state(record_.states.back(), task.id, section));
                if (task.id == spec_.final_task) record_.final_output = section;
            }
        } catch (const Error& e) {
            fail(e.code(), e.what());
        } catch (const std::exception& e) {
            fail(ErrorCode::IoError, e.what());
        }
        record_.completed = true;
        record_.memory_final = memory_;
        return std::move(record_);
    }

private:
    [[noreturn]] void fail(ErrorCode code, const std::string& message) {
        record_.error_code = code;
        record_.error_message = message;
        record_.memory_final = memory_;
        throw ExecutionError(code, message, std::move(record_));
    }

    // One try of `task` on `state`; returns the text to append.
    std::string attempt(const TaskSpec& task, const std::string& state, TaskDetail& detail) {
        if (task.guard && guard_skips(*task.guard, state)) {
            detail.skipped = true;
            detail.raw_response = std::string(kSkippedText);
            detail.attempts.push_back(Attempt{"", std::string(kSkippedText), std::nullopt, ""});
            return std::string(kSkippedText);
        }
        detail.skipped = false;

        const AgentProfile& profile = *spec_.find_agent(task.agent_id);
        CompletionBackend& backend = backends_.for_agent(task.agent_id);

        std::optional<std::string> tool_output;
        PromptContext context;
        if (!task.tool_names.empty()) {
            std::vector<const Tool*> candidates;
            for (const auto& name : task.tool_names) candidates.push_back(&spec_.registry.at(name));
            auto selection = select_tool(profile, backend, state, candidates);
            detail.selection_prompts.insert(detail.selection_prompts.end(), selection.prompts.begin(), selection.prompts.end());
            detail.selection_outputs.insert(detail.selection_outputs.end(), selection.raw_outputs.begin(),
                                            selection.raw_outputs.end());
            detail.selected_tool = selection.tool->name();
            tool_output = selection.tool->invoke(state, memory_);
            detail.tool_output = *tool_output;
            detail.tool_error = is_tool_error(*tool_output);
            context.tool_name = selection.tool->name();
        }
        if (task.kind == TaskKind::Router) context.route_options = route_options(spec_, task.id);

        detail.prompt_sent = build_prompt(task, state, tool_output, context);
        detail.raw_response = complete(profile, backend, detail.prompt_sent);
        detail.attempts.push_back(Attempt{detail.prompt_sent, detail.raw_response, detail.selected_tool, detail.tool_output});

        if (task.kind == TaskKind::Router) {
            detail.route = parse_route(detail.raw_response);
            if (std::find(context.route_options.begin(), context.route_options.end(), *detail.route) ==
                context.route_options.end()) {
                throw Error(ErrorCode::RouteMissing, "router '" + task.id + "' chose unknown route '" + *detail.route + "'");
            }
        }
        return detail.raw_response;
    }

    // Scores the evaluator's answer and wraps back to the target while the
    // score stays below threshold. Returns the accepted evaluator section.
    std::string evaluate(const TaskSpec& evaluator, TaskDetail& eval_detail, std::string section) {
        const EvaluatorConfig& config = *evaluator.evaluator;
        // validate() guarantees the target ran immediately before the evaluator.
        const std::size_t target_pos = record_.task_sequence.size() - 1;
        const TaskSpec& target = *spec_.find_task(config.target_task_id);

        while (true) {
            const EvaluatorResult result = parse_score(section);
            eval_detail.score_history.push_back(result.score);
            eval_detail.score = result.score;
            if (apply_wrap_back(config, result, eval_detail.retries_used) == WrapBackDecision::Accept) {
                eval_detail.low_quality = result.score < config.threshold;
                return section;
            }
            ++eval_detail.retries_used;

            // Back to the state and memory seen by the target's first run.
            memory_ = memory_before_[target_pos];
            TaskDetail& target_detail = record_.details[target_pos];
            ++target_detail.retries_used;
            const std::string target_section = attempt(target, record_.states[target_pos], target_detail);
            if (!target_detail.skipped) run_callbacks(target, target_section, memory_);
            record_.states[target_pos + 1] = append_state(record_.states[target_pos], target.id, target_section);
            if (target.id == spec_.final_task) record_.final_output = target_section;

            memory_before_.back() = memory_;
            section = attempt(evaluator, record_.states[target_pos + 1], eval_detail);
        }
    }

    const WorkflowSpec& spec_;
    const Backends& backends_;
    ExecutionRecord record_;
    EntityMemory memory_;
    std::vector<EntityMemory> memory_before_;
};

}  // namespace

ExecutionRecord execute(const WorkflowSpec& spec, std::string inquiry, const Backends& backends, EntityMemory memory) {
    return Executor(spec, backends).run(std::move(inquiry), std::move(memory));
}

}  // namespace agwf
