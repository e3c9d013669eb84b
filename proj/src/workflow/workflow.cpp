#include "agwf/workflow.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "agwf/error.hpp"

namespace agwf {

std::string_view to_string(TaskKind kind) noexcept {
    switch (kind) {
        case TaskKind::Plain: return "plain";
        case TaskKind::PromptOptimizer: return "prompt_optimizer";
        case TaskKind::Ensemble: return "ensemble";
        case TaskKind::Router: return "router";
        case TaskKind::Evaluator: return "evaluator";
        case TaskKind::Improver: return "improver";
    }
    return "plain";
}

std::optional<TaskKind> parse_task_kind(std::string_view text) noexcept {
    for (const auto kind : {TaskKind::Plain, TaskKind::PromptOptimizer, TaskKind::Ensemble, TaskKind::Router,
                            TaskKind::Evaluator, TaskKind::Improver}) {
        if (to_string(kind) == text) return kind;
    }
    return std::nullopt;
}

std::string_view to_string(ViolationKind kind) noexcept {
    switch (kind) {
        case ViolationKind::EmptyWorkflow: return "EmptyWorkflow";
        case ViolationKind::EmptyTaskId: return "EmptyTaskId";
        case ViolationKind::DuplicateTaskId: return "DuplicateTaskId";
        case ViolationKind::DuplicateAgentId: return "DuplicateAgentId";
        case ViolationKind::EmptyRolePrompt: return "EmptyRolePrompt";
        case ViolationKind::UnknownAgent: return "UnknownAgent";
        case ViolationKind::UnknownTool: return "UnknownTool";
        case ViolationKind::UnknownPrecTask: return "UnknownPrecTask";
        case ViolationKind::UnknownInitialTask: return "UnknownInitialTask";
        case ViolationKind::UnknownFinalTask: return "UnknownFinalTask";
        case ViolationKind::CycleDetected: return "CycleDetected";
        case ViolationKind::InitialTaskHasPredecessors: return "InitialTaskHasPredecessors";
        case ViolationKind::UnreachableFromInitial: return "UnreachableFromInitial";
        case ViolationKind::FinalTaskNotReachable: return "FinalTaskNotReachable";
        case ViolationKind::EvaluatorConfigMismatch: return "EvaluatorConfigMismatch";
        case ViolationKind::InvalidEvaluatorConfig: return "InvalidEvaluatorConfig";
        case ViolationKind::InvalidGuard: return "InvalidGuard";
        case ViolationKind::UnknownCallback: return "UnknownCallback";
    }
    return "Unknown";
}

bool is_known_callback(std::string_view name) noexcept {
    if (name == "require_nonempty") return true;
    for (std::string_view prefix : {"require_contains:", "write_to_file:"}) {
        if (name.size() > prefix.size() && name.substr(0, prefix.size()) == prefix) return true;
    }
    return false;
}

const TaskSpec* WorkflowSpec::find_task(std::string_view id) const {
    const auto it = std::find_if(tasks.begin(), tasks.end(), [&](const TaskSpec& t) { return t.id == id; });
    return it == tasks.end() ? nullptr : &*it;
}

const AgentProfile* WorkflowSpec::find_agent(std::string_view id) const {
    const auto it = std::find_if(agents.begin(), agents.end(), [&](const AgentProfile& a) { return a.id == id; });
    return it == agents.end() ? nullptr : &*it;
}

const std::set<std::string>& WorkflowSpec::predecessors(const std::string& task_id) const {
    static const std::set<std::string> none;
    const auto it = prec.find(task_id);
    return it == prec.end() ? none : it->second;
}

namespace {

using Graph = std::map<std::string, std::set<std::string>>;

struct Edges {
    Graph preds;  // task -> direct predecessors (known tasks only)
    Graph succs;  // task -> direct successors
};

Edges build_edges(const WorkflowSpec& spec, const std::set<std::string>& ids) {
    Edges e;
    for (const auto& id : ids) {
        e.preds[id];
        e.succs[id];
    }
    for (const auto& [task, preds] : spec.prec) {
        if (!ids.count(task)) continue;
        for (const auto& p : preds) {
            if (!ids.count(p)) continue;
            e.preds[task].insert(p);
            e.succs[p].insert(task);
        }
    }
    return e;
}

// Kahn's algorithm with a lexicographic ready set; nullopt on a cycle.
std::optional<std::vector<std::string>> topo_order(const Edges& e) {
    std::map<std::string, std::size_t> indegree;
    std::set<std::string> ready;
    for (const auto& [id, preds] : e.preds) {
        indegree[id] = preds.size();
        if (preds.empty()) ready.insert(id);
    }
    std::vector<std::string> order;
    while (!ready.empty()) {
        const std::string next = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(next);
        for (const auto& s : e.succs.at(next)) {
            if (--indegree[s] == 0) ready.insert(s);
        }
    }
    if (order.size() != e.preds.size()) return std::nullopt;
    return order;
}

// Strongly connected components that contain a cycle (size > 1 or self-loop).
std::vector<std::vector<std::string>> cyclic_components(const Edges& e) {
    std::map<std::string, int> index, low;
    std::map<std::string, bool> on_stack;
    std::vector<std::string> stack;
    std::vector<std::vector<std::string>> out;
    int counter = 0;

    std::function<void(const std::string&)> strongconnect = [&](const std::string& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (const auto& w : e.succs.at(v)) {
            if (!index.count(w)) {
                strongconnect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::string> comp;
            std::string w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            if (comp.size() > 1 || e.succs.at(v).count(v)) {
                std::sort(comp.begin(), comp.end());
                out.push_back(std::move(comp));
            }
        }
    };
    for (const auto& [id, _] : e.succs) {
        if (!index.count(id)) strongconnect(id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::set<std::string> reach(const Graph& g, const std::string& from) {
    std::set<std::string> seen{from};
    std::queue<std::string> q;
    q.push(from);
    while (!q.empty()) {
        const auto v = q.front();
        q.pop();
        for (const auto& w : g.at(v)) {
            if (seen.insert(w).second) q.push(w);
        }
    }
    return seen;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += sep;
        out += items[i];
    }
    return out;
}

}  // namespace

std::vector<Violation> validate(const WorkflowSpec& spec) {
    std::vector<Violation> out;
    auto add = [&](ViolationKind kind, std::string subject, std::string message) {
        out.push_back(Violation{kind, std::move(subject), std::move(message)});
    };

    if (spec.tasks.empty()) {
        add(ViolationKind::EmptyWorkflow, "", "workflow has no tasks");
        return out;
    }

    std::set<std::string> ids;
    for (const auto& t : spec.tasks) {
        if (t.id.empty()) add(ViolationKind::EmptyTaskId, "", "task with empty id");
        else if (!ids.insert(t.id).second) add(ViolationKind::DuplicateTaskId, t.id, "task id used more than once");
    }

    std::set<std::string> agent_ids;
    for (const auto& a : spec.agents) {
        if (!agent_ids.insert(a.id).second) add(ViolationKind::DuplicateAgentId, a.id, "agent id used more than once");
        if (a.role_prompt.empty()) add(ViolationKind::EmptyRolePrompt, a.id, "agent has an empty role prompt");
    }

    for (const auto& t : spec.tasks) {
        if (!agent_ids.count(t.agent_id)) {
            add(ViolationKind::UnknownAgent, t.id, "agent '" + t.agent_id + "' is not defined");
        }
        for (const auto& name : t.tool_names) {
            if (!spec.registry.find(name)) add(ViolationKind::UnknownTool, t.id, "tool '" + name + "' is not registered");
        }
        for (const auto& cb : t.callback_names) {
            if (!is_known_callback(cb)) add(ViolationKind::UnknownCallback, t.id, "callback '" + cb + "' is not built in");
        }
        const bool is_eval = t.kind == TaskKind::Evaluator;
        if (is_eval != t.evaluator.has_value()) {
            add(ViolationKind::EvaluatorConfigMismatch, t.id,
                is_eval ? "evaluator task lacks an evaluator config" : "only evaluator tasks may carry an evaluator config");
        }
        if (t.evaluator) {
            if (!(t.evaluator->threshold >= 1.0 && t.evaluator->threshold <= 10.0)) {
                add(ViolationKind::InvalidEvaluatorConfig, t.id, "threshold must lie in [1, 10]");
            }
            if (!ids.count(t.evaluator->target_task_id) || t.evaluator->target_task_id == t.id) {
                add(ViolationKind::InvalidEvaluatorConfig, t.id,
                    "target task '" + t.evaluator->target_task_id + "' does not exist");
            }
        }
        if (t.guard) {
            const auto* router = spec.find_task(t.guard->router_task_id);
            if (!router || router->kind != TaskKind::Router) {
                add(ViolationKind::InvalidGuard, t.id, "guard references '" + t.guard->router_task_id + "', which is not a router task");
            }
            if (t.guard->expected_route_token.empty()) add(ViolationKind::InvalidGuard, t.id, "guard has an empty route token");
        }
    }

    for (const auto& [task, preds] : spec.prec) {
        if (!ids.count(task)) add(ViolationKind::UnknownPrecTask, task, "prec entry for unknown task '" + task + "'");
        for (const auto& p : preds) {
            if (!ids.count(p)) add(ViolationKind::UnknownPrecTask, p + " -> " + task, "predecessor '" + p + "' does not exist");
        }
    }

    const bool has_initial = ids.count(spec.initial_task) != 0;
    const bool has_final = ids.count(spec.final_task) != 0;
    if (!has_initial) add(ViolationKind::UnknownInitialTask, spec.initial_task, "initial task does not exist");
    if (!has_final) add(ViolationKind::UnknownFinalTask, spec.final_task, "final task does not exist");

    const Edges edges = build_edges(spec, ids);
    const auto cycles = cyclic_components(edges);
    for (const auto& comp : cycles) {
        add(ViolationKind::CycleDetected, join(comp, ", "), "precedence cycle among {" + join(comp, ", ") + "}");
    }

    if (has_initial && !spec.predecessors(spec.initial_task).empty()) {
        add(ViolationKind::InitialTaskHasPredecessors, spec.initial_task,
            "initial task has predecessors {" +
                join({spec.predecessors(spec.initial_task).begin(), spec.predecessors(spec.initial_task).end()}, ", ") + "}");
    }
    if (has_initial) {
        const auto reached = reach(edges.succs, spec.initial_task);
        for (const auto& id : ids) {
            if (!reached.count(id)) add(ViolationKind::UnreachableFromInitial, id, "task is not a successor of the initial task");
        }
    }
    if (has_final) {
        const auto reaching = reach(edges.preds, spec.final_task);
        for (const auto& id : ids) {
            if (!reaching.count(id)) add(ViolationKind::FinalTaskNotReachable, id, "final task is not a successor of this task");
        }
    }

    // Checks that depend on the execution order.
    if (out.empty()) {
        const auto order = *topo_order(edges);
        std::map<std::string, std::size_t> position;
        for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
        for (const auto& t : spec.tasks) {
            if (t.evaluator) {
                const auto ancestors = reach(edges.preds, t.id);
                const auto& target = t.evaluator->target_task_id;
                if (!ancestors.count(target) || position[target] + 1 != position[t.id]) {
                    add(ViolationKind::InvalidEvaluatorConfig, t.id,
                        "target '" + target + "' must precede the evaluator and run immediately before it");
                }
            }
            if (t.guard) {
                const auto ancestors = reach(edges.preds, t.id);
                if (!ancestors.count(t.guard->router_task_id) || t.guard->router_task_id == t.id) {
                    add(ViolationKind::InvalidGuard, t.id,
                        "router '" + t.guard->router_task_id + "' must be a predecessor of the guarded task");
                }
            }
        }
    }
    return out;
}

std::vector<std::string> linearize(const WorkflowSpec& spec) {
    const auto violations = validate(spec);
    if (!violations.empty()) {
        std::string message = "workflow has " + std::to_string(violations.size()) + " violation(s):";
        for (const auto& v : violations) message += " " + std::string(to_string(v.kind)) + "(" + v.subject + ")";
        throw Error(ErrorCode::InvalidWorkflow, message);
    }
    std::set<std::string> ids;
    for (const auto& t : spec.tasks) ids.insert(t.id);
    return *topo_order(build_edges(spec, ids));
}

}  // namespace agwf
