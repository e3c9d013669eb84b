#include "agwf/workflow_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace agwf {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::ConfigError, where + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) bad(where, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) bad(where, "unknown key '" + key + "'");
    }
}

const json& required(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) bad(where, "missing key '" + key + "'");
    return obj.at(key);
}

std::string text(const json& value, const std::string& where) {
    if (!value.is_string()) bad(where, "expected a string");
    return value.get<std::string>();
}

double number(const json& value, const std::string& where) {
    if (!value.is_number()) bad(where, "expected a number");
    return value.get<double>();
}

std::vector<std::string> text_list(const json& value, const std::string& where) {
    if (!value.is_array()) bad(where, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < value.size(); ++i) out.push_back(text(value[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

AgentProfile parse_agent(const json& j, const std::string& where) {
    reject_unknown(j, where, {"id", "role_prompt", "model_ref", "temperature"});
    AgentProfile a;
    a.id = text(required(j, where, "id"), where + ".id");
    a.role_prompt = text(required(j, where, "role_prompt"), where + ".role_prompt");
    if (j.contains("model_ref")) a.model_ref = text(j.at("model_ref"), where + ".model_ref");
    if (j.contains("temperature")) {
        a.temperature = number(j.at("temperature"), where + ".temperature");
        if (a.temperature < 0.0) bad(where + ".temperature", "must be >= 0");
    }
    return a;
}

TaskSpec parse_task(const json& j, const std::string& where, std::set<std::string>& prec_out) {
    reject_unknown(j, where,
                   {"id", "kind", "agent", "instruction", "expected_output", "tools", "prec", "guard", "callbacks",
                    "evaluator"});
    TaskSpec t;
    t.id = text(required(j, where, "id"), where + ".id");
    if (j.contains("kind")) {
        const auto kind = text(j.at("kind"), where + ".kind");
        const auto parsed = parse_task_kind(kind);
        if (!parsed) bad(where + ".kind", "unknown task kind '" + kind + "'");
        t.kind = *parsed;
    }
    t.agent_id = text(required(j, where, "agent"), where + ".agent");
    t.instruction = text(required(j, where, "instruction"), where + ".instruction");
    t.expected_output = text(required(j, where, "expected_output"), where + ".expected_output");
    if (j.contains("tools")) {
        for (auto& name : text_list(j.at("tools"), where + ".tools")) t.tool_names.insert(std::move(name));
    }
    if (j.contains("prec")) {
        for (auto& p : text_list(j.at("prec"), where + ".prec")) prec_out.insert(std::move(p));
    }
    if (j.contains("guard")) {
        const auto& g = j.at("guard");
        reject_unknown(g, where + ".guard", {"router", "route"});
        t.guard = RouterGuard{text(required(g, where + ".guard", "router"), where + ".guard.router"),
                              text(required(g, where + ".guard", "route"), where + ".guard.route")};
    }
    if (j.contains("callbacks")) t.callback_names = text_list(j.at("callbacks"), where + ".callbacks");
    if (j.contains("evaluator")) {
        const auto& e = j.at("evaluator");
        const std::string ew = where + ".evaluator";
        reject_unknown(e, ew, {"threshold", "max_retries", "target"});
        EvaluatorConfig config;
        config.threshold = number(required(e, ew, "threshold"), ew + ".threshold");
        if (e.contains("max_retries")) {
            const auto& m = e.at("max_retries");
            if (!m.is_number_unsigned()) bad(ew + ".max_retries", "expected a non-negative integer");
            config.max_retries = m.get<std::size_t>();
        }
        config.target_task_id = text(required(e, ew, "target"), ew + ".target");
        t.evaluator = config;
    }
    return t;
}

}  // namespace

WorkflowSpec parse_workflow(const json& doc, ToolRegistry registry) {
    reject_unknown(doc, "workflow", {"schema_version", "description", "agents", "tasks", "initial_task", "final_task"});
    const auto& version = required(doc, "workflow", "schema_version");
    if (!version.is_number_integer() || version.get<int>() != kWorkflowSchemaVersion) {
        bad("workflow.schema_version", "expected " + std::to_string(kWorkflowSchemaVersion));
    }
    if (doc.contains("description")) text(doc.at("description"), "workflow.description");

    WorkflowSpec spec;
    spec.registry = std::move(registry);
    const auto& agents = required(doc, "workflow", "agents");
    if (!agents.is_array()) bad("workflow.agents", "expected an array");
    for (std::size_t i = 0; i < agents.size(); ++i) {
        spec.agents.push_back(parse_agent(agents[i], "agents[" + std::to_string(i) + "]"));
    }
    const auto& tasks = required(doc, "workflow", "tasks");
    if (!tasks.is_array()) bad("workflow.tasks", "expected an array");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        std::set<std::string> prec;
        auto task = parse_task(tasks[i], "tasks[" + std::to_string(i) + "]", prec);
        if (!prec.empty()) spec.prec[task.id].insert(prec.begin(), prec.end());
        spec.tasks.push_back(std::move(task));
    }
    spec.initial_task = text(required(doc, "workflow", "initial_task"), "workflow.initial_task");
    spec.final_task = text(required(doc, "workflow", "final_task"), "workflow.final_task");
    return spec;
}

WorkflowSpec parse_workflow(std::string_view text, ToolRegistry registry) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ConfigError, std::string("workflow is not valid JSON: ") + e.what());
    }
    return parse_workflow(doc, std::move(registry));
}

WorkflowSpec load_workflow(const std::filesystem::path& path, ToolRegistry registry) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open workflow '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_workflow(std::string_view(buffer.str()), std::move(registry));
}

namespace {

json optional_text(const std::optional<std::string>& value) { return value ? json(*value) : json(nullptr); }

json memory_to_json(const EntityMemory& memory) {
    json out = json::object();
    for (const auto& [key, value] : memory.entries()) {
        if (const auto* log = std::get_if<LogHandle>(&value)) {
            out[key] = {{"type", "event_log"},
                        {"source_name", (*log)->source_name},
                        {"traces", (*log)->traces.size()},
                        {"events", (*log)->event_count()}};
        } else {
            out[key] = {{"type", "text"}, {"value", std::get<std::string>(value)}};
        }
    }
    return out;
}

}  // namespace

json record_to_json(const ExecutionRecord& record) {
    json details = json::array();
    for (const auto& d : record.details) {
        json attempts = json::array();
        for (const auto& a : d.attempts) {
            attempts.push_back({{"prompt", a.prompt},
                                {"response", a.response},
                                {"selected_tool", optional_text(a.selected_tool)},
                                {"tool_output", a.tool_output}});
        }
        details.push_back({
            {"task_id", d.task_id},
            {"kind", std::string(to_string(d.kind))},
            {"selected_tool", optional_text(d.selected_tool)},
            {"selection_prompts", d.selection_prompts},
            {"selection_outputs", d.selection_outputs},
            {"tool_output", d.tool_output},
            {"tool_error", d.tool_error},
            {"prompt_sent", d.prompt_sent},
            {"raw_response", d.raw_response},
            {"retries_used", d.retries_used},
            {"skipped", d.skipped},
            {"route", optional_text(d.route)},
            {"score", d.score ? json(*d.score) : json(nullptr)},
            {"score_history", d.score_history},
            {"low_quality", d.low_quality},
            {"attempts", std::move(attempts)},
        });
    }
    json error = nullptr;
    if (record.error_code) error = {{"code", std::string(to_string(*record.error_code))}, {"message", record.error_message}};
    return {
        {"schema_version", kWorkflowSchemaVersion},
        {"inquiry", record.inquiry},
        {"task_sequence", record.task_sequence},
        {"states", record.states},
        {"details", std::move(details)},
        {"memory_final", memory_to_json(record.memory_final)},
        {"final_output", record.final_output},
        {"final_state", record.states.empty() ? std::string() : record.states.back()},
        {"completed", record.completed},
        {"error", std::move(error)},
    };
}

}  // namespace agwf
