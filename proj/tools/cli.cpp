#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"

#include "agwf/agents.hpp"
#include "agwf/discovery.hpp"
#include "agwf/engine.hpp"
#include "agwf/log_parsers.hpp"
#include "agwf/tools.hpp"
#include "agwf/workflow_io.hpp"

#ifndef AGWF_DEFAULT_DATA_DIR
#define AGWF_DEFAULT_DATA_DIR "data"
#endif

namespace agwf::cli {

namespace fs = std::filesystem;

std::vector<std::string> demo_names() { return {"fairness", "rca", "violations"}; }

std::optional<Demo> find_demo(const std::string& name, const fs::path& data_dir) {
    const fs::path fixtures = data_dir / "fixtures";
    std::string inquiry;
    if (name == "violations") {
        inquiry = "Tell me the violations in the process contained in the event log at " + (fixtures / "p2p.xes").string();
    } else if (name == "fairness") {
        inquiry = "Assess whether the process contained in the event log at " + (fixtures / "fairness.xes").string() +
                  " treats loan applicants fairly with respect to their gender.";
    } else if (name == "rca") {
        inquiry = "Find the root causes of the problems in the process contained in the event log at " +
                  (fixtures / "p2p.xes").string();
    } else {
        return std::nullopt;
    }
    const fs::path dir = data_dir / "demos" / name;
    return Demo{name, dir / "workflow.json", dir / "script.json", inquiry};
}

fs::path default_data_dir() {
    if (const char* env = std::getenv("AGWF_DATA_DIR"); env && *env) return env;
    return AGWF_DEFAULT_DATA_DIR;
}

namespace {

struct BackendChoice {
    std::string scripted;  // rules file
    bool scripted_flag = false;
    std::string http;
    std::string api_key;
    std::string model;
    long timeout_ms = 120'000;
    int retries = 2;
};

std::string env_or(const char* name, const std::string& fallback) {
    if (const char* v = std::getenv(name); v && *v) return v;
    return fallback;
}

// Throws Error(ConfigError) on an ambiguous or missing selection.
std::shared_ptr<CompletionBackend> make_backend(const BackendChoice& choice, const fs::path& default_script) {
    const bool scripted = choice.scripted_flag || !choice.scripted.empty();
    std::string endpoint = choice.http;
    if (scripted && !endpoint.empty()) throw Error(ErrorCode::ConfigError, "choose either --scripted or --http, not both");
    if (!scripted && endpoint.empty()) endpoint = env_or("AGWF_ENDPOINT", "");
    if (scripted) {
        const fs::path rules = choice.scripted.empty() ? default_script : fs::path(choice.scripted);
        if (rules.empty()) throw Error(ErrorCode::ConfigError, "--scripted needs a rules file");
        return std::make_shared<ScriptedBackend>(ScriptedBackend::load(rules));
    }
    if (endpoint.empty()) {
        throw Error(ErrorCode::ConfigError, "no backend selected: pass --scripted <rules> or --http <url> (or set AGWF_ENDPOINT)");
    }
    HttpBackendOptions options;
    options.endpoint_url = endpoint;
    options.api_key = choice.api_key.empty() ? env_or("AGWF_API_KEY", "") : choice.api_key;
    options.default_model = choice.model;
    options.timeout = std::chrono::milliseconds(choice.timeout_ms);
    options.retries = choice.retries;
    return std::shared_ptr<CompletionBackend>(http_chat_backend(std::move(options)));
}

void print_record(const ExecutionRecord& record, std::ostream& out) {
    for (const auto& d : record.details) {
        out << "## " << d.task_id << " (" << to_string(d.kind) << ")";
        if (d.skipped) {
            out << " SKIPPED\n";
            continue;
        }
        out << "\n";
        if (d.selected_tool) out << "tool " << *d.selected_tool << ":\n" << d.tool_output << "\n";
        if (d.retries_used > 0) out << "retries: " << d.retries_used << "\n";
        if (d.score) out << "score: " << *d.score << (d.low_quality ? " (low quality, accepted)" : "") << "\n";
        if (d.route) out << "route: " << *d.route << "\n";
        out << "response:\n" << d.raw_response << "\n\n";
    }
}


int execute_and_report(const fs::path& workflow_path, const std::string& inquiry, const BackendChoice& choice,
                       const fs::path& default_script, const std::string& output_path, bool verbose,
                       std::ostream& out, std::ostream& err) {
    WorkflowSpec spec;
    std::shared_ptr<CompletionBackend> backend;
    try {
        spec = load_workflow(workflow_path, builtin_registry());
        backend = make_backend(choice, default_script);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const auto violations = validate(spec);
    if (!violations.empty()) {
        for (const auto& v : violations) err << to_string(v.kind) << " [" << v.subject << "]: " << v.message << "\n";
        return kExitFailure;
    }

    ExecutionRecord record;
    int code = kExitOk;
    try {
        record = execute(spec, inquiry, Backends{backend, {}});
    } catch (const ExecutionError& e) {
        record = e.record();
        err << "execution failed: " << e.what() << "\n";
        code = kExitFailure;
    }

    if (!output_path.empty()) {
        std::ofstream file(output_path, std::ios::binary | std::ios::trunc);
        file << record_to_json(record).dump(2) << "\n";
        if (!file) {
            err << "error: cannot write transcript '" << output_path << "'\n";
            code = kExitFailure;
        }
    }

    if (verbose) print_record(record, out);
    for (const auto& d : record.details) {
        if (d.tool_error) {
            err << "tool error in " << d.task_id << ": " << d.tool_output << "\n";
            code = kExitFailure;
        }
    }
    if (record.completed) {
        out << "=== final state ===\n" << record.final_state() << "\n";
        out << "=== final output (" << spec.final_task << ") ===\n" << record.final_output << "\n";
    }
    return code;
}

void add_backend_options(CLI::App& cmd, BackendChoice& choice, bool optional_script) {
    if (optional_script) {
        cmd.add_option("--scripted", choice.scripted, "Scripted rules file (default: the demo's bundled rules)")
            ->expected(0, 1);
        // A bare --scripted yields no value, so record the flag itself.
        cmd.callback([&choice, &cmd] {
            if (cmd.count("--scripted") > 0) choice.scripted_flag = true;
        });
    } else {
        cmd.add_option("--scripted", choice.scripted, "Scripted rules file (deterministic backend)");
    }
    cmd.add_option("--http", choice.http, "OpenAI-compatible chat completions URL (or AGWF_ENDPOINT)");
    cmd.add_option("--api-key", choice.api_key, "Bearer token (or AGWF_API_KEY)");
    cmd.add_option("--model", choice.model, "Model for agents without model_ref");
    cmd.add_option("--timeout-ms", choice.timeout_ms, "Per-call time budget in milliseconds")->check(CLI::PositiveNumber);
    cmd.add_option("--retries", choice.retries, "Retries after transient HTTP failures")->check(CLI::NonNegativeNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"agwf: AI-based agent workflows over process mining tools"};
    app.require_subcommand(1);

    std::string workflow_file;
    auto* validate_cmd = app.add_subcommand("validate", "Check a workflow definition");
    validate_cmd->add_option("file", workflow_file, "Workflow JSON")->required();

    std::string inquiry;
    std::string output_path;
    bool verbose = false;
    BackendChoice run_choice;
    auto* run_cmd = app.add_subcommand("run", "Execute a workflow on an inquiry");
    run_cmd->add_option("file", workflow_file, "Workflow JSON")->required();
    run_cmd->add_option("--inquiry", inquiry, "Initial inquiry (the first state)")->required();
    run_cmd->add_option("--output", output_path, "Write the JSON transcript here");
    run_cmd->add_flag("-v,--verbose", verbose, "Print every task's tool output and response");
    add_backend_options(*run_cmd, run_choice, false);

    std::string log_path;
    std::string kind;
    std::size_t top_k = 0;
    auto* abstract_cmd = app.add_subcommand("abstract", "Print a textual abstraction of an event log");
    abstract_cmd->add_option("log", log_path, "Event log (.xes or .csv)")->required();
    abstract_cmd->add_option("--kind", kind, "dfg or variants")->required()->check(CLI::IsMember({"dfg", "variants"}));
    abstract_cmd->add_option("--top-k", top_k, "Number of edges/variants to list")->check(CLI::PositiveNumber);

    std::string demo_name;
    std::string data_dir;
    BackendChoice demo_choice;
    auto* demo_cmd = app.add_subcommand("demo", "Run a bundled demo workflow (fairness, rca, violations)");
    demo_cmd->add_option("name", demo_name, "Demo name")->required();
    demo_cmd->add_option("--output", output_path, "Write the JSON transcript here");
    demo_cmd->add_option("--data-dir", data_dir, "Directory with demos/ and fixtures/");
    add_backend_options(*demo_cmd, demo_choice, true);

    auto* tools_cmd = app.add_subcommand("tools", "List the built-in tools and their documentation");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*validate_cmd) {
        try {
            const auto spec = load_workflow(workflow_file, builtin_registry());
            const auto violations = validate(spec);
            for (const auto& v : violations) out << to_string(v.kind) << " [" << v.subject << "]: " << v.message << "\n";
            if (!violations.empty()) return kExitFailure;
            out << "OK: " << spec.tasks.size() << " tasks, order";
            for (const auto& id : linearize(spec)) out << " " << id;
            out << "\n";
            return kExitOk;
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kExitUsage;
        }
    }

    if (*run_cmd) {
        return execute_and_report(workflow_file, inquiry, run_choice, {}, output_path, verbose, out, err);
    }

    if (*abstract_cmd) {
        try {
            const auto log = load_event_log(log_path);
            if (kind == "dfg") {
                out << abstract_dfg(discover_dfg(log), top_k ? top_k : kDefaultDfgTopK) << "\n";
            } else {
                out << abstract_variants(discover_variants(log), top_k ? top_k : kDefaultVariantsTopK) << "\n";
            }
            return kExitOk;
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kExitUsage;
        }
    }

    if (*demo_cmd) {
        const fs::path dir = data_dir.empty() ? default_data_dir() : fs::path(data_dir);
        const auto demo = find_demo(demo_name, dir);
        if (!demo) {
            err << "error: unknown demo '" << demo_name << "' (available:";
            for (const auto& n : demo_names()) err << " " << n;
            err << ")\n";
            return kExitUsage;
        }
        out << "inquiry: " << demo->inquiry << "\n\n";
        return execute_and_report(demo->workflow, demo->inquiry, demo_choice, demo->script, output_path, true, out, err);
    }

    if (*tools_cmd) {
        const auto registry = builtin_registry();
        for (const auto& name : registry.names()) out << name << "\n    " << registry.at(name).documentation() << "\n\n";
        return kExitOk;
    }
    return kExitUsage;
}

}  // namespace agwf::cli
