#pragma once

#include <filesystem>
#include <string_view>

#include <nlohmann/json.hpp>

#include "agwf/engine.hpp"
#include "agwf/workflow.hpp"

namespace agwf {

inline constexpr int kWorkflowSchemaVersion = 1;

/// Workflow definition document (schema_version 1):
///
///     {
///       "schema_version": 1,
///       "description": "...",                       (optional)
///       "agents": [{"id", "role_prompt", "model_ref", "temperature"?}],
///       "tasks": [{"id", "kind"?, "agent", "instruction", "expected_output",
///                  "tools"?, "prec"?, "guard"?: {"router", "route"},
///                  "callbacks"?, "evaluator"?: {"threshold", "max_retries"?, "target"}}],
///       "initial_task": "...",
///       "final_task": "..."
///     }
///
/// Unknown keys are rejected. Shape errors throw ConfigError; reference and
/// graph problems are left to validate().
WorkflowSpec parse_workflow(const nlohmann::json& doc, ToolRegistry registry);
WorkflowSpec parse_workflow(std::string_view text, ToolRegistry registry);
/// Throws IoError if the file cannot be read.
WorkflowSpec load_workflow(const std::filesystem::path& path, ToolRegistry registry);

/// Transcript document mirroring ExecutionRecord.
nlohmann::json record_to_json(const ExecutionRecord& record);

}  // namespace agwf
