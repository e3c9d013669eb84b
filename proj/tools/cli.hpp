#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace agwf::cli {

/// Stable exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// A bundled workflow with its scripted answers and the inquiry it runs on.
struct Demo {
    std::string name;
    std::filesystem::path workflow;
    std::filesystem::path script;
    std::string inquiry;
};

std::vector<std::string> demo_names();
std::optional<Demo> find_demo(const std::string& name, const std::filesystem::path& data_dir);

/// Directory holding `demos/` and `fixtures/`: $AGWF_DATA_DIR when set,
/// otherwise the source tree's data directory.
std::filesystem::path default_data_dir();

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace agwf::cli
