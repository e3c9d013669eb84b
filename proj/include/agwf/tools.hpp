#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agwf/discovery.hpp"
#include "agwf/entity_memory.hpp"
#include "agwf/log_parsers.hpp"

namespace agwf {

/// Prefix of in-band tool failures.
inline constexpr std::string_view kToolErrorPrefix = "TOOL-ERROR: ";

/// A deterministic, partial text-to-text function with a documentation string
/// that agents read when choosing among tools.
class Tool {
public:
    using Function = std::function<std::string(std::string_view state, EntityMemory& memory)>;

    Tool(std::string name, std::string documentation, Function function);

    const std::string& name() const noexcept { return name_; }
    const std::string& documentation() const noexcept { return documentation_; }

    /// Runs the tool on the workflow state. Failures are returned as text
    /// starting with kToolErrorPrefix instead of being thrown.
    std::string invoke(std::string_view state, EntityMemory& memory) const;

private:
    std::string name_;
    std::string documentation_;
    Function function_;
};

bool is_tool_error(std::string_view output) noexcept;

class ToolRegistry {
public:
    /// Throws ConfigError on a duplicate or non-identifier name.
    void add(Tool tool);

    const Tool* find(std::string_view name) const;
    /// Throws ConfigError for unknown names.
    const Tool& at(std::string_view name) const;

    std::vector<std::string> names() const;
    std::size_t size() const noexcept { return tools_.size(); }

private:
    std::map<std::string, Tool, std::less<>> tools_;
};

// Directive micro-syntax: lines of the form `<name>: <value>` anywhere in the
// state. The last occurrence wins.
std::optional<std::string> find_directive(std::string_view state, std::string_view name);

/// Locates the event log an inquiry refers to: the last occurrence in `state`
/// of either an entity reference `@<key>` or a path token ending in `.xes` /
/// `.csv`. Entity references resolve from `memory`; paths are loaded from disk
/// (relative paths against the working directory).
///
/// Throws NoLogReference, UnknownEntityKey, EntityTypeMismatch, or the
/// loader's errors.
LogHandle resolve_log_reference(std::string_view state, const EntityMemory& memory);

inline constexpr std::size_t kDefaultDfgTopK = 25;
inline constexpr std::size_t kDefaultVariantsTopK = 15;
inline constexpr std::size_t kDefaultComparisonLimit = 25;

/// Text format:
///
///     DFG (top <k> edges of <n>):
///     <a> -> <b> (freq=<f>, avg_dur=<s>s)
///     ...
///     start: <act>=<count>, ...
///     end: <act>=<count>, ...
///
/// Edges by frequency descending, ties by (source, target). Start/end entries
/// by count descending, ties by name. Lines are separated by '\n' with no
/// trailing newline.
std::string abstract_dfg(const Dfg& dfg, std::size_t top_k = kDefaultDfgTopK);

/// `Variants (top <k> of <n>):` then `<a>,<b>,<c> (count=<m>)` per variant in
/// table order. An empty trace renders as `(empty)`.
std::string abstract_variants(const VariantTable& table, std::size_t top_k = kDefaultVariantsTopK);

/// One line per finding, at most `limit`; `no behavioral differences found`
/// when there are none.
std::string render_comparison(const DfgComparison& comparison, std::size_t limit = kDefaultComparisonLimit);

/// Registry holding dfg_discovery, variants_discovery, split_log_by_predicate
/// and compare_group_dfgs.
ToolRegistry builtin_registry();

}  // namespace agwf
