#include <cctype>
#include <charconv>

#include "agwf/error.hpp"
#include "agwf/predicate.hpp"
#include "agwf/tools.hpp"

namespace agwf {

namespace {

std::vector<std::string> split_keys(const std::string& value) {
    std::vector<std::string> keys;
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t end = value.find(',', start);
        if (end == std::string::npos) end = value.size();
        std::string key = value.substr(start, end - start);
        while (!key.empty() && std::isspace(static_cast<unsigned char>(key.front()))) key.erase(0, 1);
        while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
        if (!key.empty() && key.front() == '@') key.erase(0, 1);
        keys.push_back(key);
        start = end + 1;
    }
    return keys;
}

std::pair<std::string, std::string> two_keys(std::string_view state, std::string_view directive,
                                             std::optional<std::pair<std::string, std::string>> fallback) {
    const auto value = find_directive(state, directive);
    if (!value) {
        if (fallback) return *fallback;
        throw Error(ErrorCode::MissingDirective, "directive '" + std::string(directive) + ": <k1>,<k2>' not found");
    }
    const auto keys = split_keys(*value);
    if (keys.size() != 2 || keys[0].empty() || keys[1].empty() || keys[0] == keys[1]) {
        throw Error(ErrorCode::MissingDirective,
                    "directive '" + std::string(directive) + "' needs two distinct keys, got '" + *value + "'");
    }
    return {keys[0], keys[1]};
}

std::size_t count_directive(std::string_view state, std::string_view name, std::size_t fallback) {
    const auto value = find_directive(state, name);
    if (!value) return fallback;
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(value->data(), value->data() + value->size(), n);
    if (ec != std::errc{} || ptr != value->data() + value->size() || n == 0) {
        throw Error(ErrorCode::MissingDirective,
                    "directive '" + std::string(name) + "' must be a positive integer, got '" + *value + "'");
    }
    return n;
}

double threshold_directive(std::string_view state, std::string_view name, double fallback) {
    const auto value = find_directive(state, name);
    if (!value) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(*value, &used);
        if (used == value->size() && v >= 0.0 && v <= 1.0) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::MissingDirective,
                "directive '" + std::string(name) + "' must be a number in [0,1], got '" + *value + "'");
}

}  // namespace

ToolRegistry builtin_registry() {
    ToolRegistry registry;

    registry.add(Tool(
        "dfg_discovery",
        "Computes the directly-follows graph (DFG) of the event log referenced in the request: which activity "
        "directly follows which, how often, and the average time between them. Input: the request text; the log is "
        "the last '@<key>' entity reference or '.xes'/'.csv' path it mentions. Optional directive line "
        "'top_k: <n>' limits the listed edges (default 25). Output: a 'DFG (top k edges of n):' listing with one "
        "'<a> -> <b> (freq=<f>, avg_dur=<s>s)' line per edge, followed by start and end activity counts. Best for "
        "control-flow anomalies between consecutive activities and performance bottlenecks on transitions.",
        [](std::string_view state, EntityMemory& memory) {
            const auto log = resolve_log_reference(state, memory);
            return abstract_dfg(discover_dfg(*log), count_directive(state, "top_k", kDefaultDfgTopK));
        }));

    registry.add(Tool(
        "variants_discovery",
        "Lists the process variants (distinct end-to-end activity sequences) of the event log referenced in the "
        "request, with how many cases follow each. Input: the request text; the log is the last '@<key>' entity "
        "reference or '.xes'/'.csv' path it mentions. Optional directive line 'top_k: <n>' limits the listed "
        "variants (default 15). Output: a 'Variants (top k of n):' listing with one '<a>,<b>,<c> (count=<m>)' line "
        "per variant, most frequent first. Best for behavior spanning a whole case, such as repeated or "
        "non-consecutive activities.",
        [](std::string_view state, EntityMemory& memory) {
            const auto log = resolve_log_reference(state, memory);
            return abstract_variants(discover_variants(*log), count_directive(state, "top_k", kDefaultVariantsTopK));
        }));

    registry.add(Tool(
        "split_log_by_predicate",
        "Splits the event log referenced in the request into a protected group (cases whose case attributes "
        "satisfy a predicate) and the non-protected remainder, and stores both sub-logs in the entity memory. "
        "Required directive line 'predicate: <expr>' where <expr> is a conjunction of comparisons such as "
        "'gender = \"F\" and age < 30'. Optional directive 'store_as: <k1>,<k2>' names the memory keys (default "
        "'protected,non_protected'). Output: one summary line with the size of both groups and the keys "
        "('@<k1>', '@<k2>') under which later tasks can reference them.",
        [](std::string_view state, EntityMemory& memory) {
            const auto expression = find_directive(state, "predicate");
            if (!expression) throw Error(ErrorCode::MissingDirective, "directive 'predicate: <expr>' not found");
            const auto predicate = parse_predicate(*expression);
            const auto [key_in, key_out] =
                two_keys(state, "store_as", std::make_pair(std::string("protected"), std::string("non_protected")));
            if (memory.contains(key_in)) throw Error(ErrorCode::DuplicateKey, "entity '" + key_in + "' is already stored");
            if (memory.contains(key_out)) throw Error(ErrorCode::DuplicateKey, "entity '" + key_out + "' is already stored");

            const auto log = resolve_log_reference(state, memory);
            auto [protected_log, other_log] = split_log(*log, predicate);
            const std::size_t n_in = protected_log.traces.size();
            const std::size_t n_out = other_log.traces.size();
            memory.store_log(key_in, std::move(protected_log));
            memory.store_log(key_out, std::move(other_log));
            return "protected=" + std::to_string(n_in) + " cases, non-protected=" + std::to_string(n_out) +
                   " cases (predicate: " + predicate.to_string() + "; stored as @" + key_in + ", @" + key_out + ")";
        }));

    registry.add(Tool(
        "compare_group_dfgs",
        "Compares the behavior of two groups of cases previously stored in the entity memory by discovering the "
        "directly-follows graph of each and listing the differences. Required directive line 'groups: @<k1>,@<k2>' "
        "(group A first). Optional directives 'shift_threshold: <0..1>' (default 0.05) for frequency shifts and "
        "'limit: <n>' (default 25) for the number of findings. Output: a header naming both groups and their sizes, "
        "then one line per finding such as 'edge <a> -> <b>: only in group A (freq 5 vs 0)' or a frequency/duration "
        "shift with both relative frequencies. Best for fairness and group comparisons.",
        [](std::string_view state, EntityMemory& memory) {
            const auto [key_a, key_b] = two_keys(state, "groups", std::nullopt);
            const auto log_a = memory.load_log(key_a);
            const auto log_b = memory.load_log(key_b);
            ComparisonThresholds thresholds;
            thresholds.frequency_shift = threshold_directive(state, "shift_threshold", thresholds.frequency_shift);
            const auto comparison = compare_dfgs(discover_dfg(*log_a), discover_dfg(*log_b), thresholds);
            return "group A = @" + key_a + " (" + std::to_string(log_a->traces.size()) + " cases), group B = @" +
                   key_b + " (" + std::to_string(log_b->traces.size()) + " cases)\n" +
                   render_comparison(comparison, count_directive(state, "limit", kDefaultComparisonLimit));
        }));

    return registry;
}

}  // namespace agwf
