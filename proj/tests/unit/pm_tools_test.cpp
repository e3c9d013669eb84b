#include <gtest/gtest.h>

#include <random>
#include <regex>
#include <sstream>

#include "agwf/discovery.hpp"
#include "agwf/error.hpp"
#include "agwf/tools.hpp"
#include "oracles.hpp"

namespace agwf {
namespace {

using testing::fixture;
using testing::make_log;

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

// --- directives and log references -------------------------------------------

TEST(Directives, LastOccurrenceWins) {
    const std::string state = "Q\npredicate: a = 1\n=== output of T1 ===\n  predicate:   b = 2  \nnoise";
    EXPECT_EQ(find_directive(state, "predicate"), "b = 2");
    EXPECT_FALSE(find_directive(state, "groups"));
    EXPECT_FALSE(find_directive("the predicate: is inline", "predicate"));
}

TEST(ResolveLogReference, PathInState) {
    const auto path = fixture("p2p.xes").string();
    const auto log = resolve_log_reference("Tell me the violations in the log at " + path + ".", EntityMemory{});
    EXPECT_EQ(log->traces.size(), 8u);
}

TEST(ResolveLogReference, EntityReference) {
    EntityMemory memory;
    memory.store_log("protected", make_log({{"a"}}));
    EXPECT_EQ(resolve_log_reference("compare @protected now", memory)->traces.size(), 1u);
}

TEST(ResolveLogReference, LastOccurrenceWins) {
    EntityMemory memory;
    memory.store_log("protected", make_log({{"a"}, {"b"}, {"c"}}));
    const auto path = fixture("p2p.xes").string();
    EXPECT_EQ(resolve_log_reference(path + " then @protected", memory)->traces.size(), 3u);
    EXPECT_EQ(resolve_log_reference("@protected then " + path, memory)->traces.size(), 8u);
}

TEST(ResolveLogReference, Errors) {
    const auto code = [](std::string_view state, const EntityMemory& memory) {
        try {
            resolve_log_reference(state, memory);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::ConfigError;
    };
    EntityMemory memory;
    memory.store("note", std::string("text"));
    EXPECT_EQ(code("no log here", memory), ErrorCode::NoLogReference);
    EXPECT_EQ(code("mail me at someone@example.org", memory), ErrorCode::NoLogReference);
    EXPECT_EQ(code("use @missing", memory), ErrorCode::UnknownEntityKey);
    EXPECT_EQ(code("use @note", memory), ErrorCode::EntityTypeMismatch);
    EXPECT_EQ(code("load /nonexistent/log.xes", memory), ErrorCode::IoError);
}

// --- abstractions ---------------------------------------------------------------

TEST(AbstractDfg, LineFormat) {
    Dfg dfg;
    dfg.edges[{"a", "b"}] = EdgeStats{1, 60.0};
    dfg.start_activities["a"] = 1;
    dfg.end_activities["b"] = 1;
    EXPECT_EQ(abstract_dfg(dfg), "DFG (top 1 edges of 1):\na -> b (freq=1, avg_dur=60.0s)\nstart: a=1\nend: b=1");
}

TEST(AbstractDfg, EmptyAndTruncated) {
    EXPECT_EQ(abstract_dfg(Dfg{}), "DFG (top 0 edges of 0):\nstart:\nend:");
    const auto dfg = discover_dfg(make_log({{"a", "b", "c", "d"}}));
    const auto lines = lines_of(abstract_dfg(dfg, 1));
    EXPECT_EQ(lines.front(), "DFG (top 1 edges of 3):");
    EXPECT_EQ(lines.size(), 4u);  // header, 1 edge, start, end
}

TEST(AbstractDfg, OrderingAndStartEnd) {
    const auto dfg = discover_dfg(make_log({{"x", "y"}, {"a", "b"}, {"a", "b"}, {"c", "b"}}));
    const auto lines = lines_of(abstract_dfg(dfg));
    ASSERT_EQ(lines.size(), 6u);
    EXPECT_EQ(lines[1], "a -> b (freq=2, avg_dur=60.0s)");
    EXPECT_EQ(lines[2], "c -> b (freq=1, avg_dur=60.0s)");
    EXPECT_EQ(lines[3], "x -> y (freq=1, avg_dur=60.0s)");
    EXPECT_EQ(lines[4], "start: a=2, c=1, x=1");
    EXPECT_EQ(lines[5], "end: b=3, y=1");
}

TEST(AbstractDfgProperty, ParseBackFaithfulness) {
    const std::regex edge_line(R"((.+) -> (.+) \(freq=(\d+), avg_dur=([0-9.]+)s\))");
    std::mt19937 rng(5);
    for (int round = 0; round < 100; ++round) {
        const auto dfg = discover_dfg(testing::random_log(rng));
        const auto lines = lines_of(abstract_dfg(dfg, 1000));
        std::size_t edges = 0;
        for (const auto& line : lines) {
            std::smatch m;
            if (!std::regex_match(line, m, edge_line)) continue;
            ++edges;
            const auto it = dfg.edges.find({m[1], m[2]});
            ASSERT_NE(it, dfg.edges.end()) << line;
            ASSERT_EQ(std::stoul(m[3]), it->second.frequency) << line;
        }
        ASSERT_EQ(edges, dfg.edges.size());
    }
}

TEST(AbstractVariants, Format) {
    EXPECT_EQ(abstract_variants(VariantTable{{{{"a", "b"}, 2}}}), "Variants (top 1 of 1):\na,b (count=2)");
    EXPECT_EQ(abstract_variants(VariantTable{}), "Variants (top 0 of 0):");
    const auto table = discover_variants(make_log({{"a"}, {"b"}, {"c"}, {"d"}, {"e"}}));
    const auto lines = lines_of(abstract_variants(table, 2));
    EXPECT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0], "Variants (top 2 of 5):");
}

TEST(RenderComparison, Lines) {
    DfgComparison only;
    only.findings.push_back(ComparisonFinding{{"Request", "Extra Check"}, 5, 0, 1.0, FindingKind::OnlyInA});
    EXPECT_EQ(render_comparison(only), "edge Request -> Extra Check: only in group A (freq 5 vs 0)");

    EXPECT_EQ(render_comparison(DfgComparison{}), "no behavioral differences found");

    DfgComparison shift;
    ComparisonFinding f{{"x", "y"}, 9, 1, 0.8, FindingKind::FrequencyShift};
    f.relative_freq_a = 0.9;
    f.relative_freq_b = 0.1;
    shift.findings.push_back(f);
    const auto text = render_comparison(shift);
    EXPECT_NE(text.find("0.900"), std::string::npos);
    EXPECT_NE(text.find("0.100"), std::string::npos);
}

TEST(RenderComparison, Limit) {
    DfgComparison cmp;
    for (int i = 0; i < 4; ++i) {
        cmp.findings.push_back(ComparisonFinding{{"a", std::to_string(i)}, 1, 0, 0.25, FindingKind::OnlyInA});
    }
    const auto lines = lines_of(render_comparison(cmp, 2));
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[2], "(2 more findings omitted)");
}

// --- registry and built-in tools -------------------------------------------------

TEST(ToolRegistry, BuiltinsAndValidation) {
    auto registry = builtin_registry();
    EXPECT_NE(registry.find("dfg_discovery"), nullptr);
    EXPECT_EQ(registry.names(), (std::vector<std::string>{"compare_group_dfgs", "dfg_discovery",
                                                          "split_log_by_predicate", "variants_discovery"}));
    for (const auto& name : registry.names()) EXPECT_FALSE(registry.at(name).documentation().empty());
    const auto noop = [](std::string_view, EntityMemory&) { return std::string(); };
    EXPECT_THROW(registry.add(Tool("dfg_discovery", "dup", noop)), Error);
    EXPECT_THROW(registry.add(Tool("bad name", "x", noop)), Error);
    EXPECT_THROW((void)registry.at("nope"), Error);
}

TEST(Tool, ErrorsBecomeText) {
    const Tool failing("failing", "always fails",
                       [](std::string_view, EntityMemory&) -> std::string { throw std::runtime_error("boom"); });
    EntityMemory memory;
    const auto out = failing.invoke("x", memory);
    EXPECT_TRUE(is_tool_error(out));
    EXPECT_EQ(out.rfind("TOOL-ERROR: failing", 0), 0u);

    const auto registry = builtin_registry();
    const auto missing = registry.at("dfg_discovery").invoke("no log reference at all", memory);
    EXPECT_TRUE(is_tool_error(missing));
    EXPECT_NE(missing.find("NoLogReference"), std::string::npos);
}

TEST(BuiltinTools, DfgAndVariantsMatchAbstractions) {
    const auto registry = builtin_registry();
    const auto path = fixture("p2p.xes");
    const auto log = load_event_log(path);
    EntityMemory memory;
    const std::string state = "Tell me about " + path.string();
    EXPECT_EQ(registry.at("dfg_discovery").invoke(state, memory), abstract_dfg(discover_dfg(log)));
    EXPECT_EQ(registry.at("variants_discovery").invoke(state, memory), abstract_variants(discover_variants(log)));
    EXPECT_EQ(registry.at("dfg_discovery").invoke(state + "\ntop_k: 2", memory), abstract_dfg(discover_dfg(log), 2));
}

TEST(BuiltinTools, SplitStoresBothHalves) {
    const auto registry = builtin_registry();
    EntityMemory memory;
    const std::string state =
        "Assess " + fixture("fairness_small.xes").string() + "\npredicate: gender = \"F\"\nstore_as: protected,non_protected";
    const auto out = registry.at("split_log_by_predicate").invoke(state, memory);
    EXPECT_NE(out.find("protected=2 cases, non-protected=2 cases"), std::string::npos) << out;
    ASSERT_TRUE(memory.contains("protected"));
    ASSERT_TRUE(memory.contains("non_protected"));
    EXPECT_EQ(memory.load_log("protected")->traces.size(), 2u);

    // Keys are write-once: a second split into the same keys is a tool error.
    EXPECT_TRUE(is_tool_error(registry.at("split_log_by_predicate").invoke(state, memory)));
    // Missing predicate directive.
    EntityMemory fresh;
    EXPECT_TRUE(is_tool_error(registry.at("split_log_by_predicate").invoke("log " + fixture("p2p.xes").string(), fresh)));
    EXPECT_EQ(fresh.size(), 0u);
}

TEST(BuiltinTools, CompareGroups) {
    const auto registry = builtin_registry();
    EntityMemory memory;
    const std::string split_state =
        fixture("fairness_small.xes").string() + "\npredicate: gender = \"F\"\nstore_as: prot,rest";
    ASSERT_FALSE(is_tool_error(registry.at("split_log_by_predicate").invoke(split_state, memory)));
    const auto out = registry.at("compare_group_dfgs").invoke("groups: @prot,@rest", memory);
    EXPECT_NE(out.find("Extra Check"), std::string::npos) << out;
    EXPECT_NE(out.find("only in group A"), std::string::npos) << out;
    EXPECT_EQ(out.rfind("group A = @prot (2 cases), group B = @rest (2 cases)", 0), 0u) << out;

    EXPECT_TRUE(is_tool_error(registry.at("compare_group_dfgs").invoke("no groups", memory)));
    EXPECT_TRUE(is_tool_error(registry.at("compare_group_dfgs").invoke("groups: @prot,@missing", memory)));
}

TEST(BuiltinToolsProperty, Determinism) {
    const auto registry = builtin_registry();
    const std::string base = fixture("fairness.xes").string() + "\npredicate: gender = \"F\" and age < 50\n";
    EntityMemory seeded;
    seeded.store_log("a", load_event_log(fixture("fairness_small.xes")));
    seeded.store_log("b", load_event_log(fixture("p2p.xes")));
    const std::vector<std::string> states = {base, base + "groups: @a,@b", "@b", base + "top_k: 3"};
    for (const auto& name : registry.names()) {
        for (const auto& state : states) {
            EntityMemory m1 = seeded;
            EntityMemory m2 = seeded;
            EXPECT_EQ(registry.at(name).invoke(state, m1), registry.at(name).invoke(state, m2)) << name;
        }
    }
}

}  // namespace
}  // namespace agwf
