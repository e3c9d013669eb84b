#pragma once

// Brute-force reference implementations and seeded generators used by the
// property and acceptance tests. Nothing here calls into the discovery code.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "agwf/event_log.hpp"
#include "agwf/workflow.hpp"

#ifndef AGWF_TEST_DATA_DIR
#define AGWF_TEST_DATA_DIR "data"
#endif

namespace agwf::testing {

inline std::filesystem::path data_dir() { return AGWF_TEST_DATA_DIR; }
inline std::filesystem::path fixture(const std::string& name) { return data_dir() / "fixtures" / name; }

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline Timestamp at_seconds(long long s) { return Timestamp(std::chrono::seconds(s)); }

/// Log built from activity strings; events of each trace are one minute apart.
inline EventLog make_log(const std::vector<std::vector<std::string>>& sequences) {
    EventLog log;
    log.source_name = "inline";
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        Trace t;
        t.case_id = "c" + std::to_string(i + 1);
        for (std::size_t j = 0; j < sequences[i].size(); ++j) {
            t.events.push_back(Event{sequences[i][j], at_seconds(static_cast<long long>(j) * 60), {}});
        }
        log.traces.push_back(std::move(t));
    }
    return log;
}

// ---------------------------------------------------------------------------
// Discovery oracles

struct NaiveEdge {
    std::size_t frequency = 0;
    double total_seconds = 0.0;
};

struct NaiveDfg {
    std::map<std::pair<std::string, std::string>, NaiveEdge> edges;
    std::map<std::string, std::size_t> starts;
    std::map<std::string, std::size_t> ends;
};

/// Double loop over event positions; counts (i, j) with j == i + 1.
inline NaiveDfg naive_dfg(const EventLog& log) {
    NaiveDfg out;
    for (const auto& trace : log.traces) {
        const auto& ev = trace.events;
        for (std::size_t i = 0; i < ev.size(); ++i) {
            for (std::size_t j = 0; j < ev.size(); ++j) {
                if (j != i + 1) continue;
                auto& e = out.edges[{ev[i].activity, ev[j].activity}];
                e.frequency += 1;
                e.total_seconds +=
                    std::chrono::duration<double>(ev[j].timestamp - ev[i].timestamp).count();
            }
        }
        if (!ev.empty()) {
            out.starts[ev.front().activity] += 1;
            out.ends[ev.back().activity] += 1;
        }
    }
    return out;
}

/// Groups traces by activity sequence, then orders by (count desc, sequence asc)
/// using a plain comparison sort.
inline std::vector<std::pair<std::vector<std::string>, std::size_t>> naive_variants(const EventLog& log) {
    std::vector<std::pair<std::vector<std::string>, std::size_t>> groups;
    for (const auto& trace : log.traces) {
        std::vector<std::string> seq;
        for (const auto& e : trace.events) seq.push_back(e.activity);
        bool found = false;
        for (auto& g : groups) {
            if (g.first == seq) {
                ++g.second;
                found = true;
            }
        }
        if (!found) groups.emplace_back(seq, 1);
    }
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return groups;
}

// ---------------------------------------------------------------------------
// Generators

/// ≤ max_traces traces of ≤ max_events events over an alphabet of ≤ 4 letters.
/// Timestamps are whole seconds, non-decreasing within a trace (equal
/// timestamps occur), so the generated order is the canonical order.
inline EventLog random_log(std::mt19937& rng, std::size_t max_traces = 6, std::size_t max_events = 6) {
    std::uniform_int_distribution<std::size_t> n_traces(0, max_traces);
    std::uniform_int_distribution<std::size_t> n_events(0, max_events);
    std::uniform_int_distribution<int> alphabet_size(1, 4);
    std::uniform_int_distribution<int> gap(0, 3);
    const int letters = alphabet_size(rng);
    std::uniform_int_distribution<int> letter(0, letters - 1);
    std::bernoulli_distribution female(0.5);
    std::uniform_int_distribution<int> age(18, 80);

    EventLog log;
    log.source_name = "random";
    const auto traces = n_traces(rng);
    for (std::size_t i = 0; i < traces; ++i) {
        Trace t;
        t.case_id = "case" + std::to_string(i);
        t.case_attributes["gender"] = std::string(female(rng) ? "F" : "M");
        t.case_attributes["age"] = static_cast<std::int64_t>(age(rng));
        long long clock = 1'700'000'000 + static_cast<long long>(i) * 86'400;
        const auto events = n_events(rng);
        for (std::size_t j = 0; j < events; ++j) {
            clock += gap(rng) * 30;
            t.events.push_back(Event{std::string(1, static_cast<char>('a' + letter(rng))), at_seconds(clock), {}});
        }
        log.traces.push_back(std::move(t));
    }
    return log;
}

/// XES rendering of a log whose attributes are text or integers.
inline std::string to_xes(const EventLog& log) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<log xes.version=\"1.0\">\n";
    for (const auto& t : log.traces) {
        out << "  <trace>\n    <string key=\"concept:name\" value=\"" << t.case_id << "\"/>\n";
        for (const auto& [k, v] : t.case_attributes) {
            if (const auto* i = std::get_if<std::int64_t>(&v)) {
                out << "    <int key=\"" << k << "\" value=\"" << *i << "\"/>\n";
            } else {
                out << "    <string key=\"" << k << "\" value=\"" << scalar_to_string(v) << "\"/>\n";
            }
        }
        for (const auto& e : t.events) {
            out << "    <event>\n      <string key=\"concept:name\" value=\"" << e.activity << "\"/>\n"
                << "      <date key=\"time:timestamp\" value=\"" << format_iso8601(e.timestamp) << "\"/>\n    </event>\n";
        }
        out << "  </trace>\n";
    }
    out << "</log>\n";
    return out.str();
}

struct RandomDag {
    /// Task ids in a valid topological order; front is t1, back is tf.
    std::vector<std::string> order;
    std::map<std::string, std::set<std::string>> prec;
};

/// Random DAG of 1..max_tasks tasks in which every task descends from the
/// first and reaches the last. Ids are random two-letter names, so the
/// lexicographic tie-break is exercised against the generation order.
inline RandomDag random_dag(std::mt19937& rng, std::size_t max_tasks = 10) {
    std::uniform_int_distribution<std::size_t> n_tasks(1, max_tasks);
    std::uniform_int_distribution<int> ch(0, 25);
    const auto n = n_tasks(rng);
    std::set<std::string> used;
    RandomDag dag;
    while (dag.order.size() < n) {
        std::string id{static_cast<char>('A' + ch(rng)), static_cast<char>('a' + ch(rng))};
        if (used.insert(id).second) dag.order.push_back(id);
    }
    std::bernoulli_distribution extra(0.3);
    for (std::size_t j = 1; j < n; ++j) {
        std::uniform_int_distribution<std::size_t> pick(0, j - 1);
        dag.prec[dag.order[j]].insert(dag.order[pick(rng)]);
        for (std::size_t i = 0; i < j; ++i) {
            if (extra(rng)) dag.prec[dag.order[j]].insert(dag.order[i]);
        }
    }
    // The final task must succeed every other task: hook up every sink.
    if (n > 1) {
        std::set<std::string> has_successor;
        for (const auto& [task, preds] : dag.prec) has_successor.insert(preds.begin(), preds.end());
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!has_successor.count(dag.order[i])) dag.prec[dag.order.back()].insert(dag.order[i]);
        }
    }
    return dag;
}

/// True if `to` is reachable from `from` following successor edges.
inline bool reaches(const RandomDag& dag, const std::string& from, const std::string& to) {
    std::set<std::string> seen{from};
    std::vector<std::string> stack{from};
    while (!stack.empty()) {
        const auto cur = stack.back();
        stack.pop_back();
        if (cur == to) return true;
        for (const auto& [task, preds] : dag.prec) {
            if (preds.count(cur) && seen.insert(task).second) stack.push_back(task);
        }
    }
    return false;
}

inline WorkflowSpec spec_from_dag(const RandomDag& dag) {
    WorkflowSpec spec;
    spec.agents.push_back(AgentProfile{"agent", "You are a helpful analyst.", "model", 0.0});
    for (const auto& id : dag.order) {
        TaskSpec t;
        t.id = id;
        t.agent_id = "agent";
        t.instruction = "Do " + id;
        t.expected_output = "Result of " + id;
        spec.tasks.push_back(std::move(t));
    }
    spec.prec = dag.prec;
    spec.initial_task = dag.order.front();
    spec.final_task = dag.order.back();
    return spec;
}

}  // namespace agwf::testing
