#include "agwf/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace agwf {

std::size_t Dfg::total_frequency() const {
    std::size_t total = 0;
    for (const auto& [edge, stats] : edges) total += stats.frequency;
    return total;
}

Dfg discover_dfg(const EventLog& log) {
    // Durations are accumulated in integral milliseconds so the mean does not
    // depend on summation order.
    std::map<ActivityPair, std::pair<std::size_t, std::int64_t>> acc;
    Dfg dfg;
    for (const auto& trace : log.traces) {
        const auto& events = trace.events;
        if (events.empty()) continue;
        ++dfg.start_activities[events.front().activity];
        ++dfg.end_activities[events.back().activity];
        for (std::size_t i = 0; i + 1 < events.size(); ++i) {
            auto& [count, total_ms] = acc[{events[i].activity, events[i + 1].activity}];
            ++count;
            total_ms += (events[i + 1].timestamp - events[i].timestamp).count();
        }
    }
    for (const auto& [edge, pair] : acc) {
        const auto& [count, total_ms] = pair;
        dfg.edges.emplace(edge, EdgeStats{count, static_cast<double>(total_ms) / 1000.0 / static_cast<double>(count)});
    }
    return dfg;
}

VariantTable discover_variants(const EventLog& log) {
    std::map<std::vector<std::string>, std::size_t> counts;
    for (const auto& trace : log.traces) ++counts[trace.activities()];

    VariantTable table;
    table.variants.reserve(counts.size());
    for (auto& [seq, count] : counts) table.variants.push_back(Variant{seq, count});
    std::stable_sort(table.variants.begin(), table.variants.end(),
                     [](const Variant& a, const Variant& b) { return a.count > b.count; });
    return table;
}

std::string_view to_string(FindingKind kind) noexcept {
    switch (kind) {
        case FindingKind::OnlyInA: return "only_in_a";
        case FindingKind::OnlyInB: return "only_in_b";
        case FindingKind::FrequencyShift: return "frequency_shift";
        case FindingKind::DurationShift: return "duration_shift";
    }
    return "unknown";
}

DfgComparison compare_dfgs(const Dfg& a, const Dfg& b, ComparisonThresholds thresholds) {
    const double total_a = static_cast<double>(a.total_frequency());
    const double total_b = static_cast<double>(b.total_frequency());
    auto share = [](std::size_t f, double total) { return total > 0 ? static_cast<double>(f) / total : 0.0; };

    std::set<ActivityPair> all_edges;
    for (const auto& [edge, _] : a.edges) all_edges.insert(edge);
    for (const auto& [edge, _] : b.edges) all_edges.insert(edge);

    DfgComparison out;
    for (const auto& edge : all_edges) {
        const auto ia = a.edges.find(edge);
        const auto ib = b.edges.find(edge);
        ComparisonFinding f;
        f.edge = edge;
        f.freq_a = ia != a.edges.end() ? ia->second.frequency : 0;
        f.freq_b = ib != b.edges.end() ? ib->second.frequency : 0;
        f.mean_duration_a = ia != a.edges.end() ? ia->second.mean_duration_seconds : 0.0;
        f.mean_duration_b = ib != b.edges.end() ? ib->second.mean_duration_seconds : 0.0;
        f.relative_freq_a = share(f.freq_a, total_a);
        f.relative_freq_b = share(f.freq_b, total_b);
        f.relative_difference = f.relative_freq_a - f.relative_freq_b;

        if (ib == b.edges.end()) {
            f.kind = FindingKind::OnlyInA;
            out.findings.push_back(f);
            continue;
        }
        if (ia == a.edges.end()) {
            f.kind = FindingKind::OnlyInB;
            out.findings.push_back(f);
            continue;
        }
        if (std::abs(f.relative_difference) > thresholds.frequency_shift) {
            f.kind = FindingKind::FrequencyShift;
            out.findings.push_back(f);
        }
        const double longest = std::max(f.mean_duration_a, f.mean_duration_b);
        if (longest > 0.0) {
            const double rel = (f.mean_duration_a - f.mean_duration_b) / longest;
            if (std::abs(rel) > thresholds.duration_shift) {
                ComparisonFinding d = f;
                d.kind = FindingKind::DurationShift;
                d.relative_difference = rel;
                out.findings.push_back(d);
            }
        }
    }

    std::stable_sort(out.findings.begin(), out.findings.end(), [](const auto& x, const auto& y) {
        const double ax = std::abs(x.relative_difference);
        const double ay = std::abs(y.relative_difference);
        if (ax != ay) return ax > ay;
        return std::tie(x.edge, x.kind) < std::tie(y.edge, y.kind);
    });
    return out;
}

}  // namespace agwf
