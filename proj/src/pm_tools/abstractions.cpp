#include <algorithm>
#include <cstdio>

#include "agwf/tools.hpp"

namespace agwf {

namespace {

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

std::string endpoint_line(const char* label, const std::map<std::string, std::size_t>& counts) {
    std::vector<std::pair<std::string, std::size_t>> items(counts.begin(), counts.end());
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::string out = label;
    out += ':';
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += i == 0 ? " " : ", ";
        out += items[i].first + "=" + std::to_string(items[i].second);
    }
    return out;
}

std::string edge_label(const ActivityPair& edge) { return edge.first + " -> " + edge.second; }

}  // namespace

std::string abstract_dfg(const Dfg& dfg, std::size_t top_k) {
    std::vector<std::pair<ActivityPair, EdgeStats>> edges(dfg.edges.begin(), dfg.edges.end());
    // Map order already gives (source, target) ascending.
    std::stable_sort(edges.begin(), edges.end(),
                     [](const auto& a, const auto& b) { return a.second.frequency > b.second.frequency; });
    const std::size_t shown = std::min(top_k, edges.size());

    std::string out = "DFG (top " + std::to_string(shown) + " edges of " + std::to_string(edges.size()) + "):";
    for (std::size_t i = 0; i < shown; ++i) {
        const auto& [edge, stats] = edges[i];
        out += "\n" + edge_label(edge) + " (freq=" + std::to_string(stats.frequency) +
               ", avg_dur=" + fixed(stats.mean_duration_seconds, 1) + "s)";
    }
    out += "\n" + endpoint_line("start", dfg.start_activities);
    out += "\n" + endpoint_line("end", dfg.end_activities);
    return out;
}

std::string abstract_variants(const VariantTable& table, std::size_t top_k) {
    const std::size_t shown = std::min(top_k, table.variants.size());
    std::string out =
        "Variants (top " + std::to_string(shown) + " of " + std::to_string(table.variants.size()) + "):";
    for (std::size_t i = 0; i < shown; ++i) {
        const auto& v = table.variants[i];
        std::string seq;
        for (std::size_t j = 0; j < v.activities.size(); ++j) {
            if (j > 0) seq += ',';
            seq += v.activities[j];
        }
        if (v.activities.empty()) seq = "(empty)";
        out += "\n" + seq + " (count=" + std::to_string(v.count) + ")";
    }
    return out;
}

std::string render_comparison(const DfgComparison& comparison, std::size_t limit) {
    if (comparison.findings.empty()) return "no behavioral differences found";
    std::string out;
    const std::size_t shown = std::min(limit, comparison.findings.size());
    for (std::size_t i = 0; i < shown; ++i) {
        const auto& f = comparison.findings[i];
        if (i > 0) out += '\n';
        out += "edge " + edge_label(f.edge) + ": ";
        const std::string freqs = std::to_string(f.freq_a) + " vs " + std::to_string(f.freq_b);
        switch (f.kind) {
            case FindingKind::OnlyInA:
                out += "only in group A (freq " + freqs + ")";
                break;
            case FindingKind::OnlyInB:
                out += "only in group B (freq " + freqs + ")";
                break;
            case FindingKind::FrequencyShift:
                out += "frequency shift (freq " + freqs + ", relative " + fixed(f.relative_freq_a, 3) + " vs " +
                       fixed(f.relative_freq_b, 3) + ")";
                break;
            case FindingKind::DurationShift:
                out += "duration shift (avg_dur " + fixed(f.mean_duration_a, 1) + "s vs " +
                       fixed(f.mean_duration_b, 1) + "s, freq " + freqs + ")";
                break;
        }
    }
    if (shown < comparison.findings.size()) {
        out += "\n(" + std::to_string(comparison.findings.size() - shown) + " more findings omitted)";
    }
    return out;
}

}  // namespace agwf
