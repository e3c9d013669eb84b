#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "agwf/event_log.hpp"

namespace agwf {

using ActivityPair = std::pair<std::string, std::string>;

struct EdgeStats {
    std::size_t frequency = 0;
    double mean_duration_seconds = 0.0;

    bool operator==(const EdgeStats&) const = default;
};

/// Directly-follows graph with frequency and mean-duration annotations.
struct Dfg {
    std::map<ActivityPair, EdgeStats> edges;
    std::map<std::string, std::size_t> start_activities;
    std::map<std::string, std::size_t> end_activities;

    bool operator==(const Dfg&) const = default;

    std::size_t total_frequency() const;
};

struct Variant {
    std::vector<std::string> activities;
    std::size_t count = 0;

    bool operator==(const Variant&) const = default;
};

/// Variants ordered by count descending, ties by activity sequence ascending.
struct VariantTable {
    std::vector<Variant> variants;

    bool operator==(const VariantTable&) const = default;
};

Dfg discover_dfg(const EventLog& log);
VariantTable discover_variants(const EventLog& log);

enum class FindingKind { OnlyInA, OnlyInB, FrequencyShift, DurationShift };

std::string_view to_string(FindingKind kind) noexcept;

struct ComparisonFinding {
    ActivityPair edge;
    std::size_t freq_a = 0;
    std::size_t freq_b = 0;
    /// Frequency findings: share of edge in A minus share in B. Duration
    /// findings: (mean_a - mean_b) / max(mean_a, mean_b).
    double relative_difference = 0.0;
    FindingKind kind = FindingKind::OnlyInA;
    double relative_freq_a = 0.0;
    double relative_freq_b = 0.0;
    double mean_duration_a = 0.0;
    double mean_duration_b = 0.0;
};

struct ComparisonThresholds {
    double frequency_shift = 0.05;
    double duration_shift = 0.5;
};

/// Findings sorted by |relative_difference| descending (ties: edge, then kind).
struct DfgComparison {
    std::vector<ComparisonFinding> findings;
};

/// Compares two DFGs. Edges present in only one input become OnlyInA/OnlyInB;
/// shared edges become FrequencyShift when their frequency shares differ by
/// more than `thresholds.frequency_shift`, and DurationShift when their mean
/// durations differ (relative to the larger one) by more than
/// `thresholds.duration_shift`.
DfgComparison compare_dfgs(const Dfg& a, const Dfg& b, ComparisonThresholds thresholds = {});

}  // namespace agwf
