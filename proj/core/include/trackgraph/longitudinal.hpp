#pragma once

#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trackgraph/ingest.hpp"
#include "trackgraph/ptgraph.hpp"

namespace trackgraph {

// Snapshots filtered to the publisher set common to all of them, in the
// declared chronological order. Publisher identity is eTLD+1 (so www
// prefixes and host-form drift across crawls do not split identities).
struct SnapshotSeries {
    std::vector<Snapshot> snapshots;
    std::set<std::string> common_publishers;
};

// Requires >= 2 snapshots; errors on an empty intersection.
SnapshotSeries align(const std::vector<Snapshot>& snapshots, const SuffixRules& rules);

struct TrendSeries {
    std::vector<std::pair<std::string, double>> values;  // (snapshot id, value)
    double change_pct = 0.0;  // (last - first) / first * 100
    bool change_defined = false;
};

TrendSeries trend_table(const SnapshotSeries& series,
                        const std::function<double(const Snapshot&)>& extract);
TrendSeries trend_from_values(std::vector<std::pair<std::string, double>> values);

enum class StabilityClass { Stable, Dropped, Climbed, Transient };

const char* to_string(StabilityClass c);
// Ranking legend: "(*)" stable, "(+/-)" dropped, "(+)" climbed, "" transient.
const char* legend_symbol(StabilityClass c);

inline constexpr std::size_t kRankAbsent = static_cast<std::size_t>(-1);

struct StabilityEntry {
    std::string tracker;
    StabilityClass cls = StabilityClass::Transient;
    std::vector<std::size_t> ranks;  // 1-based per snapshot; kRankAbsent when missing
    double avg_coverage_pct = 0.0;   // mean coverage over snapshots where present
};

struct StabilityReport {
    std::vector<std::string> snapshot_ids;
    std::size_t k = 0;
    std::vector<StabilityEntry> entries;
};

// Classifies every tracker that enters any snapshot's top-k:
//   stable  - in the top-k of every snapshot
//   dropped - top-k at its first appearance, below top-k in the final snapshot
//   climbed - outside the top-k in the first snapshot, inside in the final
//   transient - anything else
// Trackers never in a top-k are omitted. Rankings must be full (>= k rows).
StabilityReport topk_stability(const std::vector<TrackerRanking>& rankings,
                               const std::vector<std::string>& snapshot_ids, std::size_t k);

}  // namespace trackgraph
