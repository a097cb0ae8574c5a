#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "trackgraph/graph.hpp"
#include "trackgraph/ingest.hpp"

namespace trackgraph {

// Significance bound applied to correlation p-values.
inline constexpr double kSignificanceBound = 0.009;

// Weighted 2-mode publisher-tracker graph. Strictly bipartite: every edge
// joins one publisher and one tracker, weighted by request count.
struct PtGraph {
    Graph graph;

    std::size_t n_publishers() const { return graph.role_count(NodeRole::Publisher); }
    std::size_t n_trackers() const { return graph.role_count(NodeRole::Tracker); }
};

// One tracker node per observed tracker eTLD+1; edge (t, p) weighted by the
// number of tracker-classified requests from publisher p to tracker t.
// Expects a publisher-filtered snapshot; empty snapshot gives empty graph.
PtGraph build_pt(const Snapshot& snap, const TrackerList& trackers, const SuffixRules& rules);

// Largest connected component, keeping roles.
PtGraph pt_lcc(const PtGraph& g);

struct PtSummary {
    GraphSummary summary;  // on the LCC; density in bipartite mode
    double bipartite_clustering = 0.0;  // secondary clustering variant
    std::size_t n_publishers_lcc = 0;
    std::size_t n_trackers_lcc = 0;
    std::size_t n_nodes_total = 0;
    std::size_t n_publishers_total = 0;
    std::size_t n_trackers_total = 0;
    std::vector<NodeRef> dropped;  // nodes outside the LCC
};

PtSummary pt_summary(const PtGraph& g, unsigned threads = 0);

// Node metric series for one role, names lexicographic.
struct RoleMetrics {
    std::vector<std::string> names;
    std::vector<NodeMetrics> metrics;
};

struct PtNodeMetrics {
    RoleMetrics publishers;
    RoleMetrics trackers;
};

// Degree centrality, betweenness and coreness on the LCC, split by role.
PtNodeMetrics pt_node_metrics(const PtGraph& g, unsigned threads = 0);

struct CorrPair {
    double r = 0.0;
    double p = 1.0;
    bool defined = false;     // false for constant series
    bool significant = false; // p < 0.009
};

// Pairwise correlations of the three node metrics for one role:
// degree-betweenness, degree-coreness, betweenness-coreness.
struct MetricCorrelations {
    CorrPair dc_bc;
    CorrPair dc_cp;
    CorrPair bc_cp;
};

MetricCorrelations metric_correlations(const RoleMetrics& role);

enum class RankMetric { Degree, Betweenness };

const char* to_string(RankMetric m);

struct RankedTracker {
    std::string domain;
    double value;         // the ranking metric
    double coverage_pct;  // unweighted degree / |LCC publishers| * 100
    std::string organization;  // empty when unknown
};

// Top-k tracker ranking, ties broken by domain name. When k exceeds the
// tracker count all trackers are returned and `truncated` is set.
struct TrackerRanking {
    RankMetric metric = RankMetric::Degree;
    std::vector<RankedTracker> entries;
    bool truncated = false;
};

TrackerRanking top_k(const PtGraph& g, RankMetric metric, std::size_t k,
                     const std::unordered_map<std::string, std::string>& organizations = {},
                     unsigned threads = 0);

}  // namespace trackgraph
