#pragma once

#include <cstddef>
#include <cstdint>

#include "trackgraph/graph.hpp"
#include "trackgraph/ptgraph.hpp"

namespace trackgraph {

// Tracker-tracker co-occurrence graph. An edge joins two trackers iff they
// coexist in at least `threshold` publishers (default 2), weighted by
// the number of shared publishers. Trackers with no qualifying pair stay in
// the node set as isolated nodes.
struct TtGraph {
    Graph graph;
    std::uint32_t threshold = 2;
};

// Co-occurrence is counted from unweighted PT adjacency: one request is
// enough for presence.
TtGraph build_tt(const PtGraph& pt, std::uint32_t min_cooccurrence = 2);

struct TtSummary {
    GraphSummary summary;        // on the LCC; density in general mode
    std::size_t n_nodes_total = 0;  // including isolated trackers
};

TtSummary tt_summary(const TtGraph& g, unsigned threads = 0);

}  // namespace trackgraph
