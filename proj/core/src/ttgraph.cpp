#include "trackgraph/ttgraph.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "trackgraph/errors.hpp"

namespace trackgraph {

TtGraph build_tt(const PtGraph& pt, std::uint32_t min_cooccurrence) {
    if (min_cooccurrence < 1) throw GraphError("min co-occurrence must be >= 1");

    // Enumerate tracker pairs per publisher: PT graphs are sparse and
    // publishers embed tens of trackers, so sum over publishers of deg^2/2
    // beats iterating all tracker pairs.
    std::unordered_map<std::uint64_t, std::uint32_t> counts;
    const Graph& g = pt.graph;
    for (NodeId p = 0; p < g.node_count(); ++p) {
        if (g.node(p).role != NodeRole::Publisher) continue;
        auto nbrs = g.neighbors(p);
        for (std::size_t i = 0; i < nbrs.size(); ++i)
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                // neighbor lists are sorted, so id pairs are already ordered
                std::uint64_t key =
                    (static_cast<std::uint64_t>(nbrs[i].id) << 32) | nbrs[j].id;
                counts[key] += 1;
            }
    }

    Graph::Builder b;
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (g.node(v).role == NodeRole::Tracker) b.add_node(g.node(v).name, NodeRole::Tracker);
    for (const auto& [key, count] : counts) {
        if (count < min_cooccurrence) continue;
        NodeId a = static_cast<NodeId>(key >> 32);
        NodeId c = static_cast<NodeId>(key & 0xffffffffu);
        b.add_edge(g.node(a).name, NodeRole::Tracker, g.node(c).name, NodeRole::Tracker,
                   static_cast<double>(count));
    }
    return TtGraph{b.build(), min_cooccurrence};
}

TtSummary tt_summary(const TtGraph& g, unsigned threads) {
    if (g.graph.edge_count() == 0) throw GraphError("TT graph has no edges");

    TtSummary out;
    out.n_nodes_total = g.graph.node_count();
    Graph l = lcc(g.graph);
    out.summary.n_nodes = l.node_count();
    out.summary.n_edges = l.edge_count();
    out.summary.norm_avg_weight = norm_avg_weight(l);
    out.summary.avg_clustering = avg_clustering(l);
    out.summary.density = density(l, DensityMode::General);
    out.summary.diameter = diameter(l, threads);
    return out;
}

}  // namespace trackgraph
