#include "trackgraph/ptgraph.hpp"

#include <algorithm>
#include <map>

#include "trackgraph/errors.hpp"

namespace trackgraph {

const char* to_string(RankMetric m) {
    return m == RankMetric::Degree ? "degree" : "betweenness";
}

PtGraph build_pt(const Snapshot& snap, const TrackerList& trackers, const SuffixRules& rules) {
    // (tracker, publisher) -> request count
    std::map<std::pair<std::string, std::string>, double> weights;
    std::map<std::string, bool> publishers;

    for (const auto& rec : snap.records) {
        const std::string pub = publisher_key(rec.publisher_host, rules);
        publishers.try_emplace(pub);
        if (classify_request(rec, trackers, rules) != RequestClass::ThirdPartyTracker) continue;
        weights[{rules.etld1(rec.request_host), pub}] += 1.0;
    }

    Graph::Builder b;
    for (const auto& [pub, _] : publishers) b.add_node(pub, NodeRole::Publisher);
    for (const auto& [edge, w] : weights)
        b.add_edge(edge.first, NodeRole::Tracker, edge.second, NodeRole::Publisher, w);
    return PtGraph{b.build()};
}

PtGraph pt_lcc(const PtGraph& g) {
    return PtGraph{lcc(g.graph)};
}

PtSummary pt_summary(const PtGraph& g, unsigned threads) {
    if (g.graph.empty()) throw GraphError("empty PT graph");

    PtSummary out;
    out.n_nodes_total = g.graph.node_count();
    out.n_publishers_total = g.n_publishers();
    out.n_trackers_total = g.n_trackers();

    PtGraph l = pt_lcc(g);
    out.n_publishers_lcc = l.n_publishers();
    out.n_trackers_lcc = l.n_trackers();
    for (const auto& n : g.graph.nodes())
        if (l.graph.find(n.name, n.role) == kNoNode) out.dropped.push_back(n);

    out.summary.n_nodes = l.graph.node_count();
    out.summary.n_edges = l.graph.edge_count();
    out.summary.norm_avg_weight = norm_avg_weight(l.graph);
    out.summary.avg_clustering = avg_clustering(l.graph);
    out.summary.density = density(l.graph, DensityMode::Bipartite);
    out.summary.diameter = diameter(l.graph, threads);
    out.bipartite_clustering = bipartite_clustering(l.graph);
    return out;
}

PtNodeMetrics pt_node_metrics(const PtGraph& g, unsigned threads) {
    PtGraph l = pt_lcc(g);
    if (l.graph.node_count() < 2) throw GraphError("PT metrics require at least 2 nodes");

    auto dc = degree_centrality(l.graph);
    auto bc = betweenness(l.graph, threads);
    auto cp = coreness(l.graph);

    PtNodeMetrics out;
    for (NodeId v = 0; v < l.graph.node_count(); ++v) {
        const auto& node = l.graph.node(v);
        RoleMetrics& dst =
            node.role == NodeRole::Publisher ? out.publishers : out.trackers;
        dst.names.push_back(node.name);
        dst.metrics.push_back({dc[v], bc[v], cp[v]});
    }
    return out;
}

namespace {

CorrPair correlate(const std::vector<double>& xs, const std::vector<double>& ys) {
    CorrPair out;
    try {
        auto [r, p] = pearson(xs, ys);
        out.r = r;
        out.p = p;
        out.defined = true;
        out.significant = p < kSignificanceBound;
    } catch (const GraphError&) {
        out.defined = false;
    }
    return out;
}

}  // namespace

MetricCorrelations metric_correlations(const RoleMetrics& role) {
    if (role.metrics.size() < 3)
        throw GraphError("metric correlations require at least 3 nodes of the role");

    std::vector<double> dc, bc, cp;
    dc.reserve(role.metrics.size());
    for (const auto& m : role.metrics) {
        dc.push_back(m.degree_centrality);
        bc.push_back(m.betweenness);
        cp.push_back(m.coreness);
    }
    MetricCorrelations out;
    out.dc_bc = correlate(dc, bc);
    out.dc_cp = correlate(dc, cp);
    out.bc_cp = correlate(bc, cp);
    return out;
}

TrackerRanking top_k(const PtGraph& g, RankMetric metric, std::size_t k,
                     const std::unordered_map<std::string, std::string>& organizations,
                     unsigned threads) {
    if (k < 1) throw GraphError("top-k requires k >= 1");
    PtGraph l = pt_lcc(g);
    const std::size_t n_pub = l.n_publishers();
    if (l.n_trackers() == 0) throw GraphError("PT graph has no trackers");

    std::vector<double> values;
    if (metric == RankMetric::Degree) {
        values = degree_centrality(l.graph);
    } else {
        values = betweenness(l.graph, threads);
    }

    std::vector<NodeId> order;
    for (NodeId v = 0; v < l.graph.node_count(); ++v)
        if (l.graph.node(v).role == NodeRole::Tracker) order.push_back(v);
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (values[a] != values[b]) return values[a] > values[b];
        return l.graph.node(a).name < l.graph.node(b).name;
    });

    TrackerRanking out;
    out.metric = metric;
    out.truncated = k > order.size();
    const std::size_t take = std::min(k, order.size());
    for (std::size_t i = 0; i < take; ++i) {
        NodeId v = order[i];
        RankedTracker rt;
        rt.domain = l.graph.node(v).name;
        rt.value = values[v];
        rt.coverage_pct = 100.0 * static_cast<double>(l.graph.degree(v)) /
                          static_cast<double>(n_pub);
        // unlabeled trackers display their own domain
        auto it = organizations.find(rt.domain);
        rt.organization = it != organizations.end() ? it->second : rt.domain;
        out.entries.push_back(std::move(rt));
    }
    return out;
}

}  // namespace trackgraph
