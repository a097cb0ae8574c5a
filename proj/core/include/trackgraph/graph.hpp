#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace trackgraph {

enum class NodeRole : std::uint8_t { Untyped, Publisher, Tracker };

const char* to_string(NodeRole r);
NodeRole node_role_from_string(std::string_view s);

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

struct NodeRef {
    std::string name;
    NodeRole role = NodeRole::Untyped;

    friend bool operator==(const NodeRef&, const NodeRef&) = default;
    friend auto operator<=>(const NodeRef& a, const NodeRef& b) {
        if (auto c = a.name <=> b.name; c != 0) return c;
        return a.role <=> b.role;
    }
};

struct Neighbor {
    NodeId id;
    double weight;
};

// Undirected weighted graph, immutable after construction. Nodes are kept
// sorted by (name, role), so node indices give a stable lexicographic
// iteration order and every metric below is deterministic.
class Graph {
public:
    class Builder {
    public:
        NodeId add_node(std::string name, NodeRole role = NodeRole::Untyped);
        // Endpoints are added as nodes if missing. Self-loops and duplicate
        // edges are rejected; weights must be positive.
        void add_edge(const std::string& a, NodeRole ra, const std::string& b, NodeRole rb,
                      double weight);
        void add_edge(const std::string& a, const std::string& b, double weight) {
            add_edge(a, NodeRole::Untyped, b, NodeRole::Untyped, weight);
        }
        Graph build();

    private:
        struct PendingEdge {
            NodeId a, b;
            double weight;
        };
        std::vector<NodeRef> nodes_;
        std::vector<PendingEdge> edges_;
        std::unordered_map<std::string, NodeId> index_;  // role-tagged name -> id
    };

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    bool empty() const { return nodes_.empty(); }

    const NodeRef& node(NodeId i) const { return nodes_[i]; }
    const std::vector<NodeRef>& nodes() const { return nodes_; }
    std::span<const Neighbor> neighbors(NodeId i) const { return adj_[i]; }
    std::size_t degree(NodeId i) const { return adj_[i].size(); }
    NodeId find(std::string_view name, NodeRole role) const;
    bool has_edge(NodeId a, NodeId b) const;
    double max_edge_weight() const { return max_weight_; }
    std::size_t role_count(NodeRole r) const { return role_counts_[static_cast<int>(r)]; }

    // Visits each undirected edge once, endpoint indices ascending.
    template <typename F>
    void for_each_edge(F&& fn) const {
        for (NodeId i = 0; i < nodes_.size(); ++i)
            for (const auto& nb : adj_[i])
                if (nb.id > i) fn(i, nb.id, nb.weight);
    }

private:
    friend class Builder;
    std::vector<NodeRef> nodes_;
    std::vector<std::vector<Neighbor>> adj_;
    std::size_t edge_count_ = 0;
    double max_weight_ = 0.0;
    std::size_t role_counts_[3] = {0, 0, 0};
};

// Per-node centrality metrics, each normalized into [0, 1].
struct NodeMetrics {
    double degree_centrality = 0.0;
    double betweenness = 0.0;
    double coreness = 0.0;
};

// Whole-graph summary: nodes (N), edges (E), normalized average edge
// weight (W), average clustering (CC), density (DE), diameter (D).
struct GraphSummary {
    std::size_t n_nodes = 0;
    std::size_t n_edges = 0;
    double norm_avg_weight = 0.0;
    double avg_clustering = 0.0;
    double density = 0.0;
    std::size_t diameter = 0;
};

enum class DensityMode { General, Bipartite };

// Largest connected component as a node-induced subgraph; size ties break
// toward the component holding the smallest node id. Empty in, empty out.
Graph lcc(const Graph& g);

// True when every node is reachable from the first one.
bool is_connected(const Graph& g);

// deg(v)/(N-1), unweighted. Requires N >= 2.
std::vector<double> degree_centrality(const Graph& g);

// Exact Brandes betweenness over unweighted shortest paths, normalized by
// (N-1)(N-2)/2. Parallelized over BFS sources in fixed-size chunks with an
// ordered reduction, so results are bit-identical for any thread count.
// N < 3 yields all zeros. threads == 0 picks the environment default.
std::vector<double> betweenness(const Graph& g, unsigned threads = 0);

// k-core numbers by iterative minimum-degree peeling.
std::vector<std::size_t> core_numbers(const Graph& g);

// Core numbers normalized by the graph maximum; all zeros when edgeless.
std::vector<double> coreness(const Graph& g);

// Mean over all nodes of 2T(v)/(deg(v)(deg(v)-1)); deg<2 contributes 0.
double avg_clustering(const Graph& g);

// Bipartite-friendly secondary statistic: mean pairwise co-neighborhood
// overlap |N(u) and N(v)| / |N(u) or N(v)| over nodes at distance two.
double bipartite_clustering(const Graph& g);

// General: 2E/(N(N-1)). Bipartite: E/(|publishers|*|trackers|).
double density(const Graph& g, DensityMode mode);

// Exact unweighted diameter via BFS from every node; input must be
// connected (call lcc first).
std::size_t diameter(const Graph& g, unsigned threads = 0);

// Mean over edges of w/max_w. Requires >= 1 edge.
double norm_avg_weight(const Graph& g);

struct PearsonResult {
    double r;
    double p;  // two-sided, from the t statistic with n-2 df
};

// Sample Pearson correlation. Requires equal lengths >= 3 and nonzero
// variance on both sides.
PearsonResult pearson(std::span<const double> xs, std::span<const double> ys);

// Thread-count default: TRACKGRAPH_THREADS, else hardware concurrency.
unsigned default_thread_count();

}  // namespace trackgraph
