#include "trackgraph/graph.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <thread>
#include <unordered_set>

#include <boost/math/distributions/students_t.hpp>

#include "trackgraph/errors.hpp"

namespace trackgraph {

const char* to_string(NodeRole r) {
    switch (r) {
        case NodeRole::Publisher: return "publisher";
        case NodeRole::Tracker: return "tracker";
        default: return "untyped";
    }
}

NodeRole node_role_from_string(std::string_view s) {
    if (s == "publisher") return NodeRole::Publisher;
    if (s == "tracker") return NodeRole::Tracker;
    if (s == "untyped") return NodeRole::Untyped;
    throw ParseError("unknown node role: " + std::string(s));
}

NodeId Graph::Builder::add_node(std::string name, NodeRole role) {
    std::string key;
    key.reserve(name.size() + 2);
    key.push_back(static_cast<char>('0' + static_cast<int>(role)));
    key.append(name);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({std::move(name), role});
    index_.emplace(std::move(key), id);
    return id;
}

void Graph::Builder::add_edge(const std::string& a, NodeRole ra, const std::string& b, NodeRole rb,
                              double weight) {
    if (!(weight > 0.0)) throw GraphError("edge weight must be positive");
    NodeId ia = add_node(a, ra);
    NodeId ib = add_node(b, rb);
    if (ia == ib) throw GraphError("self-loop rejected: " + a);
    edges_.push_back({ia, ib, weight});
}

Graph Graph::Builder::build() {
    Graph g;

    std::vector<NodeId> order(nodes_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](NodeId x, NodeId y) { return nodes_[x] < nodes_[y]; });
    std::vector<NodeId> remap(nodes_.size());
    g.nodes_.reserve(nodes_.size());
    for (NodeId pos = 0; pos < order.size(); ++pos) {
        remap[order[pos]] = pos;
        g.nodes_.push_back(std::move(nodes_[order[pos]]));
        g.role_counts_[static_cast<int>(g.nodes_.back().role)] += 1;
    }

    g.adj_.resize(g.nodes_.size());
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges_.size() * 2);
    for (const auto& e : edges_) {
        NodeId a = remap[e.a], b = remap[e.b];
        if (a > b) std::swap(a, b);
        std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
        if (!seen.insert(key).second)
            throw GraphError("duplicate edge: " + g.nodes_[a].name + " -- " + g.nodes_[b].name);
        g.adj_[a].push_back({b, e.weight});
        g.adj_[b].push_back({a, e.weight});
        g.max_weight_ = std::max(g.max_weight_, e.weight);
    }
    for (auto& nbrs : g.adj_)
        std::sort(nbrs.begin(), nbrs.end(),
                  [](const Neighbor& x, const Neighbor& y) { return x.id < y.id; });
    g.edge_count_ = edges_.size();
    return g;
}

NodeId Graph::find(std::string_view name, NodeRole role) const {
    NodeRef probe{std::string(name), role};
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), probe);
    if (it != nodes_.end() && *it == probe)
        return static_cast<NodeId>(it - nodes_.begin());
    return kNoNode;
}

bool Graph::has_edge(NodeId a, NodeId b) const {
    const auto& nbrs = adj_[a];
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b,
                               [](const Neighbor& n, NodeId id) { return n.id < id; });
    return it != nbrs.end() && it->id == b;
}

unsigned default_thread_count() {
    if (const char* env = std::getenv("TRACKGRAPH_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0 && v <= 256) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

namespace {

unsigned resolve_threads(unsigned requested) {
    return requested > 0 ? requested : default_thread_count();
}

// Runs fn(chunk_index) for all chunks on the given number of threads.
// Chunk boundaries are fixed, so any per-chunk state is independent of the
// thread count.
void run_chunked(std::size_t n_chunks, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (n_chunks == 0) return;
    threads = std::min<std::size_t>(threads, n_chunks);
    if (threads <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t c = next.fetch_add(1);
                if (c >= n_chunks) return;
                fn(c);
            }
        });
    for (auto& th : pool) th.join();
}

constexpr std::size_t kSourceChunk = 64;

std::vector<int> bfs_dist(const Graph& g, NodeId src, std::vector<NodeId>& queue) {
    std::vector<int> dist(g.node_count(), -1);
    queue.clear();
    queue.push_back(src);
    dist[src] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        NodeId v = queue[head];
        for (const auto& nb : g.neighbors(v))
            if (dist[nb.id] < 0) {
                dist[nb.id] = dist[v] + 1;
                queue.push_back(nb.id);
            }
    }
    return dist;
}

struct BrandesScratch {
    std::vector<NodeId> order;               // BFS visit order
    std::vector<int> dist;
    std::vector<double> sigma;
    std::vector<double> delta;
    std::vector<std::vector<NodeId>> preds;

    explicit BrandesScratch(std::size_t n)
        : dist(n, -1), sigma(n, 0.0), delta(n, 0.0), preds(n) {
        order.reserve(n);
    }

    void reset() {
        for (NodeId v : order) {
            dist[v] = -1;
            sigma[v] = 0.0;
            delta[v] = 0.0;
            preds[v].clear();
        }
        order.clear();
    }
};

void brandes_source(const Graph& g, NodeId src, BrandesScratch& s, std::vector<double>& acc) {
    s.reset();
    s.order.push_back(src);
    s.dist[src] = 0;
    s.sigma[src] = 1.0;
    for (std::size_t head = 0; head < s.order.size(); ++head) {
        NodeId v = s.order[head];
        for (const auto& nb : g.neighbors(v)) {
            if (s.dist[nb.id] < 0) {
                s.dist[nb.id] = s.dist[v] + 1;
                s.order.push_back(nb.id);
            }
            if (s.dist[nb.id] == s.dist[v] + 1) {
                s.sigma[nb.id] += s.sigma[v];
                s.preds[nb.id].push_back(v);
            }
        }
    }
    // dependency accumulation in reverse BFS order
    for (std::size_t i = s.order.size(); i-- > 1;) {
        NodeId w = s.order[i];
        double coeff = (1.0 + s.delta[w]) / s.sigma[w];
        for (NodeId v : s.preds[w]) s.delta[v] += s.sigma[v] * coeff;
        acc[w] += s.delta[w];
    }
}

}  // namespace

Graph lcc(const Graph& g) {
    if (g.empty()) return Graph::Builder{}.build();

    const std::size_t n = g.node_count();
    std::vector<int> comp(n, -1);
    std::vector<NodeId> queue;
    int n_comp = 0;
    std::vector<std::size_t> comp_size;
    for (NodeId v = 0; v < n; ++v) {
        if (comp[v] >= 0) continue;
        int c = n_comp++;
        comp_size.push_back(0);
        queue.clear();
        queue.push_back(v);
        comp[v] = c;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            ++comp_size[c];
            for (const auto& nb : g.neighbors(queue[head]))
                if (comp[nb.id] < 0) {
                    comp[nb.id] = c;
                    queue.push_back(nb.id);
                }
        }
    }
    // components are discovered in ascending order of their smallest node
    // id, so the first maximal one wins ties
    int best = 0;
    for (int c = 1; c < n_comp; ++c)
        if (comp_size[c] > comp_size[best]) best = c;

    Graph::Builder b;
    for (NodeId v = 0; v < n; ++v)
        if (comp[v] == best) b.add_node(g.node(v).name, g.node(v).role);
    g.for_each_edge([&](NodeId i, NodeId j, double w) {
        if (comp[i] == best)
            b.add_edge(g.node(i).name, g.node(i).role, g.node(j).name, g.node(j).role, w);
    });
    return b.build();
}

bool is_connected(const Graph& g) {
    if (g.node_count() <= 1) return true;
    std::vector<NodeId> queue;
    auto dist = bfs_dist(g, 0, queue);
    return queue.size() == g.node_count();
}

std::vector<double> degree_centrality(const Graph& g) {
    const std::size_t n = g.node_count();
    if (n < 2) throw GraphError("degree centrality requires at least 2 nodes");
    std::vector<double> dc(n);
    for (NodeId v = 0; v < n; ++v) dc[v] = static_cast<double>(g.degree(v)) / (n - 1);
    return dc;
}

std::vector<double> betweenness(const Graph& g, unsigned threads) {
    const std::size_t n = g.node_count();
    std::vector<double> bc(n, 0.0);
    if (n < 3) return bc;

    const std::size_t n_chunks = (n + kSourceChunk - 1) / kSourceChunk;
    std::vector<std::vector<double>> partial(n_chunks);
    run_chunked(n_chunks, resolve_threads(threads), [&](std::size_t c) {
        auto& acc = partial[c];
        acc.assign(n, 0.0);
        BrandesScratch scratch(n);
        const NodeId lo = static_cast<NodeId>(c * kSourceChunk);
        const NodeId hi = static_cast<NodeId>(std::min(n, (c + 1) * kSourceChunk));
        for (NodeId s = lo; s < hi; ++s) brandes_source(g, s, scratch, acc);
    });
    // ordered reduction: per node, chunk contributions are summed in chunk
    // order regardless of which thread produced them
    for (std::size_t c = 0; c < n_chunks; ++c)
        for (std::size_t v = 0; v < n; ++v) bc[v] += partial[c][v];

    // raw accumulation counts each unordered pair twice; fold that into the
    // (N-1)(N-2)/2 pair normalization
    const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2);
    for (auto& v : bc) v /= norm;
    return bc;
}

std::vector<std::size_t> core_numbers(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::size_t> deg(n), core(n, 0);
    std::size_t max_deg = 0;
    for (NodeId v = 0; v < n; ++v) {
        deg[v] = g.degree(v);
        max_deg = std::max(max_deg, deg[v]);
    }
    if (n == 0) return core;

    // bucket peeling (Batagelj-Zaversnik), deterministic: initial order is
    // (degree, node id) ascending and swaps keep bins contiguous
    std::vector<std::size_t> bin(max_deg + 2, 0);
    for (NodeId v = 0; v < n; ++v) ++bin[deg[v]];
    std::size_t start = 0;
    for (std::size_t d = 0; d <= max_deg; ++d) {
        std::size_t cnt = bin[d];
        bin[d] = start;
        start += cnt;
    }
    std::vector<NodeId> vert(n);
    std::vector<std::size_t> pos(n);
    {
        std::vector<std::size_t> fill = bin;
        for (NodeId v = 0; v < n; ++v) {
            pos[v] = fill[deg[v]]++;
            vert[pos[v]] = v;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        NodeId v = vert[i];
        core[v] = deg[v];
        for (const auto& nb : g.neighbors(v)) {
            NodeId u = nb.id;
            if (deg[u] > deg[v]) {
                // swap u with the first vertex of its bin, then shrink it
                std::size_t du = deg[u];
                NodeId head = vert[bin[du]];
                if (head != u) {
                    std::swap(vert[pos[u]], vert[bin[du]]);
                    std::swap(pos[u], pos[head]);
                }
                ++bin[du];
                --deg[u];
            }
        }
    }
    return core;
}

std::vector<double> coreness(const Graph& g) {
    auto core = core_numbers(g);
    std::size_t max_core = 0;
    for (auto c : core) max_core = std::max(max_core, c);
    std::vector<double> out(core.size(), 0.0);
    if (max_core == 0) return out;
    for (std::size_t v = 0; v < core.size(); ++v)
        out[v] = static_cast<double>(core[v]) / static_cast<double>(max_core);
    return out;
}

double avg_clustering(const Graph& g) {
    const std::size_t n = g.node_count();
    if (n == 0) return 0.0;
    double sum = 0.0;
    for (NodeId v = 0; v < n; ++v) {
        auto nbrs = g.neighbors(v);
        const std::size_t d = nbrs.size();
        if (d < 2) continue;
        std::size_t tri = 0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                if (g.has_edge(nbrs[i].id, nbrs[j].id)) ++tri;
        sum += 2.0 * static_cast<double>(tri) / (static_cast<double>(d) * (d - 1));
    }
    return sum / static_cast<double>(n);
}

double bipartite_clustering(const Graph& g) {
    const std::size_t n = g.node_count();
    if (n == 0) return 0.0;
    double total = 0.0;
    // shared-neighbor counts per distance-2 node, one pass over the
    // two-hop neighborhood; cost is sum of squared degrees
    std::vector<std::size_t> common(n, 0);
    std::vector<NodeId> touched;
    for (NodeId v = 0; v < n; ++v) {
        touched.clear();
        for (const auto& nb : g.neighbors(v))
            for (const auto& nb2 : g.neighbors(nb.id)) {
                if (nb2.id == v) continue;
                if (common[nb2.id]++ == 0) touched.push_back(nb2.id);
            }
        if (touched.empty()) continue;
        std::sort(touched.begin(), touched.end());

        const double dv = static_cast<double>(g.degree(v));
        double acc = 0.0;
        for (NodeId u : touched) {
            const double c = static_cast<double>(common[u]);
            acc += c / (dv + static_cast<double>(g.degree(u)) - c);
            common[u] = 0;
        }
        total += acc / static_cast<double>(touched.size());
    }
    return total / static_cast<double>(n);
}

double density(const Graph& g, DensityMode mode) {
    const double e = static_cast<double>(g.edge_count());
    if (mode == DensityMode::General) {
        const std::size_t n = g.node_count();
        if (n < 2) throw GraphError("density undefined for graphs with <2 nodes");
        return 2.0 * e / (static_cast<double>(n) * static_cast<double>(n - 1));
    }
    const std::size_t np = g.role_count(NodeRole::Publisher);
    const std::size_t nt = g.role_count(NodeRole::Tracker);
    if (np == 0 || nt == 0)
        throw GraphError("bipartite density requires both publisher and tracker nodes");
    return e / (static_cast<double>(np) * static_cast<double>(nt));
}

std::size_t diameter(const Graph& g, unsigned threads) {
    const std::size_t n = g.node_count();
    if (n == 0) throw GraphError("diameter of empty graph");
    if (!is_connected(g)) throw GraphError("diameter of disconnected graph: call lcc first");
    if (n == 1) return 0;

    const std::size_t n_chunks = (n + kSourceChunk - 1) / kSourceChunk;
    std::vector<int> chunk_max(n_chunks, 0);
    run_chunked(n_chunks, resolve_threads(threads), [&](std::size_t c) {
        std::vector<NodeId> queue;
        int best = 0;
        const NodeId lo = static_cast<NodeId>(c * kSourceChunk);
        const NodeId hi = static_cast<NodeId>(std::min(n, (c + 1) * kSourceChunk));
        for (NodeId s = lo; s < hi; ++s) {
            auto dist = bfs_dist(g, s, queue);
            best = std::max(best, dist[queue.back()]);
        }
        chunk_max[c] = best;
    });
    int d = 0;
    for (int m : chunk_max) d = std::max(d, m);
    return static_cast<std::size_t>(d);
}

double norm_avg_weight(const Graph& g) {
    if (g.edge_count() == 0) throw GraphError("normalized average weight of edgeless graph");
    const double max_w = g.max_edge_weight();
    double sum = 0.0;
    g.for_each_edge([&](NodeId, NodeId, double w) { sum += w / max_w; });
    return sum / static_cast<double>(g.edge_count());
}

PearsonResult pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw GraphError("pearson: length mismatch");
    const std::size_t n = xs.size();
    if (n < 3) throw GraphError("pearson requires n >= 3");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw GraphError("pearson: constant series");

    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);

    double p;
    if (std::abs(r) >= 1.0) {
        p = 0.0;
    } else {
        const double df = static_cast<double>(n - 2);
        const double t = r * std::sqrt(df / (1.0 - r * r));
        boost::math::students_t dist(df);
        p = 2.0 * boost::math::cdf(dist, -std::abs(t));
    }
    return {r, p};
}

}  // namespace trackgraph
