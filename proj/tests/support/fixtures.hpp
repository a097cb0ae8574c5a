#pragma once

// Deterministic fixture generators shared by the unit and acceptance suites.

#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <unistd.h>
#include <vector>

#include "trackgraph/graph.hpp"
#include "trackgraph/ingest.hpp"
#include "trackgraph/suffix.hpp"

namespace fixtures {

using trackgraph::CrawlRecord;
using trackgraph::Graph;
using trackgraph::NodeRole;
using trackgraph::ResourceKind;
using trackgraph::Scheme;
using trackgraph::Snapshot;

inline std::string node_name(const char* prefix, int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%s%03d", prefix, i);
    return buf;
}

// G(n, p) with integer weights in [1, 10]; optionally forced connected by a
// random spanning tree.
inline Graph random_graph(std::mt19937_64& rng, int n, double p, bool connected) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> wdist(1, 10);
    std::set<std::pair<int, int>> edges;
    if (connected) {
        for (int v = 1; v < n; ++v) {
            int u = static_cast<int>(rng() % static_cast<unsigned>(v));
            edges.emplace(u, v);
        }
    }
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng) < p) edges.emplace(u, v);

    Graph::Builder b;
    for (int v = 0; v < n; ++v) b.add_node(node_name("n", v));
    for (auto [u, v] : edges)
        b.add_edge(node_name("n", u), node_name("n", v), wdist(rng));
    return b.build();
}

// PT-shaped bipartite graph: every publisher gets 1..max_deg tracker edges.
inline Graph random_bipartite(std::mt19937_64& rng, int n_pub, int n_trk, int max_deg) {
    Graph::Builder b;
    for (int t = 0; t < n_trk; ++t) b.add_node(node_name("t", t), NodeRole::Tracker);
    std::uniform_int_distribution<int> ddist(1, max_deg);
    std::uniform_int_distribution<int> tdist(0, n_trk - 1);
    std::uniform_int_distribution<int> wdist(1, 20);
    for (int p = 0; p < n_pub; ++p) {
        b.add_node(node_name("p", p), NodeRole::Publisher);
        std::set<int> picked;
        int d = ddist(rng);
        for (int k = 0; k < d; ++k) picked.insert(tdist(rng));
        for (int t : picked)
            b.add_edge(node_name("t", t), NodeRole::Tracker, node_name("p", p),
                       NodeRole::Publisher, wdist(rng));
    }
    return b.build();
}

inline trackgraph::SuffixRules test_rules() {
    return trackgraph::SuffixRules::from_lines(
        {"com", "net", "org", "io", "uk", "co.uk", "*.ck", "!www.ck"});
}

inline CrawlRecord record(std::string pub, std::string req_host, ResourceKind kind,
                          Scheme scheme = Scheme::Https, std::string path = "/x",
                          std::string snap = "snap") {
    CrawlRecord r;
    r.snapshot_id = std::move(snap);
    r.publisher_host = std::move(pub);
    r.request_host = std::move(req_host);
    r.request_path = std::move(path);
    r.scheme = scheme;
    r.resource_kind = kind;
    return r;
}

inline Snapshot snapshot(std::string id, std::vector<CrawlRecord> records) {
    Snapshot s;
    s.id = std::move(id);
    s.date_label = s.id;
    s.tracker_list_version = "test";
    for (auto& r : records) r.snapshot_id = s.id;
    s.records = std::move(records);
    return s;
}

class TempDir {
public:
    explicit TempDir(const std::string& prefix) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                (prefix + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::FILE* f = std::fopen(p.c_str(), "wb");
    std::fwrite(content.data(), 1, content.size(), f);
    std::fclose(f);
}

}  // namespace fixtures
