#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "trackgraph/errors.hpp"
#include "trackgraph/ptgraph.hpp"

using namespace trackgraph;

TEST_SUITE_BEGIN("ptgraph");

namespace {

TrackerList trackers(std::initializer_list<std::string> domains) {
    TrackerList list;
    for (const auto& d : domains) list.domains.insert(d);
    return list;
}

Snapshot simple_snapshot() {
    // p1 -> t1 x3, t2 x1; p2 -> t1 x1
    return fixtures::snapshot("s", {
        fixtures::record("p1.com", "t1.com", ResourceKind::Script),
        fixtures::record("p1.com", "t1.com", ResourceKind::Image),
        fixtures::record("p1.com", "a.t1.com", ResourceKind::Xhr),
        fixtures::record("p1.com", "t2.com", ResourceKind::Image),
        fixtures::record("p2.com", "t1.com", ResourceKind::Script),
        fixtures::record("p1.com", "p1.com", ResourceKind::Document),
    });
}

}  // namespace

TEST_CASE("build_pt counts requests into edge weights") {
    auto rules = fixtures::test_rules();
    auto list = trackers({"t1.com", "t2.com"});
    PtGraph pt = build_pt(simple_snapshot(), list, rules);

    CHECK(pt.n_publishers() == 2);
    CHECK(pt.n_trackers() == 2);
    CHECK(pt.graph.edge_count() == 3);

    NodeId t1 = pt.graph.find("t1.com", NodeRole::Tracker);
    NodeId p1 = pt.graph.find("p1.com", NodeRole::Publisher);
    REQUIRE(t1 != kNoNode);
    REQUIRE(p1 != kNoNode);
    CHECK(pt.graph.degree(t1) == 2);  // shared tracker
    double w_t1_p1 = 0;
    for (const auto& nb : pt.graph.neighbors(t1))
        if (nb.id == p1) w_t1_p1 = nb.weight;
    CHECK(w_t1_p1 == 3.0);  // subdomain requests roll up to the tracker domain

    CHECK(build_pt(fixtures::snapshot("s", {}), list, rules).graph.empty());
}

TEST_CASE("PT graphs are strictly bipartite and conserve weight") {
    auto rules = fixtures::test_rules();
    auto list = trackers({"t1.com", "t2.com", "t3.com"});
    std::mt19937_64 rng(17);
    std::vector<CrawlRecord> recs;
    std::size_t tracker_recs = 0;
    for (int p = 0; p < 10; ++p) {
        std::string pub = fixtures::node_name("pub", p) + ".com";
        recs.push_back(fixtures::record(pub, pub, ResourceKind::Document));
        for (int i = 0; i < 1 + static_cast<int>(rng() % 8); ++i) {
            std::string t = "t" + std::to_string(1 + rng() % 3) + ".com";
            recs.push_back(fixtures::record(pub, t, ResourceKind::Script));
            ++tracker_recs;
        }
        if (rng() % 2) recs.push_back(fixtures::record(pub, "benign.org", ResourceKind::Image));
    }
    PtGraph pt = build_pt(fixtures::snapshot("s", recs), list, rules);

    double weight_sum = 0;
    pt.graph.for_each_edge([&](NodeId a, NodeId b, double w) {
        CHECK(pt.graph.node(a).role != pt.graph.node(b).role);
        CHECK(w >= 1.0);
        weight_sum += w;
    });
    CHECK(weight_sum == static_cast<double>(tracker_recs));
    for (NodeId v = 0; v < pt.graph.node_count(); ++v)
        if (pt.graph.node(v).role == NodeRole::Publisher) CHECK(pt.graph.degree(v) >= 1);
}

TEST_CASE("a domain can be publisher and tracker as distinct nodes") {
    auto rules = fixtures::test_rules();
    auto list = trackers({"t1.com", "google.com"});
    auto snap = fixtures::snapshot("s", {
        fixtures::record("google.com", "google.com", ResourceKind::Document),
        fixtures::record("google.com", "t1.com", ResourceKind::Script),
        fixtures::record("p.com", "google.com", ResourceKind::Script),
        fixtures::record("p.com", "t1.com", ResourceKind::Script),
    });
    PtGraph pt = build_pt(snap, list, rules);
    CHECK(pt.graph.find("google.com", NodeRole::Publisher) != kNoNode);
    CHECK(pt.graph.find("google.com", NodeRole::Tracker) != kNoNode);
    pt.graph.for_each_edge([&](NodeId a, NodeId b, double) {
        CHECK(pt.graph.node(a).role != pt.graph.node(b).role);
    });
}

TEST_CASE("pt_summary on complete bipartite 3x2") {
    auto rules = fixtures::test_rules();
    auto list = trackers({"t1.com", "t2.com"});
    std::vector<CrawlRecord> recs;
    for (const char* p : {"pa.com", "pb.com", "pc.com"})
        for (const char* t : {"t1.com", "t2.com"})
            recs.push_back(fixtures::record(p, t, ResourceKind::Script));
    PtGraph pt = build_pt(fixtures::snapshot("s", recs), list, rules);
    auto s = pt_summary(pt);
    CHECK(s.summary.n_nodes == 5);
    CHECK(s.summary.n_edges == 6);
    CHECK(s.summary.norm_avg_weight == 1.0);
    CHECK(s.summary.density == 1.0);
    CHECK(s.summary.diameter == 2);
    CHECK(s.summary.avg_clustering == 0.0);
    CHECK(s.dropped.empty());
}

TEST_CASE("pt_summary density matches the Table-I-scale formula") {
    // |P|=5100, |T|=610, E=74037 -> DE = 0.0237985
    std::mt19937_64 rng(90210);
    Graph::Builder b;
    for (int p = 0; p < 5100; ++p) b.add_node(fixtures::node_name("p", p), NodeRole::Publisher);
    for (int t = 0; t < 610; ++t) b.add_node(fixtures::node_name("t", t), NodeRole::Tracker);
    std::set<std::pair<int, int>> seen;
    while (seen.size() < 74037) {
        int p = static_cast<int>(rng() % 5100), t = static_cast<int>(rng() % 610);
        if (seen.emplace(p, t).second)
            b.add_edge(fixtures::node_name("t", t), NodeRole::Tracker,
                       fixtures::node_name("p", p), NodeRole::Publisher, 1.0);
    }
    Graph g = b.build();
    CHECK(density(g, DensityMode::Bipartite) == doctest::Approx(0.023798457087753133).epsilon(1e-12));
}

TEST_CASE("pt_summary path p1-t1-p2") {
    auto rules = fixtures::test_rules();
    auto list = trackers({"t1.com"});
    auto snap = fixtures::snapshot("s", {
        fixtures::record("p1.com", "t1.com", ResourceKind::Script),
        fixtures::record("p2.com", "t1.com", ResourceKind::Script),
    });
    auto s = pt_summary(build_pt(snap, list, rules));
    CHECK(s.summary.n_nodes == 3);
    CHECK(s.summary.n_edges == 2);
    CHECK(s.summary.density == 1.0);  // 2 / (2*1)
    CHECK(s.summary.diameter == 2);
}

TEST_CASE("node metrics on a single-tracker star") {
    auto rules = fixtures::test_rules();
    auto list = trackers({"t1.com"});
    std::vector<CrawlRecord> recs;
    for (int p = 0; p < 5; ++p)
        recs.push_back(fixtures::record(fixtures::node_name("p", p) + ".com", "t1.com",
                                        ResourceKind::Script));
    auto metrics = pt_node_metrics(build_pt(fixtures::snapshot("s", recs), list, rules));
    REQUIRE(metrics.trackers.names.size() == 1);
    CHECK(metrics.trackers.metrics[0].degree_centrality == 1.0);
    REQUIRE(metrics.publishers.names.size() == 5);
    for (const auto& m : metrics.publishers.metrics) {
        CHECK(m.degree_centrality == doctest::Approx(1.0 / 5.0));
        CHECK(m.betweenness == 0.0);
    }
}

TEST_CASE("bridging tracker outranks leaf tracker in betweenness") {
    auto rules = fixtures::test_rules();
    auto list = trackers({"t1.com", "t2.com"});
    // t1 bridges two publisher groups; t2 hangs off one publisher
    auto snap = fixtures::snapshot("s", {
        fixtures::record("pa.com", "t1.com", ResourceKind::Script),
        fixtures::record("pb.com", "t1.com", ResourceKind::Script),
        fixtures::record("pc.com", "t1.com", ResourceKind::Script),
        fixtures::record("pc.com", "t2.com", ResourceKind::Script),
    });
    auto metrics = pt_node_metrics(build_pt(snap, list, rules));
    REQUIRE(metrics.trackers.names.size() == 2);
    double bc_t1 = 0, bc_t2 = 0;
    for (std::size_t i = 0; i < metrics.trackers.names.size(); ++i) {
        if (metrics.trackers.names[i] == "t1.com") bc_t1 = metrics.trackers.metrics[i].betweenness;
        if (metrics.trackers.names[i] == "t2.com") bc_t2 = metrics.trackers.metrics[i].betweenness;
    }
    CHECK(bc_t1 > bc_t2);
    CHECK(bc_t2 == 0.0);
}

TEST_CASE("publisher betweenness stays below the top tracker on random PT fixtures") {
    std::mt19937_64 rng(140);
    for (int it = 0; it < 100; ++it) {
        int n_trk = 3 + static_cast<int>(rng() % 6);
        int n_pub = 20 + static_cast<int>(rng() % 41);
        Graph g = fixtures::random_bipartite(rng, n_pub, n_trk, 4);
        Graph l = lcc(g);
        if (l.node_count() < 3) continue;
        auto bc = betweenness(l);
        double max_pub = 0, max_trk = 0;
        for (NodeId v = 0; v < l.node_count(); ++v) {
            if (l.node(v).role == NodeRole::Publisher) max_pub = std::max(max_pub, bc[v]);
            else max_trk = std::max(max_trk, bc[v]);
        }
        CHECK(max_pub <= max_trk);
    }
}

TEST_CASE("tracker degree centrality dominates publishers at the median") {
    std::mt19937_64 rng(141);
    for (int it = 0; it < 20; ++it) {
        Graph g = lcc(fixtures::random_bipartite(rng, 60, 6, 4));
        if (g.node_count() < 3) continue;
        auto dc = degree_centrality(g);
        std::vector<double> pubs, trks;
        for (NodeId v = 0; v < g.node_count(); ++v)
            (g.node(v).role == NodeRole::Publisher ? pubs : trks).push_back(dc[v]);
        std::sort(pubs.begin(), pubs.end());
        std::sort(trks.begin(), trks.end());
        REQUIRE(!pubs.empty());
        REQUIRE(!trks.empty());
        CHECK(trks[trks.size() / 2] >= pubs[pubs.size() / 2]);
    }
}

TEST_CASE("metric correlations flag linear dependence and degeneracy") {
    RoleMetrics rm;
    for (int i = 0; i < 10; ++i) {
        rm.names.push_back(fixtures::node_name("n", i));
        NodeMetrics m;
        m.degree_centrality = 0.1 * (i + 1);
        m.betweenness = 0.2 * (i + 1);  // BC = 2*DC
        m.coreness = 0.5;               // constant
        rm.metrics.push_back(m);
    }
    auto corr = metric_correlations(rm);
    REQUIRE(corr.dc_bc.defined);
    CHECK(corr.dc_bc.r == doctest::Approx(1.0));
    CHECK(corr.dc_bc.significant);
    CHECK_FALSE(corr.dc_cp.defined);
    CHECK_FALSE(corr.bc_cp.defined);

    RoleMetrics tiny;
    tiny.names = {"a", "b"};
    tiny.metrics = {{0.1, 0.2, 0.3}, {0.2, 0.3, 0.4}};
    CHECK_THROWS_AS((void)metric_correlations(tiny), GraphError);
}

TEST_CASE("independent random metrics correlate weakly") {
    std::mt19937_64 rng(9090);
    std::uniform_real_distribution<double> u(0, 1);
    RoleMetrics rm;
    for (int i = 0; i < 200; ++i) {
        rm.names.push_back(fixtures::node_name("n", i));
        rm.metrics.push_back({u(rng), u(rng), u(rng)});
    }
    auto corr = metric_correlations(rm);
    CHECK(std::abs(corr.dc_bc.r) < 0.2);
    CHECK(std::abs(corr.dc_cp.r) < 0.2);
    CHECK(std::abs(corr.bc_cp.r) < 0.2);
}

TEST_CASE("top_k ranking, coverage and truncation") {
    auto rules = fixtures::test_rules();
    auto list = trackers({"t1.com", "t2.com", "t3.com"});
    std::vector<CrawlRecord> recs;
    for (int p = 0; p < 10; ++p) {
        std::string pub = fixtures::node_name("p", p) + ".com";
        recs.push_back(fixtures::record(pub, "t1.com", ResourceKind::Script));
        if (p < 5) recs.push_back(fixtures::record(pub, "t2.com", ResourceKind::Script));
        if (p < 2) recs.push_back(fixtures::record(pub, "t3.com", ResourceKind::Script));
    }
    PtGraph pt = build_pt(fixtures::snapshot("s", recs), list, rules);

    std::unordered_map<std::string, std::string> orgs{{"t1.com", "TrackOne"}};
    auto ranking = top_k(pt, RankMetric::Degree, 2, orgs);
    REQUIRE(ranking.entries.size() == 2);
    CHECK_FALSE(ranking.truncated);
    CHECK(ranking.entries[0].domain == "t1.com");
    CHECK(ranking.entries[0].coverage_pct == doctest::Approx(100.0));
    CHECK(ranking.entries[0].organization == "TrackOne");
    CHECK(ranking.entries[1].domain == "t2.com");
    CHECK(ranking.entries[1].coverage_pct == doctest::Approx(50.0));
    CHECK(ranking.entries[1].organization == "t2.com");  // unlabeled falls back to the domain

    auto all = top_k(pt, RankMetric::Degree, 10, orgs);
    CHECK(all.truncated);
    CHECK(all.entries.size() == 3);

    // coverage% * |V_P| reproduces the degree exactly
    for (const auto& e : all.entries) {
        NodeId v = pt.graph.find(e.domain, NodeRole::Tracker);
        CHECK(e.coverage_pct * 10.0 / 100.0 == doctest::Approx(pt.graph.degree(v)).epsilon(1e-12));
    }
}

TEST_CASE("top_k matches a sort oracle on random fixtures") {
    std::mt19937_64 rng(77007);
    Graph g = fixtures::random_bipartite(rng, 40, 8, 5);
    PtGraph pt{lcc(g)};
    auto ranking = top_k(pt, RankMetric::Degree, 8);

    std::vector<std::pair<double, std::string>> oracle;
    auto dc = degree_centrality(pt.graph);
    for (NodeId v = 0; v < pt.graph.node_count(); ++v)
        if (pt.graph.node(v).role == NodeRole::Tracker)
            oracle.emplace_back(-dc[v], pt.graph.node(v).name);
    std::sort(oracle.begin(), oracle.end());
    REQUIRE(ranking.entries.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i)
        CHECK(ranking.entries[i].domain == oracle[i].second);

    // singleton graph: the only tracker covers everything
    auto rules = fixtures::test_rules();
    auto list = trackers({"t1.com"});
    auto snap = fixtures::snapshot("s", {fixtures::record("p.com", "t1.com", ResourceKind::Script)});
    auto single = top_k(build_pt(snap, list, rules), RankMetric::Degree, 1);
    REQUIRE(single.entries.size() == 1);
    CHECK(single.entries[0].coverage_pct == 100.0);
}

TEST_CASE("a tracker covering 81 of 100 publishers reports coverage 81.0") {
    Graph::Builder b;
    for (int p = 0; p < 100; ++p) {
        std::string pub = fixtures::node_name("p", p);
        b.add_edge("anchor.net", NodeRole::Tracker, pub, NodeRole::Publisher, 1.0);
        if (p < 81) b.add_edge("top-tracker.com", NodeRole::Tracker, pub, NodeRole::Publisher, 1.0);
        if (p < 40) b.add_edge("mid-tracker.com", NodeRole::Tracker, pub, NodeRole::Publisher, 1.0);
    }
    auto ranking = top_k(PtGraph{b.build()}, RankMetric::Degree, 3);
    REQUIRE(ranking.entries.size() == 3);
    CHECK(ranking.entries[0].domain == "anchor.net");
    CHECK(ranking.entries[1].domain == "top-tracker.com");
    CHECK(ranking.entries[1].coverage_pct == 81.0);
}

TEST_CASE("ties in rankings break lexicographically") {
    auto rules = fixtures::test_rules();
    auto list = trackers({"zeta.com", "alpha.com"});
    auto snap = fixtures::snapshot("s", {
        fixtures::record("p.com", "zeta.com", ResourceKind::Script),
        fixtures::record("p.com", "alpha.com", ResourceKind::Script),
    });
    auto ranking = top_k(build_pt(snap, list, rules), RankMetric::Degree, 2);
    REQUIRE(ranking.entries.size() == 2);
    CHECK(ranking.entries[0].domain == "alpha.com");
    CHECK(ranking.entries[1].domain == "zeta.com");
}

TEST_SUITE_END();
