#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "trackgraph/errors.hpp"
#include "trackgraph/netstats.hpp"

using namespace trackgraph;

TEST_SUITE_BEGIN("netstats");

namespace {

TrackerList two_trackers() {
    TrackerList list;
    list.domains = {"t1.com", "t2.com"};
    return list;
}

}  // namespace

TEST_CASE("subdomain rule: distinct script hosts are distinct providers") {
    auto rules = fixtures::test_rules();
    auto list = two_trackers();
    auto snap = fixtures::snapshot("s", {
        fixtures::record("p.com", "a.t1.com", ResourceKind::Script),
        fixtures::record("p.com", "b.t1.com", ResourceKind::Script),
        fixtures::record("p.com", "t2.com", ResourceKind::Image),
    });
    auto act = publisher_activity(snap, list, rules);
    REQUIRE(act.count("p.com") == 1);
    const auto& a = act.at("p.com");
    CHECK(a.unique_trackers == 2);
    CHECK(a.total_tracker_requests == 3);
    CHECK(a.avg_requests_per_tracker == doctest::Approx(1.5));
    CHECK(a.library_providers == 2);
}

TEST_CASE("singleton publisher activity") {
    auto rules = fixtures::test_rules();
    auto list = two_trackers();
    auto snap = fixtures::snapshot("s", {
        fixtures::record("p.com", "t1.com", ResourceKind::Script),
    });
    auto a = publisher_activity(snap, list, rules).at("p.com");
    CHECK(a.unique_trackers == 1);
    CHECK(a.total_tracker_requests == 1);
    CHECK(a.avg_requests_per_tracker == 1.0);
    CHECK(a.library_providers == 1);
}

TEST_CASE("hand-counted three-publisher fixture") {
    auto rules = fixtures::test_rules();
    auto list = two_trackers();
    auto snap = fixtures::snapshot("s", {
        // pa: 3 requests, 2 trackers, 1 script host
        fixtures::record("pa.com", "t1.com", ResourceKind::Script),
        fixtures::record("pa.com", "t1.com", ResourceKind::Xhr),
        fixtures::record("pa.com", "t2.com", ResourceKind::Image),
        // pb: 2 requests to one tracker, non-script only
        fixtures::record("pb.com", "s.t2.com", ResourceKind::Image),
        fixtures::record("pb.com", "s.t2.com", ResourceKind::Other),
        // pc: 4 requests, 2 trackers, 3 script hosts
        fixtures::record("pc.com", "x.t1.com", ResourceKind::Script),
        fixtures::record("pc.com", "y.t1.com", ResourceKind::Script),
        fixtures::record("pc.com", "z.t2.com", ResourceKind::Script),
        fixtures::record("pc.com", "z.t2.com", ResourceKind::Script),
        // noise that must not count
        fixtures::record("pa.com", "pa.com", ResourceKind::Document),
        fixtures::record("pb.com", "other.org", ResourceKind::Script),
    });
    auto act = publisher_activity(snap, list, rules);
    CHECK(act.at("pa.com").unique_trackers == 2);
    CHECK(act.at("pa.com").total_tracker_requests == 3);
    CHECK(act.at("pa.com").library_providers == 1);
    CHECK(act.at("pb.com").unique_trackers == 1);
    CHECK(act.at("pb.com").total_tracker_requests == 2);
    CHECK(act.at("pb.com").library_providers == 0);
    CHECK(act.at("pc.com").unique_trackers == 2);
    CHECK(act.at("pc.com").total_tracker_requests == 4);
    CHECK(act.at("pc.com").avg_requests_per_tracker == 2.0);
    CHECK(act.at("pc.com").library_providers == 3);
}

TEST_CASE("activity invariants on a random fixture") {
    auto rules = fixtures::test_rules();
    auto list = two_trackers();
    std::mt19937_64 rng(7);
    std::vector<CrawlRecord> recs;
    std::size_t tracker_records = 0;
    for (int p = 0; p < 25; ++p) {
        std::string pub = fixtures::node_name("pub", p) + ".com";
        recs.push_back(fixtures::record(pub, pub, ResourceKind::Document));
        int n = 1 + static_cast<int>(rng() % 12);
        for (int i = 0; i < n; ++i) {
            bool t1 = rng() % 2 == 0;
            std::string host = (rng() % 3 == 0 ? "sub" + std::to_string(rng() % 3) + "." : "");
            host += t1 ? "t1.com" : "t2.com";
            auto kind = rng() % 2 == 0 ? ResourceKind::Script : ResourceKind::Image;
            recs.push_back(fixtures::record(pub, host, kind));
            ++tracker_records;
        }
    }
    auto act = publisher_activity(fixtures::snapshot("s", recs), list, rules);

    // distinct script-serving tracker eTLD+1s per publisher, for the
    // subdomain-dominance bound below
    std::map<std::string, std::set<std::string>> script_domains;
    for (const auto& rec : recs)
        if (rec.resource_kind == ResourceKind::Script &&
            classify_request(rec, list, rules) == RequestClass::ThirdPartyTracker)
            script_domains[publisher_key(rec.publisher_host, rules)].insert(
                rules.etld1(rec.request_host));

    std::size_t total_sum = 0;
    for (const auto& [pub, a] : act) {
        CHECK(a.unique_trackers >= 1);
        CHECK(a.unique_trackers <= a.total_tracker_requests);
        CHECK(a.avg_requests_per_tracker ==
              static_cast<double>(a.total_tracker_requests) / a.unique_trackers);
        CHECK(a.library_providers >= script_domains[pub].size());
        total_sum += a.total_tracker_requests;
    }
    CHECK(total_sum == tracker_records);
}

TEST_CASE("https adoption ratio over document requests") {
    auto rules = fixtures::test_rules();
    std::vector<CrawlRecord> recs;
    const char* https_pubs[] = {"a.com", "b.com"};
    const char* http_pubs[] = {"c.com", "d.com"};
    for (const char* p : https_pubs)
        recs.push_back(fixtures::record(p, p, ResourceKind::Document, Scheme::Https));
    for (const char* p : http_pubs)
        recs.push_back(fixtures::record(p, p, ResourceKind::Document, Scheme::Http));
    auto res = https_adoption(fixtures::snapshot("s", recs), rules);
    CHECK(res.fraction == 0.5);
    CHECK(res.publishers_flagged == 0);

    SUBCASE("all https is the boundary 1.0") {
        std::vector<CrawlRecord> all;
        for (const char* p : https_pubs)
            all.push_back(fixtures::record(p, p, ResourceKind::Document, Scheme::Https));
        CHECK(https_adoption(fixtures::snapshot("s", all), rules).fraction == 1.0);
    }
}

TEST_CASE("publisher without a document record falls back to its first record") {
    auto rules = fixtures::test_rules();
    auto snap = fixtures::snapshot("s", {
        fixtures::record("a.com", "t.com", ResourceKind::Script, Scheme::Https),
        fixtures::record("a.com", "u.com", ResourceKind::Image, Scheme::Http),
        // third-party document must not count as the page's own
        fixtures::record("b.com", "frame.org", ResourceKind::Document, Scheme::Https),
        fixtures::record("b.com", "b.com", ResourceKind::Xhr, Scheme::Http),
    });
    auto res = https_adoption(snap, rules);
    CHECK(res.publishers_total == 2);
    CHECK(res.publishers_flagged == 2);
    // both fall back to their first record's scheme: a.com https, b.com https
    CHECK(res.https_publishers == 2);
}

TEST_CASE("fraction mimicking the 3144-of-5100 snapshot") {
    auto rules = fixtures::test_rules();
    std::vector<CrawlRecord> recs;
    recs.reserve(5100);
    for (int i = 0; i < 5100; ++i) {
        std::string pub = "p" + std::to_string(i) + ".com";
        recs.push_back(fixtures::record(pub, pub, ResourceKind::Document,
                                        i < 3144 ? Scheme::Https : Scheme::Http));
    }
    auto res = https_adoption(fixtures::snapshot("s", recs), rules);
    CHECK(res.https_publishers == 3144);
    CHECK(res.fraction == doctest::Approx(0.6165).epsilon(1e-4));
    CHECK(res.fraction == 3144.0 / 5100.0);
}

TEST_CASE("cdf merges duplicates and ends at one") {
    auto series = cdf(std::vector<double>{1, 1, 2});
    REQUIRE(series.points.size() == 2);
    CHECK(series.points[0].first == 1.0);
    CHECK(series.points[0].second == doctest::Approx(2.0 / 3.0));
    CHECK(series.points[1].first == 2.0);
    CHECK(series.points[1].second == 1.0);

    auto single = cdf(std::vector<double>{5});
    REQUIRE(single.points.size() == 1);
    CHECK(single.points[0] == std::pair{5.0, 1.0});

    CHECK_THROWS_AS((void)cdf(std::vector<double>{}), GraphError);
}

TEST_CASE("cdf tracks the sorted-rank oracle on uniform draws") {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> draws(100);
    for (auto& d : draws) d = u(rng);

    auto series = cdf(draws);
    // monotone in both coordinates
    for (std::size_t i = 1; i < series.points.size(); ++i) {
        CHECK(series.points[i].first > series.points[i - 1].first);
        CHECK(series.points[i].second >= series.points[i - 1].second);
    }
    CHECK(series.points.back().second == 1.0);

    // compare against the sorted-rank oracle at the deciles
    std::vector<double> sorted = draws;
    std::sort(sorted.begin(), sorted.end());
    for (int d = 1; d <= 9; ++d) {
        const double x = d / 10.0;
        std::size_t rank = 0;
        while (rank < sorted.size() && sorted[rank] <= x) ++rank;
        const double oracle = static_cast<double>(rank) / sorted.size();
        double measured = 0.0;
        for (const auto& [v, f] : series.points)
            if (v <= x) measured = f;
        CHECK(measured == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(std::abs(measured - x) < 0.15);
    }
}

TEST_CASE("nearest-rank percentiles") {
    std::vector<double> v{15, 20, 35, 40, 50};
    CHECK(percentile_nearest_rank(v, 5) == 15);
    CHECK(percentile_nearest_rank(v, 30) == 20);
    CHECK(percentile_nearest_rank(v, 40) == 20);
    CHECK(percentile_nearest_rank(v, 50) == 35);
    CHECK(percentile_nearest_rank(v, 100) == 50);
    CHECK_THROWS_AS((void)percentile_nearest_rank(std::vector<double>{}, 50), GraphError);
}

TEST_SUITE_END();
