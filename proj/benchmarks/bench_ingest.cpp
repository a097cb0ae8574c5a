#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "trackgraph/ingest.hpp"
#include "trackgraph/suffix.hpp"

using namespace trackgraph;

namespace {

void BM_Etld1(benchmark::State& state) {
    auto rules = SuffixRules::from_lines({"com", "net", "org", "io", "uk", "co.uk", "*.ck"});
    const std::string hosts[] = {"a.b.example.com", "cdn.tracker.co.uk", "x.y.z.site.io",
                                 "plain.net"};
    std::size_t i = 0;
    for (auto _ : state) {
        auto d = rules.etld1(hosts[i++ % 4]);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_Etld1);

void BM_ParseCrawlLog(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::string log;
    for (int i = 0; i < state.range(0); ++i) {
        log += "{\"publisher\":\"pub" + std::to_string(rng() % 500) +
               ".com\",\"request\":\"https://sub" + std::to_string(rng() % 9) + ".trk" +
               std::to_string(rng() % 40) + ".net/r.js\",\"kind\":\"script\"}\n";
    }
    for (auto _ : state) {
        std::istringstream in(log);
        auto recs = parse_crawl_log(in, "bench");
        benchmark::DoNotOptimize(recs);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ParseCrawlLog)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
    auto rules = SuffixRules::from_lines({"com", "net", "org"});
    TrackerList list;
    for (int i = 0; i < 200; ++i) list.domains.insert("trk" + std::to_string(i) + ".net");
    std::mt19937_64 rng(4);
    std::vector<CrawlRecord> recs;
    for (int i = 0; i < 1000; ++i)
        recs.push_back(fixtures::record("pub.com",
                                        "sub.trk" + std::to_string(rng() % 400) + ".net",
                                        ResourceKind::Script));
    for (auto _ : state) {
        int counts[3] = {0, 0, 0};
        for (const auto& r : recs)
            ++counts[static_cast<int>(classify_request(r, list, rules))];
        benchmark::DoNotOptimize(counts);
    }
    state.SetItemsProcessed(state.iterations() * recs.size());
}
BENCHMARK(BM_Classify);

}  // namespace
