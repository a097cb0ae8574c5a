#include "trackgraph/longitudinal.hpp"

#include <algorithm>
#include <map>

#include "trackgraph/errors.hpp"

namespace trackgraph {

SnapshotSeries align(const std::vector<Snapshot>& snapshots, const SuffixRules& rules) {
    if (snapshots.size() < 2) throw GraphError("align requires at least 2 snapshots");

    std::set<std::string> common;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        std::set<std::string> pubs;
        for (const auto& rec : snapshots[i].records)
            pubs.insert(publisher_key(rec.publisher_host, rules));
        if (i == 0) {
            common = std::move(pubs);
        } else {
            std::set<std::string> next;
            std::set_intersection(common.begin(), common.end(), pubs.begin(), pubs.end(),
                                  std::inserter(next, next.begin()));
            common = std::move(next);
        }
    }
    if (common.empty()) throw GraphError("no common publishers across snapshots");

    SnapshotSeries series;
    series.common_publishers = std::move(common);
    for (const auto& snap : snapshots) {
        Snapshot filtered;
        filtered.id = snap.id;
        filtered.date_label = snap.date_label;
        filtered.tracker_list_version = snap.tracker_list_version;
        for (const auto& rec : snap.records)
            if (series.common_publishers.count(publisher_key(rec.publisher_host, rules)))
                filtered.records.push_back(rec);
        series.snapshots.push_back(std::move(filtered));
    }
    return series;
}

TrendSeries trend_from_values(std::vector<std::pair<std::string, double>> values) {
    TrendSeries out;
    out.values = std::move(values);
    if (out.values.size() >= 2 && out.values.front().second != 0.0) {
        const double first = out.values.front().second;
        const double last = out.values.back().second;
        out.change_pct = (last - first) / first * 100.0;
        out.change_defined = true;
    }
    return out;
}

TrendSeries trend_table(const SnapshotSeries& series,
                        const std::function<double(const Snapshot&)>& extract) {
    std::vector<std::pair<std::string, double>> values;
    values.reserve(series.snapshots.size());
    for (const auto& snap : series.snapshots) values.emplace_back(snap.id, extract(snap));
    return trend_from_values(std::move(values));
}

const char* to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::Stable: return "stable";
        case StabilityClass::Dropped: return "dropped";
        case StabilityClass::Climbed: return "climbed";
        default: return "transient";
    }
}

const char* legend_symbol(StabilityClass c) {
    switch (c) {
        case StabilityClass::Stable: return "(*)";
        case StabilityClass::Dropped: return "(+/-)";
        case StabilityClass::Climbed: return "(+)";
        default: return "";
    }
}

StabilityReport topk_stability(const std::vector<TrackerRanking>& rankings,
                               const std::vector<std::string>& snapshot_ids, std::size_t k) {
    if (rankings.size() < 2) throw GraphError("stability requires at least 2 ranking lists");
    if (rankings.size() != snapshot_ids.size())
        throw GraphError("stability: ranking/id count mismatch");
    if (k < 1) throw GraphError("stability requires k >= 1");
    for (const auto& r : rankings)
        if (k > r.entries.size())
            throw GraphError("top-k " + std::to_string(k) + " exceeds a ranking of size " +
                             std::to_string(r.entries.size()));

    const std::size_t n = rankings.size();
    struct PerTracker {
        std::vector<std::size_t> ranks;
        double coverage_sum = 0.0;
        std::size_t present = 0;
        bool in_any_topk = false;
    };
    std::map<std::string, PerTracker> trackers;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t i = 0; i < rankings[s].entries.size(); ++i) {
            const auto& e = rankings[s].entries[i];
            auto& t = trackers[e.domain];
            if (t.ranks.empty()) t.ranks.assign(n, kRankAbsent);
            t.ranks[s] = i + 1;
            t.coverage_sum += e.coverage_pct;
            t.present += 1;
            if (i + 1 <= k) t.in_any_topk = true;
        }
    }

    auto in_topk = [&](std::size_t rank) { return rank != kRankAbsent && rank <= k; };

    StabilityReport rep;
    rep.snapshot_ids = snapshot_ids;
    rep.k = k;
    for (auto& [domain, t] : trackers) {
        if (!t.in_any_topk) continue;
        StabilityEntry e;
        e.tracker = domain;
        e.ranks = t.ranks;
        e.avg_coverage_pct = t.present == 0 ? 0.0 : t.coverage_sum / static_cast<double>(t.present);

        bool all_topk = true;
        for (std::size_t s = 0; s < n; ++s) all_topk = all_topk && in_topk(t.ranks[s]);
        std::size_t first_seen = n;
        for (std::size_t s = 0; s < n; ++s)
            if (t.ranks[s] != kRankAbsent) {
                first_seen = s;
                break;
            }
        const bool first_in = in_topk(t.ranks.front());
        const bool last_in = in_topk(t.ranks.back());
        if (all_topk) {
            e.cls = StabilityClass::Stable;
        } else if (first_seen < n && in_topk(t.ranks[first_seen]) && !last_in) {
            e.cls = StabilityClass::Dropped;
        } else if (!first_in && last_in) {
            e.cls = StabilityClass::Climbed;
        } else {
            e.cls = StabilityClass::Transient;
        }
        rep.entries.push_back(std::move(e));
    }

    auto mean_rank = [](const StabilityEntry& e) {
        double sum = 0.0;
        std::size_t cnt = 0;
        for (auto r : e.ranks)
            if (r != kRankAbsent) {
                sum += static_cast<double>(r);
                ++cnt;
            }
        return cnt == 0 ? 1e18 : sum / static_cast<double>(cnt);
    };
    std::sort(rep.entries.begin(), rep.entries.end(),
              [&](const StabilityEntry& a, const StabilityEntry& b) {
                  if (a.cls != b.cls) return static_cast<int>(a.cls) < static_cast<int>(b.cls);
                  const double ma = mean_rank(a), mb = mean_rank(b);
                  if (ma != mb) return ma < mb;
                  return a.tracker < b.tracker;
              });
    return rep;
}

}  // namespace trackgraph
