#include "trackgraph/netstats.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "trackgraph/errors.hpp"

namespace trackgraph {

std::map<std::string, PublisherActivity> publisher_activity(const Snapshot& snap,
                                                            const TrackerList& trackers,
                                                            const SuffixRules& rules) {
    struct Acc {
        std::set<std::string> tracker_domains;
        std::set<std::string> script_hosts;  // full hostnames, per the subdomain rule
        std::size_t total = 0;
    };
    std::map<std::string, Acc> acc;

    for (const auto& rec : snap.records) {
        const std::string key = publisher_key(rec.publisher_host, rules);
        acc.try_emplace(key);
        if (classify_request(rec, trackers, rules) != RequestClass::ThirdPartyTracker) continue;
        auto& a = acc[key];
        a.total += 1;
        a.tracker_domains.insert(rules.etld1(rec.request_host));
        if (rec.resource_kind == ResourceKind::Script) a.script_hosts.insert(rec.request_host);
    }

    std::map<std::string, PublisherActivity> out;
    for (auto& [key, a] : acc) {
        PublisherActivity pa;
        pa.publisher = key;
        pa.unique_trackers = a.tracker_domains.size();
        pa.total_tracker_requests = a.total;
        pa.avg_requests_per_tracker =
            pa.unique_trackers == 0
                ? 0.0
                : static_cast<double>(pa.total_tracker_requests) / pa.unique_trackers;
        pa.library_providers = a.script_hosts.size();
        out.emplace(key, std::move(pa));
    }
    return out;
}

HttpsAdoption https_adoption(const Snapshot& snap, const SuffixRules& rules) {
    struct State {
        Scheme first_scheme = Scheme::Http;
        bool has_any = false;
        Scheme doc_scheme = Scheme::Http;
        bool has_doc = false;
    };
    std::map<std::string, State> pubs;

    for (const auto& rec : snap.records) {
        const std::string key = publisher_key(rec.publisher_host, rules);
        auto& st = pubs[key];
        if (!st.has_any) {
            st.first_scheme = rec.scheme;
            st.has_any = true;
        }
        if (st.has_doc || rec.resource_kind != ResourceKind::Document) continue;
        bool first_party = false;
        try {
            first_party = rules.etld1(rec.request_host) == rules.etld1(rec.publisher_host);
        } catch (const ParseError&) {
        }
        if (first_party) {
            st.doc_scheme = rec.scheme;
            st.has_doc = true;
        }
    }

    HttpsAdoption res;
    res.publishers_total = pubs.size();
    for (const auto& [key, st] : pubs) {
        const Scheme scheme = st.has_doc ? st.doc_scheme : st.first_scheme;
        if (!st.has_doc) ++res.publishers_flagged;
        if (scheme == Scheme::Https) ++res.https_publishers;
    }
    res.fraction = res.publishers_total == 0
                       ? 0.0
                       : static_cast<double>(res.https_publishers) / res.publishers_total;
    return res;
}

CdfSeries cdf(std::span<const double> values) {
    if (values.empty()) throw GraphError("cdf of empty series");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    CdfSeries out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        out.points.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
    }
    out.points.back().second = 1.0;
    return out;
}

double percentile_nearest_rank(std::vector<double> values, double pct) {
    if (values.empty()) throw GraphError("percentile of empty series");
    if (!(pct > 0.0 && pct <= 100.0)) throw GraphError("percentile out of range");
    std::sort(values.begin(), values.end());
    auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(values.size())));
    if (rank == 0) rank = 1;
    return values[rank - 1];
}

}  // namespace trackgraph
