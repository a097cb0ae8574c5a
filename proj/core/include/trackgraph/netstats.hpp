#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trackgraph/ingest.hpp"

namespace trackgraph {

// Per-publisher network-activity measures.
struct PublisherActivity {
    std::string publisher;                     // eTLD+1
    std::size_t unique_trackers = 0;           // distinct tracker eTLD+1s
    std::size_t total_tracker_requests = 0;    // all tracker-classified requests
    double avg_requests_per_tracker = 0.0;     // total / unique, exactly
    std::size_t library_providers = 0;         // distinct full hostnames serving scripts
};

// Expects a publisher-filtered snapshot; keyed by publisher for
// deterministic iteration.
std::map<std::string, PublisherActivity> publisher_activity(const Snapshot& snap,
                                                            const TrackerList& trackers,
                                                            const SuffixRules& rules);

struct HttpsAdoption {
    double fraction = 0.0;
    std::size_t publishers_total = 0;
    std::size_t https_publishers = 0;
    std::size_t publishers_flagged = 0;  // no first-party document request seen
};

// Fraction of publishers whose own page document came over https. A
// publisher with no first-party document record is counted from the scheme
// of its first record and flagged.
HttpsAdoption https_adoption(const Snapshot& snap, const SuffixRules& rules);

// Empirical CDF with duplicate values merged: strictly increasing values,
// non-decreasing fractions, last fraction exactly 1.
struct CdfSeries {
    std::vector<std::pair<double, double>> points;
};

CdfSeries cdf(std::span<const double> values);

// Nearest-rank percentile (pct in (0,100]).
double percentile_nearest_rank(std::vector<double> values, double pct);

}  // namespace trackgraph
