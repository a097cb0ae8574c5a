#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "trackgraph/suffix.hpp"

namespace trackgraph {

enum class Scheme { Http, Https };
enum class ResourceKind { Script, Image, Document, Xhr, Other };
enum class RequestClass { FirstParty, ThirdPartyTracker, ThirdPartyOther };

const char* to_string(Scheme s);
const char* to_string(ResourceKind k);
const char* to_string(RequestClass c);

// One observed HTTP(s) request during a page visit.
struct CrawlRecord {
    std::string snapshot_id;
    std::string publisher_host;  // visited page hostname, lowercase
    std::string request_host;    // request target hostname, lowercase
    std::string request_path;    // path (+query), leading '/'
    Scheme scheme = Scheme::Http;
    ResourceKind resource_kind = ResourceKind::Other;
};

// A dated collection of page visits with a fixed tracker-list version.
struct Snapshot {
    std::string id;
    std::string date_label;
    std::string tracker_list_version;
    std::vector<CrawlRecord> records;
};

// Flat set of tracker domains at eTLD+1 granularity, with optional
// organization labels harvested from Disconnect-style lists.
struct TrackerList {
    std::string version;
    std::unordered_set<std::string> domains;
    std::unordered_map<std::string, std::string> organizations;

    bool contains(const std::string& domain) const { return domains.count(domain) != 0; }
};

struct ParseStats {
    std::size_t total_lines = 0;      // non-empty lines seen
    std::size_t malformed_lines = 0;  // skipped
};

// Crawl log: JSON-Lines, one object per request:
//   {"snapshot":"Sep17","publisher":"<host>","request":"<absolute URL>","kind":"script"}
// The scheme is taken from the request URL. Records come back in input
// order; malformed lines are counted and skipped. Throws ParseError when the
// stream is unreadable or more than half of the lines are malformed (that
// signals the wrong file format, not a few bad rows).
std::vector<CrawlRecord> parse_crawl_log(std::istream& in, const std::string& snapshot_id,
                                         ParseStats* stats = nullptr);

Snapshot load_snapshot(const std::filesystem::path& log, const std::string& id,
                       const std::string& date_label, const std::string& tracker_list_version,
                       ParseStats* stats = nullptr);

// Canonical serialization of records; parse_crawl_log(write_canonical_log(r))
// round-trips byte-identically for well-formed inputs.
void write_canonical_log(std::ostream& out, const std::vector<CrawlRecord>& records);

// Tracker list file: plain text (one domain per line, '#' comments) or
// Disconnect-style JSON, flattened to domains + organization labels. When
// rules are given, entries are normalized to eTLD+1 and unregistrable
// entries dropped.
TrackerList load_tracker_list(const std::filesystem::path& path, const SuffixRules* rules = nullptr,
                              std::string version = {});

// Three-way request classification. FirstParty iff request and publisher
// share an eTLD+1; else tracker-list membership decides. A host that fails
// eTLD+1 resolution makes the record ThirdPartyOther and sets *anomalous.
RequestClass classify_request(const CrawlRecord& rec, const TrackerList& trackers,
                              const SuffixRules& rules, bool* anomalous = nullptr);

// Analysis identity of a publisher: its eTLD+1, or the raw lowercase host
// for unregistrable hosts (those never survive publisher filtering).
std::string publisher_key(const std::string& publisher_host, const SuffixRules& rules);

struct FilterResult {
    Snapshot snapshot;  // records of publishers with >=1 tracker request
    std::size_t publishers_kept = 0;
    std::size_t publishers_dropped = 0;
    std::size_t anomalous_records = 0;
};

// Keep only publishers that embed at least one tracker.
FilterResult filter_publishers(const Snapshot& snap, const TrackerList& trackers,
                               const SuffixRules& rules);

}  // namespace trackgraph
