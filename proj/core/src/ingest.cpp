#include "trackgraph/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trackgraph/errors.hpp"

namespace trackgraph {

using json = nlohmann::json;

const char* to_string(Scheme s) {
    return s == Scheme::Https ? "https" : "http";
}

const char* to_string(ResourceKind k) {
    switch (k) {
        case ResourceKind::Script: return "script";
        case ResourceKind::Image: return "image";
        case ResourceKind::Document: return "document";
        case ResourceKind::Xhr: return "xhr";
        default: return "other";
    }
}

const char* to_string(RequestClass c) {
    switch (c) {
        case RequestClass::FirstParty: return "first_party";
        case RequestClass::ThirdPartyTracker: return "third_party_tracker";
        default: return "third_party_other";
    }
}

namespace {

std::string ascii_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

ResourceKind parse_kind(const std::string& s) {
    if (s == "script") return ResourceKind::Script;
    if (s == "image") return ResourceKind::Image;
    if (s == "document") return ResourceKind::Document;
    if (s == "xhr") return ResourceKind::Xhr;
    return ResourceKind::Other;  // lenient: unknown kinds bucket as other
}

// Normalizes a host that may arrive with stray scheme, path, port or
// trailing dot. Returns empty string when nothing host-like remains.
std::string clean_host(std::string h) {
    h = ascii_lower(h);
    if (auto p = h.find("://"); p != std::string::npos) h.erase(0, p + 3);
    if (auto p = h.find_first_of("/?#"); p != std::string::npos) h.erase(p);
    if (auto p = h.find('@'); p != std::string::npos) h.erase(0, p + 1);
    if (!h.empty() && h[0] == '[') {  // bracketed IPv6 literal
        auto close = h.find(']');
        if (close == std::string::npos) return {};
        h = h.substr(1, close - 1);
    } else if (auto p = h.rfind(':'); p != std::string::npos) {
        h.erase(p);
    }
    while (!h.empty() && h.back() == '.') h.pop_back();
    return h;
}

struct ParsedUrl {
    Scheme scheme;
    std::string host;
    std::string path;
};

bool parse_url(const std::string& url, ParsedUrl& out) {
    auto sep = url.find("://");
    if (sep == std::string::npos) return false;
    std::string scheme = ascii_lower(url.substr(0, sep));
    if (scheme == "http") {
        out.scheme = Scheme::Http;
    } else if (scheme == "https") {
        out.scheme = Scheme::Https;
    } else {
        return false;
    }
    std::string rest = url.substr(sep + 3);
    auto slash = rest.find_first_of("/?#");
    std::string authority = slash == std::string::npos ? rest : rest.substr(0, slash);
    out.path = slash == std::string::npos ? "/" : rest.substr(slash);
    if (out.path[0] != '/') out.path.insert(out.path.begin(), '/');
    out.host = clean_host(authority);
    return !out.host.empty();
}

}  // namespace

std::vector<CrawlRecord> parse_crawl_log(std::istream& in, const std::string& snapshot_id,
                                         ParseStats* stats) {
    if (!in) throw ParseError("unreadable crawl log stream");

    std::vector<CrawlRecord> records;
    ParseStats local;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        ++local.total_lines;

        json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (obj.is_discarded() || !obj.is_object()) {
            ++local.malformed_lines;
            continue;
        }
        if (obj.contains("snapshot") &&
            (!obj["snapshot"].is_string() || obj["snapshot"].get<std::string>() != snapshot_id)) {
            // a line from a different snapshot in a per-snapshot file is a
            // mixed or mislabeled input, not data
            ++local.malformed_lines;
            continue;
        }
        if (!obj.contains("publisher") || !obj["publisher"].is_string() ||
            !obj.contains("request") || !obj["request"].is_string()) {
            ++local.malformed_lines;
            continue;
        }

        CrawlRecord rec;
        rec.snapshot_id = snapshot_id;
        rec.publisher_host = clean_host(obj["publisher"].get<std::string>());
        ParsedUrl url;
        if (rec.publisher_host.empty() || !parse_url(obj["request"].get<std::string>(), url)) {
            ++local.malformed_lines;
            continue;
        }
        rec.request_host = url.host;
        rec.request_path = url.path;
        rec.scheme = url.scheme;
        if (obj.contains("kind") && obj["kind"].is_string())
            rec.resource_kind = parse_kind(obj["kind"].get<std::string>());
        records.push_back(std::move(rec));
    }

    if (local.total_lines > 0 && local.malformed_lines * 2 > local.total_lines)
        throw ParseError("more than 50% malformed lines (" +
                         std::to_string(local.malformed_lines) + "/" +
                         std::to_string(local.total_lines) + "): wrong file format?");
    if (stats) *stats = local;
    return records;
}

Snapshot load_snapshot(const std::filesystem::path& log, const std::string& id,
                       const std::string& date_label, const std::string& tracker_list_version,
                       ParseStats* stats) {
    std::ifstream in(log);
    if (!in) throw ParseError("cannot open crawl log: " + log.string());
    Snapshot snap;
    snap.id = id;
    snap.date_label = date_label;
    snap.tracker_list_version = tracker_list_version;
    snap.records = parse_crawl_log(in, id, stats);
    return snap;
}

void write_canonical_log(std::ostream& out, const std::vector<CrawlRecord>& records) {
    for (const auto& r : records) {
        nlohmann::ordered_json obj;
        obj["snapshot"] = r.snapshot_id;
        obj["publisher"] = r.publisher_host;
        obj["request"] = std::string(to_string(r.scheme)) + "://" + r.request_host + r.request_path;
        obj["kind"] = to_string(r.resource_kind);
        out << obj.dump() << '\n';
    }
}

namespace {

void add_tracker_domain(TrackerList& list, const std::string& raw, const SuffixRules* rules,
                        const std::string& org) {
    std::string domain = ascii_lower(raw);
    if (domain.empty()) return;
    if (rules) {
        try {
            domain = rules->etld1(domain);
        } catch (const ParseError&) {
            return;  // unregistrable entry
        }
    }
    list.domains.insert(domain);
    if (!org.empty()) list.organizations.emplace(domain, org);
}

void flatten_disconnect(TrackerList& list, const json& doc, const SuffixRules* rules) {
    if (!doc.contains("categories") || !doc["categories"].is_object())
        throw ParseError("Disconnect list: missing categories object");
    for (const auto& [category, entries] : doc["categories"].items()) {
        (void)category;
        if (!entries.is_array()) continue;
        for (const auto& entry : entries) {
            if (!entry.is_object()) continue;
            for (const auto& [org, sites] : entry.items()) {
                if (!sites.is_object()) continue;
                for (const auto& [url, domains] : sites.items()) {
                    (void)url;
                    if (!domains.is_array()) continue;  // skips "performance": "true" etc.
                    for (const auto& d : domains)
                        if (d.is_string()) add_tracker_domain(list, d.get<std::string>(), rules, org);
                }
            }
        }
    }
}

}  // namespace

TrackerList load_tracker_list(const std::filesystem::path& path, const SuffixRules* rules,
                              std::string version) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open tracker list: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    std::string content = buf.str();

    TrackerList list;
    list.version = std::move(version);

    auto first = content.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && content[first] == '{') {
        json doc = json::parse(content, nullptr, false);
        if (doc.is_discarded()) throw ParseError("invalid Disconnect JSON: " + path.string());
        flatten_disconnect(list, doc, rules);
    } else {
        std::istringstream lines(content);
        std::string line;
        while (std::getline(lines, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto b = line.find_first_not_of(" \t");
            if (b == std::string::npos) continue;
            auto e = line.find_last_not_of(" \t");
            add_tracker_domain(list, line.substr(b, e - b + 1), rules, {});
        }
    }
    return list;
}

RequestClass classify_request(const CrawlRecord& rec, const TrackerList& trackers,
                              const SuffixRules& rules, bool* anomalous) {
    if (anomalous) *anomalous = false;
    std::string pub, req;
    try {
        pub = rules.etld1(rec.publisher_host);
        req = rules.etld1(rec.request_host);
    } catch (const ParseError&) {
        if (anomalous) *anomalous = true;
        return RequestClass::ThirdPartyOther;
    }
    if (req == pub) return RequestClass::FirstParty;
    if (trackers.contains(req)) return RequestClass::ThirdPartyTracker;
    return RequestClass::ThirdPartyOther;
}

std::string publisher_key(const std::string& publisher_host, const SuffixRules& rules) {
    try {
        return rules.etld1(publisher_host);
    } catch (const ParseError&) {
        return ascii_lower(publisher_host);
    }
}

FilterResult filter_publishers(const Snapshot& snap, const TrackerList& trackers,
                               const SuffixRules& rules) {
    FilterResult res;
    std::map<std::string, bool> has_tracker;  // publisher key -> embeds a tracker
    std::vector<std::string> keys(snap.records.size());
    for (std::size_t i = 0; i < snap.records.size(); ++i) {
        const auto& rec = snap.records[i];
        keys[i] = publisher_key(rec.publisher_host, rules);
        bool anomalous = false;
        RequestClass cls = classify_request(rec, trackers, rules, &anomalous);
        if (anomalous) ++res.anomalous_records;
        bool& flag = has_tracker[keys[i]];
        flag = flag || cls == RequestClass::ThirdPartyTracker;
    }

    res.snapshot.id = snap.id;
    res.snapshot.date_label = snap.date_label;
    res.snapshot.tracker_list_version = snap.tracker_list_version;
    for (std::size_t i = 0; i < snap.records.size(); ++i)
        if (has_tracker[keys[i]]) res.snapshot.records.push_back(snap.records[i]);

    for (const auto& [key, flag] : has_tracker)
        (flag ? res.publishers_kept : res.publishers_dropped) += 1;
    return res;
}

}  // namespace trackgraph
