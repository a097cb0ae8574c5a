#include "trackgraph/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "trackgraph/errors.hpp"

namespace trackgraph {

using json = nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw ConfigError("config is not a JSON object: " + path.string());

    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    RunConfig cfg;
    try {
        if (!doc.contains("suffix_rules"))
            throw ConfigError("config missing required key 'suffix_rules'");
        cfg.suffix_rules = resolve(base, doc["suffix_rules"].get<std::string>());
        if (doc.contains("organizations"))
            cfg.organizations = resolve(base, doc["organizations"].get<std::string>());
        if (doc.contains("output_dir"))
            cfg.output_dir = doc["output_dir"].get<std::string>();
        if (doc.contains("min_cooccurrence"))
            cfg.min_cooccurrence = doc["min_cooccurrence"].get<std::uint32_t>();
        if (doc.contains("top_k")) cfg.top_k = doc["top_k"].get<std::size_t>();
        if (doc.contains("align")) cfg.align = doc["align"].get<bool>();
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("metrics")) {
            cfg.metrics.clear();
            for (const auto& m : doc["metrics"]) cfg.metrics.push_back(m.get<std::string>());
        }

        if (!doc.contains("snapshots") || !doc["snapshots"].is_array() ||
            doc["snapshots"].empty())
            throw ConfigError("config needs a non-empty 'snapshots' array");
        for (const auto& s : doc["snapshots"]) {
            SnapshotSpec spec;
            spec.id = s.at("id").get<std::string>();
            spec.date_label = s.contains("date_label") ? s["date_label"].get<std::string>() : spec.id;
            spec.log = resolve(base, s.at("log").get<std::string>());
            spec.tracker_list = resolve(base, s.at("tracker_list").get<std::string>());
            spec.tracker_list_version = s.contains("tracker_list_version")
                                            ? s["tracker_list_version"].get<std::string>()
                                            : std::string{};
            cfg.snapshots.push_back(std::move(spec));
        }
        if (doc.contains("cs_graphs")) {
            for (const auto& c : doc["cs_graphs"]) {
                CsSpec spec;
                spec.name = c.at("name").get<std::string>();
                spec.path = resolve(base, c.at("path").get<std::string>());
                if (c.contains("assume_unit_weights"))
                    spec.assume_unit_weights = c["assume_unit_weights"].get<bool>();
                cfg.cs_graphs.push_back(std::move(spec));
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("invalid config " + path.string() + ": " + e.what());
    }

    std::set<std::string> ids;
    for (const auto& s : cfg.snapshots)
        if (!ids.insert(s.id).second) throw ConfigError("duplicate snapshot id: " + s.id);
    for (const auto& m : cfg.metrics)
        if (m != "degree" && m != "betweenness" && m != "coreness")
            throw ConfigError("unknown metric in config: " + m);
    if (cfg.top_k < 1) throw ConfigError("top_k must be >= 1");
    if (cfg.min_cooccurrence < 1) throw ConfigError("min_cooccurrence must be >= 1");
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    auto require = [](const std::filesystem::path& p, const char* what) {
        if (!std::filesystem::exists(p))
            throw ConfigError(std::string(what) + " not found: " + p.string());
    };
    require(cfg.suffix_rules, "suffix rules file");
    if (!cfg.organizations.empty()) require(cfg.organizations, "organizations file");
    for (const auto& s : cfg.snapshots) {
        require(s.log, "crawl log");
        require(s.tracker_list, "tracker list");
    }
    for (const auto& c : cfg.cs_graphs) require(c.path, "CS file");
}

std::string config_hash(const RunConfig& cfg) {
    // plain nlohmann::json orders keys, giving a canonical dump; output_dir
    // is excluded because it does not affect results
    json doc;
    doc["suffix_rules"] = cfg.suffix_rules.string();
    doc["organizations"] = cfg.organizations.string();
    doc["min_cooccurrence"] = cfg.min_cooccurrence;
    doc["top_k"] = cfg.top_k;
    doc["align"] = cfg.align;
    doc["seed"] = cfg.seed;
    doc["metrics"] = cfg.metrics;
    doc["snapshots"] = json::array();
    for (const auto& s : cfg.snapshots)
        doc["snapshots"].push_back({{"id", s.id},
                                    {"date_label", s.date_label},
                                    {"log", s.log.string()},
                                    {"tracker_list", s.tracker_list.string()},
                                    {"tracker_list_version", s.tracker_list_version}});
    doc["cs_graphs"] = json::array();
    for (const auto& c : cfg.cs_graphs)
        doc["cs_graphs"].push_back({{"name", c.name},
                                    {"path", c.path.string()},
                                    {"assume_unit_weights", c.assume_unit_weights}});

    const std::string bytes = doc.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace trackgraph
