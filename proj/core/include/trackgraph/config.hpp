#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace trackgraph {

struct SnapshotSpec {
    std::string id;
    std::string date_label;
    std::string tracker_list_version;
    std::filesystem::path log;
    std::filesystem::path tracker_list;
};

struct CsSpec {
    std::string name;
    std::filesystem::path path;
    bool assume_unit_weights = false;
};

// Declarative run configuration. Snapshots are listed in chronological
// order; relative input paths resolve against the config file's directory.
struct RunConfig {
    std::filesystem::path suffix_rules;
    std::filesystem::path organizations;  // optional sidecar domain,organization CSV
    std::filesystem::path output_dir = "out";
    std::vector<SnapshotSpec> snapshots;
    std::vector<CsSpec> cs_graphs;
    std::uint32_t min_cooccurrence = 2;
    std::size_t top_k = 25;
    bool align = true;  // restrict to common publishers when >= 2 snapshots
    std::uint64_t seed = 0;
    std::vector<std::string> metrics = {"degree", "betweenness", "coreness"};
};

RunConfig load_config(const std::filesystem::path& path);

// Checks referenced input paths exist; throws ConfigError otherwise.
void validate_config(const RunConfig& cfg);

// FNV-1a over a canonical serialization; stable across runs and platforms.
std::string config_hash(const RunConfig& cfg);

}  // namespace trackgraph
