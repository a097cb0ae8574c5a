#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "trackgraph/graph.hpp"

namespace trackgraph {

// Output number formats are pinned: fractions with 6 decimals, percentages
// with 2, so reruns and golden files compare byte-for-byte.
std::string fmt_fraction(double v);
std::string fmt_pct(double v);
double round_to(double v, int digits);

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path);
    void row(std::initializer_list<std::string_view> fields);
    void row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
};

// Graph exchange format: an edge-list CSV (node_a,node_b,weight) and an
// optional node-role CSV (node,role). PT edge lists put the tracker in
// node_a and the publisher in node_b.
void write_graph_csv(const Graph& g, const std::filesystem::path& edges_path);
void write_roles_csv(const Graph& g, const std::filesystem::path& roles_path);

// Reads the exchange format back. Without a roles file nodes are untyped,
// unless pt_convention is set (node_a tracker, node_b publisher).
Graph read_graph_csv(const std::filesystem::path& edges_path,
                     const std::filesystem::path& roles_path = {},
                     bool pt_convention = false);

}  // namespace trackgraph
