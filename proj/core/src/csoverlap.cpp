#include "trackgraph/csoverlap.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "trackgraph/errors.hpp"

namespace trackgraph {

namespace {

std::string ascii_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string normalize_domain(const std::string& raw, const SuffixRules* rules) {
    std::string d = ascii_lower(raw);
    if (rules) {
        try {
            d = rules->etld1(d);
        } catch (const ParseError&) {
            // keep the raw lowercase form; it simply won't match eTLD+1 nodes
        }
    }
    return d;
}

std::set<EdgePair> edge_set(const Graph& g) {
    std::set<EdgePair> out;
    g.for_each_edge([&](NodeId a, NodeId b, double) {
        out.emplace(g.node(a).name, g.node(b).name);  // node order is lexicographic
    });
    return out;
}

}  // namespace

CsGraph load_cs(const std::filesystem::path& path, const SuffixRules* rules,
                bool assume_unit_weights) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open CS file: " + path.string());

    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty CS file: " + path.string());
    auto cols = split_csv(ascii_lower(header));
    bool has_weight;
    if (cols.size() == 3 && cols[0] == "domain_a" && cols[1] == "domain_b" && cols[2] == "weight") {
        has_weight = true;
    } else if (cols.size() == 2 && cols[0] == "domain_a" && cols[1] == "domain_b") {
        has_weight = false;
    } else {
        throw ParseError("CS file header must be domain_a,domain_b[,weight]: " + path.string());
    }

    CsGraph cs;
    cs.weighted = has_weight || assume_unit_weights;

    std::map<EdgePair, double> merged;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != (has_weight ? 3u : 2u) || fields[0].empty() || fields[1].empty())
            throw ParseError("CS file " + path.string() + " line " + std::to_string(lineno) +
                             ": malformed row");
        double w = 1.0;
        if (has_weight) {
            try {
                std::size_t used = 0;
                w = std::stod(fields[2], &used);
                if (used != fields[2].size()) throw std::invalid_argument("trailing chars");
            } catch (const std::exception&) {
                throw ParseError("CS file " + path.string() + " line " + std::to_string(lineno) +
                                 ": non-numeric weight '" + fields[2] + "'");
            }
            if (!(w > 0.0))
                throw ParseError("CS file " + path.string() + " line " + std::to_string(lineno) +
                                 ": weight must be positive");
        }
        std::string a = normalize_domain(fields[0], rules);
        std::string b = normalize_domain(fields[1], rules);
        if (a == b) {
            ++cs.self_loops_dropped;
            continue;
        }
        if (a > b) std::swap(a, b);
        auto [it, inserted] = merged.emplace(EdgePair{a, b}, w);
        if (!inserted) {
            it->second += w;
            ++cs.duplicates_merged;
        }
    }
    if (merged.empty()) throw ParseError("CS file has no edges: " + path.string());

    Graph::Builder b;
    for (const auto& [edge, w] : merged)
        b.add_edge(edge.first, NodeRole::Tracker, edge.second, NodeRole::Tracker,
                   cs.weighted ? w : 1.0);
    cs.graph = b.build();
    return cs;
}

namespace {

Graph induce(const Graph& g, const std::set<std::string>& names) {
    Graph::Builder b;
    for (const auto& n : g.nodes())
        if (names.count(n.name)) b.add_node(n.name, n.role);
    g.for_each_edge([&](NodeId i, NodeId j, double w) {
        if (names.count(g.node(i).name) && names.count(g.node(j).name))
            b.add_edge(g.node(i).name, g.node(i).role, g.node(j).name, g.node(j).role, w);
    });
    return b.build();
}

}  // namespace

CommonRestriction restrict_common(const CsGraph& cs, const TtGraph& tt) {
    std::set<std::string> cs_names, common;
    for (const auto& n : cs.graph.nodes()) cs_names.insert(n.name);
    for (const auto& n : tt.graph.nodes())
        if (cs_names.count(n.name)) common.insert(n.name);
    if (common.empty()) throw GraphError("no common trackers between CS and TT graphs");

    CommonRestriction out;
    out.n_common = common.size();
    out.cs = cs;
    out.cs.graph = induce(cs.graph, common);
    out.tt = tt;
    out.tt.graph = induce(tt.graph, common);
    return out;
}

OverlapReport overlap(const CsGraph& cs, const TtGraph& tt) {
    {
        std::set<std::string> a, b;
        for (const auto& n : cs.graph.nodes()) a.insert(n.name);
        for (const auto& n : tt.graph.nodes()) b.insert(n.name);
        if (a != b) throw GraphError("overlap requires graphs on the same node set");
    }

    auto e_cs = edge_set(cs.graph);
    auto e_tt = edge_set(tt.graph);

    OverlapReport rep;
    rep.n_common = cs.graph.node_count();
    rep.e_cs = e_cs.size();
    rep.e_tt = e_tt.size();
    std::set_intersection(e_cs.begin(), e_cs.end(), e_tt.begin(), e_tt.end(),
                          std::back_inserter(rep.common_edges));
    std::set_difference(e_cs.begin(), e_cs.end(), e_tt.begin(), e_tt.end(),
                        std::back_inserter(rep.cs_only));
    std::set_difference(e_tt.begin(), e_tt.end(), e_cs.begin(), e_cs.end(),
                        std::back_inserter(rep.tt_only));
    rep.e_common = rep.common_edges.size();

    rep.percentages_defined = rep.e_cs > 0 && rep.e_tt > 0;
    if (rep.percentages_defined) {
        rep.o_common = 100.0 * static_cast<double>(rep.e_common) / static_cast<double>(rep.e_cs);
        // complement by definition, so the partition of E_CS is exact
        rep.o_neg_tt = 100.0 - rep.o_common;
        rep.o_neg_cs = 100.0 * static_cast<double>(rep.e_tt - rep.e_common) /
                       static_cast<double>(rep.e_tt);
    }
    if (cs.weighted && rep.e_cs > 0) {
        rep.has_weight_coverage = true;
        rep.weight_coverage = weight_coverage(cs, rep.common_edges);
    }
    return rep;
}

double weight_coverage(const CsGraph& cs, const std::vector<EdgePair>& edges) {
    if (!cs.weighted) throw GraphError("weight coverage requires a weighted CS graph");
    if (cs.graph.edge_count() == 0) throw GraphError("weight coverage of edgeless CS graph");

    std::set<EdgePair> wanted(edges.begin(), edges.end());
    double total = 0.0, covered = 0.0;
    cs.graph.for_each_edge([&](NodeId a, NodeId b, double w) {
        total += w;
        if (wanted.count({cs.graph.node(a).name, cs.graph.node(b).name})) covered += w;
    });
    return covered / total;
}

double top_weight_share(const CsGraph& cs, const std::vector<EdgePair>& common, double q) {
    if (!cs.weighted) throw GraphError("top weight share requires a weighted CS graph");
    if (!(q > 0.0 && q < 100.0)) throw GraphError("percentile q must be in (0, 100)");
    if (cs.graph.edge_count() == 0) throw GraphError("top weight share of edgeless CS graph");
    if (common.empty()) return 0.0;

    struct Row {
        double w;
        EdgePair e;
    };
    std::vector<Row> rows;
    cs.graph.for_each_edge([&](NodeId a, NodeId b, double w) {
        rows.push_back({w, {cs.graph.node(a).name, cs.graph.node(b).name}});
    });
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        if (x.w != y.w) return x.w > y.w;
        return x.e < y.e;
    });
    auto top_n = static_cast<std::size_t>(
        std::ceil(q / 100.0 * static_cast<double>(rows.size())));
    std::set<EdgePair> top;
    for (std::size_t i = 0; i < top_n && i < rows.size(); ++i) top.insert(rows[i].e);

    std::size_t hits = 0;
    for (const auto& e : common)
        if (top.count(e)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(common.size());
}

}  // namespace trackgraph
