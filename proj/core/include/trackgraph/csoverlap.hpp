#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "trackgraph/graph.hpp"
#include "trackgraph/suffix.hpp"
#include "trackgraph/ttgraph.hpp"

namespace trackgraph {

// Ground-truth cookie-synchronization graph over tracker nodes. Weights,
// when present, carry normalized sync frequencies.
struct CsGraph {
    Graph graph;
    bool weighted = false;
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_merged = 0;
};

// CSV with header `domain_a,domain_b,weight` (weight column optional).
// Domains are normalized to eTLD+1 when rules are given; duplicate pairs
// merge by weight sum; self-loops are dropped and counted. An unweighted
// file becomes weighted (w=1 per row) only when assume_unit_weights is set.
// Empty files and non-numeric weights are fatal.
CsGraph load_cs(const std::filesystem::path& path, const SuffixRules* rules = nullptr,
                bool assume_unit_weights = false);

using EdgePair = std::pair<std::string, std::string>;  // names, lexicographic order

// Overlap statistics plus the audit edge sets. Percentages are defined over
// the common-node-induced graphs: o_common and o_neg_tt partition |E_CS|
// (o_neg_tt is the exact complement of o_common), o_neg_cs is over |E_TT|.
struct OverlapReport {
    std::size_t n_common = 0;
    std::size_t e_cs = 0;
    std::size_t e_tt = 0;
    std::size_t e_common = 0;
    bool percentages_defined = false;  // false when either edge set is empty
    double o_common = 0.0;
    double o_neg_cs = 0.0;
    double o_neg_tt = 0.0;
    bool has_weight_coverage = false;
    double weight_coverage = 0.0;
    std::vector<EdgePair> common_edges;  // E_CS and E_TT
    std::vector<EdgePair> cs_only;       // E_CS minus E_TT
    std::vector<EdgePair> tt_only;       // E_TT minus E_CS
};

struct CommonRestriction {
    CsGraph cs;
    TtGraph tt;
    std::size_t n_common = 0;
};

// Induce both graphs on their common tracker set. Errors when disjoint.
CommonRestriction restrict_common(const CsGraph& cs, const TtGraph& tt);

// Overlap statistics for graphs on the same node set (run restrict_common
// first). Fills weight_coverage when the CS graph is weighted.
OverlapReport overlap(const CsGraph& cs, const TtGraph& tt);

// Fraction of total CS edge-weight mass carried by the given edges.
double weight_coverage(const CsGraph& cs, const std::vector<EdgePair>& edges);

// Fraction of `common` edges that rank within the top q% heaviest CS edges
// (0 < q < 100; ties break by edge name).
double top_weight_share(const CsGraph& cs, const std::vector<EdgePair>& common, double q);

}  // namespace trackgraph
