#include "trackgraph/io.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "trackgraph/errors.hpp"

namespace trackgraph {

namespace {

std::string fmt_fixed(double v, int digits) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

}  // namespace

std::string fmt_fraction(double v) { return fmt_fixed(v, 6); }
std::string fmt_pct(double v) { return fmt_fixed(v, 2); }

double round_to(double v, int digits) {
    const double scale = std::pow(10.0, digits);
    double r = std::round(v * scale) / scale;
    if (r == 0.0) r = 0.0;
    return r;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw ParseError("cannot open for writing: " + path.string());
}

void CsvWriter::row(std::initializer_list<std::string_view> fields) {
    bool first = true;
    for (auto f : fields) {
        if (!first) out_ << ',';
        out_ << f;
        first = false;
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    bool first = true;
    for (const auto& f : fields) {
        if (!first) out_ << ',';
        out_ << f;
        first = false;
    }
    out_ << '\n';
}

void write_graph_csv(const Graph& g, const std::filesystem::path& edges_path) {
    CsvWriter w(edges_path);
    w.row({"node_a", "node_b", "weight"});
    // PT convention: tracker first
    g.for_each_edge([&](NodeId i, NodeId j, double wt) {
        NodeId a = i, b = j;
        if (g.node(a).role == NodeRole::Publisher && g.node(b).role == NodeRole::Tracker)
            std::swap(a, b);
        w.row({g.node(a).name, g.node(b).name, fmt_fraction(wt)});
    });
}

void write_roles_csv(const Graph& g, const std::filesystem::path& roles_path) {
    CsvWriter w(roles_path);
    w.row({"node", "role"});
    for (const auto& n : g.nodes()) w.row({n.name, to_string(n.role)});
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        out.push_back(field);
    }
    return out;
}

}  // namespace

Graph read_graph_csv(const std::filesystem::path& edges_path,
                     const std::filesystem::path& roles_path, bool pt_convention) {
    std::map<std::string, NodeRole> roles;
    if (!roles_path.empty()) {
        std::ifstream in(roles_path);
        if (!in) throw ParseError("cannot open roles CSV: " + roles_path.string());
        std::string line;
        if (!std::getline(in, line)) throw ParseError("empty roles CSV: " + roles_path.string());
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto f = split_csv_line(line);
            if (f.size() != 2) throw ParseError("roles CSV: malformed row: " + line);
            roles[f[0]] = node_role_from_string(f[1]);
        }
    }

    std::ifstream in(edges_path);
    if (!in) throw ParseError("cannot open edge CSV: " + edges_path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty edge CSV: " + edges_path.string());
    auto header = split_csv_line(line);
    if (header.size() != 3 || header[0] != "node_a" || header[1] != "node_b" ||
        header[2] != "weight")
        throw ParseError("edge CSV header must be node_a,node_b,weight: " + edges_path.string());

    auto role_of = [&](const std::string& name, bool is_a) {
        if (auto it = roles.find(name); it != roles.end()) return it->second;
        if (pt_convention) return is_a ? NodeRole::Tracker : NodeRole::Publisher;
        return NodeRole::Untyped;
    };

    Graph::Builder b;
    for (const auto& [name, role] : roles) b.add_node(name, role);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv_line(line);
        if (f.size() != 3 || f[0].empty() || f[1].empty())
            throw ParseError("edge CSV " + edges_path.string() + " line " +
                             std::to_string(lineno) + ": malformed row");
        double w = 0.0;
        try {
            w = std::stod(f[2]);
        } catch (const std::exception&) {
            throw ParseError("edge CSV " + edges_path.string() + " line " +
                             std::to_string(lineno) + ": non-numeric weight");
        }
        try {
            b.add_edge(f[0], role_of(f[0], true), f[1], role_of(f[1], false), w);
        } catch (const GraphError& e) {  // self-loop or bad weight is an input defect here
            throw ParseError("edge CSV " + edges_path.string() + " line " +
                             std::to_string(lineno) + ": " + e.what());
        }
    }
    try {
        return b.build();
    } catch (const GraphError& e) {  // duplicate rows surface at build time
        throw ParseError("edge CSV " + edges_path.string() + ": " + e.what());
    }
}

}  // namespace trackgraph
