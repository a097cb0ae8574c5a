#include "trackgraph/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "trackgraph/csoverlap.hpp"
#include "trackgraph/errors.hpp"
#include "trackgraph/graph.hpp"
#include "trackgraph/ingest.hpp"
#include "trackgraph/io.hpp"
#include "trackgraph/longitudinal.hpp"
#include "trackgraph/netstats.hpp"
#include "trackgraph/ptgraph.hpp"
#include "trackgraph/ttgraph.hpp"
#include "trackgraph/version.hpp"

namespace trackgraph {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

const char* to_string(Subcommand c) {
    switch (c) {
        case Subcommand::Ingest: return "ingest";
        case Subcommand::Netstats: return "netstats";
        case Subcommand::Pt: return "pt";
        case Subcommand::Tt: return "tt";
        case Subcommand::Overlap: return "overlap";
        case Subcommand::Evolve: return "evolve";
        default: return "all";
    }
}

namespace {

// Tracks emitted artifacts and writes the run manifest; no timestamps so
// identical runs stay byte-identical.
class Emitter {
public:
    Emitter(fs::path root, Subcommand cmd, const RunConfig& cfg)
        : root_(std::move(root)), cmd_(cmd), cfg_(cfg) {
        fs::create_directories(root_);
    }

    fs::path file(const std::string& rel) {
        fs::path p = root_ / rel;
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        files_.push_back(rel);
        return p;
    }

    void write_json(const std::string& rel, const ordered_json& doc) {
        std::ofstream out(file(rel), std::ios::binary);
        out << doc.dump(2) << '\n';
    }

    void write_manifest(const std::string& status, const std::string& error = {}) {
        ordered_json doc;
        doc["tool"] = "trackgraph";
        doc["version"] = kVersion;
        doc["subcommand"] = to_string(cmd_);
        doc["status"] = status;
        doc["config_hash"] = config_hash(cfg_);
        ordered_json inputs;
        inputs["suffix_rules"] = cfg_.suffix_rules.string();
        if (!cfg_.organizations.empty()) inputs["organizations"] = cfg_.organizations.string();
        inputs["snapshots"] = ordered_json::array();
        for (const auto& s : cfg_.snapshots)
            inputs["snapshots"].push_back({{"id", s.id},
                                           {"date_label", s.date_label},
                                           {"log", s.log.string()},
                                           {"tracker_list", s.tracker_list.string()},
                                           {"tracker_list_version", s.tracker_list_version}});
        inputs["cs_graphs"] = ordered_json::array();
        for (const auto& c : cfg_.cs_graphs)
            inputs["cs_graphs"].push_back({{"name", c.name},
                                           {"path", c.path.string()},
                                           {"assume_unit_weights", c.assume_unit_weights}});
        doc["inputs"] = inputs;
        std::vector<std::string> sorted = files_;
        std::sort(sorted.begin(), sorted.end());
        doc["outputs"] = sorted;
        if (!error.empty()) doc["error"] = error;

        std::ofstream out(root_ / "run_manifest.json", std::ios::binary);
        out << doc.dump(2) << '\n';
    }

private:
    fs::path root_;
    Subcommand cmd_;
    const RunConfig& cfg_;
    std::vector<std::string> files_;
};

struct SnapshotData {
    SnapshotSpec spec;
    TrackerList trackers;
    Snapshot snapshot;  // filtered (and aligned, when enabled)
    ParseStats parse_stats;
    std::size_t raw_records = 0;
    std::size_t records_after_filter = 0;
    std::size_t publishers_kept = 0;
    std::size_t publishers_dropped = 0;
    std::size_t anomalous_records = 0;
};

ordered_json summary_json(const GraphSummary& s) {
    ordered_json doc;
    doc["n_nodes"] = s.n_nodes;
    doc["n_edges"] = s.n_edges;
    doc["norm_avg_weight"] = round_to(s.norm_avg_weight, 6);
    doc["avg_clustering"] = round_to(s.avg_clustering, 6);
    doc["density"] = round_to(s.density, 6);
    doc["diameter"] = s.diameter;
    return doc;
}

bool metric_enabled(const RunConfig& cfg, const char* name) {
    return std::find(cfg.metrics.begin(), cfg.metrics.end(), name) != cfg.metrics.end();
}

void require_nonempty(const SnapshotData& sd) {
    if (sd.snapshot.records.empty())
        throw GraphError("no publishers with trackers in snapshot: " + sd.spec.id);
}

std::unordered_map<std::string, std::string> load_org_map(const fs::path& path) {
    std::unordered_map<std::string, std::string> orgs;
    if (path.empty()) return orgs;
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open organizations file: " + path.string());
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("organizations file: malformed row: " + line);
        std::string domain = line.substr(0, comma);
        std::string org = line.substr(comma + 1);
        if (first && domain == "domain") {  // optional header
            first = false;
            continue;
        }
        first = false;
        orgs[domain] = org;
    }
    return orgs;
}

// ---- per-snapshot stages ----

void stage_ingest(Emitter& em, const SnapshotData& sd, const SuffixRules& rules, bool aligned) {
    const std::string dir = sd.spec.id + "/";
    {
        std::ofstream out(em.file(dir + "canonical.jsonl"), std::ios::binary);
        write_canonical_log(out, sd.snapshot.records);
    }
    std::size_t n_first = 0, n_tracker = 0, n_other = 0;
    for (const auto& rec : sd.snapshot.records) {
        switch (classify_request(rec, sd.trackers, rules)) {
            case RequestClass::FirstParty: ++n_first; break;
            case RequestClass::ThirdPartyTracker: ++n_tracker; break;
            default: ++n_other; break;
        }
    }
    ordered_json doc;
    doc["snapshot"] = sd.spec.id;
    doc["date_label"] = sd.spec.date_label;
    doc["tracker_list_version"] = sd.spec.tracker_list_version;
    doc["lines_total"] = sd.parse_stats.total_lines;
    doc["lines_malformed"] = sd.parse_stats.malformed_lines;
    doc["records_parsed"] = sd.raw_records;
    doc["publishers_kept"] = sd.publishers_kept;
    doc["publishers_dropped"] = sd.publishers_dropped;
    doc["anomalous_records"] = sd.anomalous_records;
    doc["records_after_filter"] = sd.records_after_filter;
    doc["aligned"] = aligned;
    doc["records_analyzed"] = sd.snapshot.records.size();
    doc["class_counts"] = {{"first_party", n_first},
                           {"third_party_tracker", n_tracker},
                           {"third_party_other", n_other}};
    em.write_json(dir + "ingest_report.json", doc);
}

void write_cdf(Emitter& em, const std::string& rel, const std::vector<double>& values) {
    if (values.empty()) return;
    CsvWriter w(em.file(rel));
    w.row({"value", "fraction"});
    for (const auto& [v, f] : cdf(values).points) w.row({fmt_fraction(v), fmt_fraction(f)});
}

void stage_netstats(Emitter& em, const SnapshotData& sd, const SuffixRules& rules) {
    require_nonempty(sd);
    const std::string dir = sd.spec.id + "/";
    auto activity = publisher_activity(sd.snapshot, sd.trackers, rules);

    std::vector<double> unique, total, avg, providers;
    {
        CsvWriter wu(em.file(dir + "netstats_unique_trackers.csv"));
        CsvWriter wt(em.file(dir + "netstats_total_requests.csv"));
        CsvWriter wa(em.file(dir + "netstats_avg_requests.csv"));
        CsvWriter wl(em.file(dir + "netstats_library_providers.csv"));
        wu.row({"publisher", "value"});
        wt.row({"publisher", "value"});
        wa.row({"publisher", "value"});
        wl.row({"publisher", "value"});
        for (const auto& [pub, a] : activity) {
            wu.row({pub, std::to_string(a.unique_trackers)});
            wt.row({pub, std::to_string(a.total_tracker_requests)});
            wa.row({pub, fmt_fraction(a.avg_requests_per_tracker)});
            wl.row({pub, std::to_string(a.library_providers)});
            unique.push_back(static_cast<double>(a.unique_trackers));
            total.push_back(static_cast<double>(a.total_tracker_requests));
            avg.push_back(a.avg_requests_per_tracker);
            providers.push_back(static_cast<double>(a.library_providers));
        }
    }
    write_cdf(em, dir + "netstats_cdf_unique_trackers.csv", unique);
    write_cdf(em, dir + "netstats_cdf_total_requests.csv", total);
    write_cdf(em, dir + "netstats_cdf_avg_requests.csv", avg);
    write_cdf(em, dir + "netstats_cdf_library_providers.csv", providers);

    auto https = https_adoption(sd.snapshot, rules);
    ordered_json doc;
    doc["snapshot"] = sd.spec.id;
    doc["n_publishers"] = activity.size();
    doc["https_adoption"] = round_to(https.fraction, 6);
    doc["https_publishers"] = https.https_publishers;
    doc["publishers_without_document"] = https.publishers_flagged;
    doc["medians"] = {
        {"unique_trackers", percentile_nearest_rank(unique, 50.0)},
        {"total_tracker_requests", percentile_nearest_rank(total, 50.0)},
        {"avg_requests_per_tracker", round_to(percentile_nearest_rank(avg, 50.0), 6)},
        {"library_providers", percentile_nearest_rank(providers, 50.0)}};
    doc["p90"] = {
        {"unique_trackers", percentile_nearest_rank(unique, 90.0)},
        {"total_tracker_requests", percentile_nearest_rank(total, 90.0)},
        {"avg_requests_per_tracker", round_to(percentile_nearest_rank(avg, 90.0), 6)},
        {"library_providers", percentile_nearest_rank(providers, 90.0)}};
    em.write_json(dir + "netstats_summary.json", doc);
}

void write_ranking_csv(Emitter& em, const std::string& rel, const TrackerRanking& ranking) {
    CsvWriter w(em.file(rel));
    w.row({"rank", "tracker", "metric_value", "coverage_pct", "organization"});
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        const auto& e = ranking.entries[i];
        w.row({std::to_string(i + 1), e.domain, fmt_fraction(e.value), fmt_pct(e.coverage_pct),
               e.organization});
    }
}

void write_role_metric_cdfs(Emitter& em, const std::string& dir, const RunConfig& cfg,
                            const char* role_name, const RoleMetrics& rm) {
    std::vector<double> dc, bc, cp;
    for (const auto& m : rm.metrics) {
        dc.push_back(m.degree_centrality);
        bc.push_back(m.betweenness);
        cp.push_back(m.coreness);
    }
    const std::string base = dir + "pt_cdf_";
    if (metric_enabled(cfg, "degree"))
        write_cdf(em, base + "degree_" + role_name + ".csv", dc);
    if (metric_enabled(cfg, "betweenness"))
        write_cdf(em, base + "betweenness_" + role_name + ".csv", bc);
    if (metric_enabled(cfg, "coreness"))
        write_cdf(em, base + "coreness_" + role_name + ".csv", cp);
}

ordered_json corr_json(const CorrPair& c) {
    ordered_json doc;
    doc["defined"] = c.defined;
    if (c.defined) {
        doc["r"] = round_to(c.r, 6);
        doc["p"] = round_to(c.p, 6);
        doc["significant"] = c.significant;
    }
    return doc;
}

PtGraph stage_pt(Emitter& em, const SnapshotData& sd, const SuffixRules& rules,
                 const RunConfig& cfg, const std::unordered_map<std::string, std::string>& orgs,
                 unsigned threads) {
    require_nonempty(sd);
    const std::string dir = sd.spec.id + "/";
    PtGraph pt = build_pt(sd.snapshot, sd.trackers, rules);
    if (pt.graph.empty()) throw GraphError("no publishers with trackers in snapshot: " + sd.spec.id);

    write_graph_csv(pt.graph, em.file(dir + "pt_edges.csv"));
    write_roles_csv(pt.graph, em.file(dir + "pt_roles.csv"));

    auto summary = pt_summary(pt, threads);
    {
        ordered_json doc;
        doc["snapshot"] = sd.spec.id;
        ordered_json s = summary_json(summary.summary);
        s["bipartite_clustering"] = round_to(summary.bipartite_clustering, 6);
        doc["lcc"] = s;
        doc["lcc_publishers"] = summary.n_publishers_lcc;
        doc["lcc_trackers"] = summary.n_trackers_lcc;
        doc["total_nodes"] = summary.n_nodes_total;
        doc["total_publishers"] = summary.n_publishers_total;
        doc["total_trackers"] = summary.n_trackers_total;
        doc["dropped_nodes"] = summary.dropped.size();
        em.write_json(dir + "pt_summary.json", doc);
    }
    {
        CsvWriter w(em.file(dir + "pt_dropped_nodes.csv"));
        w.row({"node", "role"});
        for (const auto& n : summary.dropped) w.row({n.name, to_string(n.role)});
    }

    auto metrics = pt_node_metrics(pt, threads);
    auto write_metrics = [&](const char* role_name, const RoleMetrics& rm) {
        CsvWriter w(em.file(dir + "pt_metrics_" + std::string(role_name) + ".csv"));
        w.row({"node", "degree", "betweenness", "coreness"});
        for (std::size_t i = 0; i < rm.names.size(); ++i)
            w.row({rm.names[i], fmt_fraction(rm.metrics[i].degree_centrality),
                   fmt_fraction(rm.metrics[i].betweenness), fmt_fraction(rm.metrics[i].coreness)});
    };
    write_metrics("publishers", metrics.publishers);
    write_metrics("trackers", metrics.trackers);
    write_role_metric_cdfs(em, dir, cfg, "publishers", metrics.publishers);
    write_role_metric_cdfs(em, dir, cfg, "trackers", metrics.trackers);

    {
        ordered_json doc;
        doc["snapshot"] = sd.spec.id;
        doc["significance_bound"] = kSignificanceBound;
        for (auto [role_name, rm] :
             {std::pair<const char*, const RoleMetrics*>{"publishers", &metrics.publishers},
              {"trackers", &metrics.trackers}}) {
            if (rm->metrics.size() < 3) {
                doc[role_name] = {{"note", "fewer than 3 nodes; correlations undefined"}};
                continue;
            }
            auto corr = metric_correlations(*rm);
            doc[role_name] = {{"dc_bc", corr_json(corr.dc_bc)},
                              {"dc_cp", corr_json(corr.dc_cp)},
                              {"bc_cp", corr_json(corr.bc_cp)}};
        }
        em.write_json(dir + "pt_correlations.json", doc);
    }

    if (metric_enabled(cfg, "degree"))
        write_ranking_csv(em, dir + "pt_ranking_degree.csv",
                          top_k(pt, RankMetric::Degree, cfg.top_k, orgs, threads));
    if (metric_enabled(cfg, "betweenness"))
        write_ranking_csv(em, dir + "pt_ranking_betweenness.csv",
                          top_k(pt, RankMetric::Betweenness, cfg.top_k, orgs, threads));
    return pt;
}

TtGraph stage_tt(Emitter& em, const std::string& dir, const std::string& label, const PtGraph& pt,
                 const RunConfig& cfg, unsigned threads) {
    TtGraph tt = build_tt(pt, cfg.min_cooccurrence);
    write_graph_csv(tt.graph, em.file(dir + "tt_edges.csv"));
    auto summary = tt_summary(tt, threads);
    ordered_json doc;
    doc["snapshot"] = label;
    doc["min_cooccurrence"] = tt.threshold;
    doc["lcc"] = summary_json(summary.summary);
    doc["total_nodes"] = summary.n_nodes_total;
    em.write_json(dir + "tt_summary.json", doc);
    return tt;
}

void stage_overlap(Emitter& em, const std::string& dir, const std::string& label,
                   const CsGraph& cs, const std::string& cs_name, const TtGraph& tt) {
    auto common = restrict_common(cs, tt);
    auto rep = overlap(common.cs, common.tt);

    ordered_json doc;
    doc["snapshot"] = label;
    doc["cs_source"] = cs_name;
    doc["n_common"] = rep.n_common;
    doc["e_cs"] = rep.e_cs;
    doc["e_tt"] = rep.e_tt;
    doc["e_common"] = rep.e_common;
    doc["percentages_defined"] = rep.percentages_defined;
    if (rep.percentages_defined) {
        doc["o_common"] = round_to(rep.o_common, 2);
        doc["o_neg_cs"] = round_to(rep.o_neg_cs, 2);
        doc["o_neg_tt"] = round_to(rep.o_neg_tt, 2);
    }
    if (rep.has_weight_coverage) {
        doc["weight_coverage"] = round_to(rep.weight_coverage, 6);
        doc["top5_weight_share"] = round_to(top_weight_share(common.cs, rep.common_edges, 5.0), 6);
    }
    doc["definitions"] = {
        {"o_common", "100 * |E_CS & E_TT| / |E_CS| over the common-node-induced graphs"},
        {"o_neg_tt", "100 - o_common (share of E_CS missed by TT)"},
        {"o_neg_cs", "100 * |E_TT \\ E_CS| / |E_TT|"},
        {"weight_coverage", "sum of CS weights on common edges / total CS weight"}};
    em.write_json(dir + "overlap_" + cs_name + ".json", doc);

    CsvWriter w(em.file(dir + "overlap_" + cs_name + "_edges.csv"));
    w.row({"domain_a", "domain_b", "set"});
    for (const auto& [a, b] : rep.common_edges) w.row({a, b, "common"});
    for (const auto& [a, b] : rep.cs_only) w.row({a, b, "cs_only"});
    for (const auto& [a, b] : rep.tt_only) w.row({a, b, "tt_only"});
}

void write_trend_csv(Emitter& em, const std::string& rel, const TrendSeries& t, int digits) {
    CsvWriter w(em.file(rel));
    w.row({"snapshot", "value"});
    for (const auto& [id, v] : t.values)
        w.row({id, digits == 0 ? std::to_string(static_cast<long long>(v)) : fmt_fraction(v)});
    w.row({"change_pct", t.change_defined ? fmt_pct(t.change_pct) : "-"});
}

void stage_evolve(Emitter& em, std::vector<SnapshotData>& data, const SuffixRules& rules,
                  const RunConfig& cfg, unsigned threads, bool already_aligned) {
    if (data.size() < 2) throw ConfigError("evolve requires at least 2 snapshots");
    for (auto& sd : data) require_nonempty(sd);

    // trends and stability are only meaningful over the common publisher
    // set, so evolve aligns even when the other stages were told not to
    if (!already_aligned) {
        std::vector<Snapshot> snaps;
        for (auto& sd : data) snaps.push_back(std::move(sd.snapshot));
        auto series = align(snaps, rules);
        for (std::size_t i = 0; i < data.size(); ++i)
            data[i].snapshot = std::move(series.snapshots[i]);
    }

    struct PerSnap {
        std::string id;
        std::map<std::string, PublisherActivity> activity;
        HttpsAdoption https;
        TrackerRanking ranking;
    };
    std::vector<PerSnap> per;
    std::vector<TrackerRanking> rankings;
    for (auto& sd : data) {
        PerSnap ps;
        ps.id = sd.spec.id;
        ps.activity = publisher_activity(sd.snapshot, sd.trackers, rules);
        ps.https = https_adoption(sd.snapshot, rules);
        PtGraph pt = build_pt(sd.snapshot, sd.trackers, rules);
        ps.ranking = top_k(pt, RankMetric::Degree, std::numeric_limits<std::size_t>::max(), {},
                           threads);
        rankings.push_back(ps.ranking);
        per.push_back(std::move(ps));
    }

    auto trend_of = [&](const std::function<double(const PerSnap&)>& f) {
        std::vector<std::pair<std::string, double>> values;
        for (const auto& ps : per) values.emplace_back(ps.id, f(ps));
        return trend_from_values(std::move(values));
    };
    auto metric_values = [](const PerSnap& ps, auto proj) {
        std::vector<double> v;
        for (const auto& [pub, a] : ps.activity) v.push_back(proj(a));
        return v;
    };
    auto unique_of = [](const PublisherActivity& a) { return static_cast<double>(a.unique_trackers); };
    auto total_of = [](const PublisherActivity& a) {
        return static_cast<double>(a.total_tracker_requests);
    };
    auto avg_of = [](const PublisherActivity& a) { return a.avg_requests_per_tracker; };

    auto t_med_unique = trend_of([&](const PerSnap& ps) {
        return percentile_nearest_rank(metric_values(ps, unique_of), 50.0);
    });
    auto t_p90_unique = trend_of([&](const PerSnap& ps) {
        return percentile_nearest_rank(metric_values(ps, unique_of), 90.0);
    });
    auto t_med_total = trend_of([&](const PerSnap& ps) {
        return percentile_nearest_rank(metric_values(ps, total_of), 50.0);
    });
    auto t_p90_total = trend_of([&](const PerSnap& ps) {
        return percentile_nearest_rank(metric_values(ps, total_of), 90.0);
    });
    auto t_med_avg = trend_of([&](const PerSnap& ps) {
        return percentile_nearest_rank(metric_values(ps, avg_of), 50.0);
    });
    auto t_https = trend_of([&](const PerSnap& ps) { return ps.https.fraction; });

    write_trend_csv(em, "trend_median_unique_trackers.csv", t_med_unique, 0);
    write_trend_csv(em, "trend_p90_unique_trackers.csv", t_p90_unique, 0);
    write_trend_csv(em, "trend_median_total_requests.csv", t_med_total, 0);
    write_trend_csv(em, "trend_p90_total_requests.csv", t_p90_total, 0);
    write_trend_csv(em, "trend_median_avg_requests.csv", t_med_avg, 6);
    write_trend_csv(em, "trend_https_adoption.csv", t_https, 6);

    std::vector<std::string> ids;
    for (const auto& sd : data) ids.push_back(sd.spec.id);
    auto stability = topk_stability(rankings, ids, cfg.top_k);
    {
        CsvWriter w(em.file("stability_degree.csv"));
        std::vector<std::string> header = {"tracker", "class", "legend", "avg_coverage_pct"};
        for (const auto& id : ids) header.push_back("rank_" + id);
        w.row(header);
        for (const auto& e : stability.entries) {
            std::vector<std::string> row = {e.tracker, to_string(e.cls), legend_symbol(e.cls),
                                            fmt_pct(e.avg_coverage_pct)};
            for (auto r : e.ranks)
                row.push_back(r == kRankAbsent ? "-" : std::to_string(r));
            w.row(row);
        }
    }

    ordered_json doc;
    doc["snapshots"] = ids;
    doc["top_k"] = cfg.top_k;
    doc["changes_pct"] = {
        {"median_unique_trackers",
         t_med_unique.change_defined ? ordered_json(round_to(t_med_unique.change_pct, 2))
                                     : ordered_json(nullptr)},
        {"median_total_requests",
         t_med_total.change_defined ? ordered_json(round_to(t_med_total.change_pct, 2))
                                    : ordered_json(nullptr)},
        {"https_adoption", t_https.change_defined ? ordered_json(round_to(t_https.change_pct, 2))
                                                  : ordered_json(nullptr)}};
    std::size_t n_stable = 0, n_dropped = 0, n_climbed = 0, n_transient = 0;
    for (const auto& e : stability.entries) switch (e.cls) {
            case StabilityClass::Stable: ++n_stable; break;
            case StabilityClass::Dropped: ++n_dropped; break;
            case StabilityClass::Climbed: ++n_climbed; break;
            default: ++n_transient; break;
        }
    doc["stability_counts"] = {{"stable", n_stable},
                               {"dropped", n_dropped},
                               {"climbed", n_climbed},
                               {"transient", n_transient}};
    em.write_json("evolve_summary.json", doc);
}

void run_impl(Subcommand cmd, const RunConfig& cfg, const RunOptions& opts, Emitter& em) {
    const unsigned threads = opts.threads;

    // direct-file modes bypass snapshot ingestion
    if (cmd == Subcommand::Tt && !opts.pt_file.empty()) {
        Graph g = read_graph_csv(opts.pt_file, opts.pt_roles, /*pt_convention=*/true);
        stage_tt(em, "", opts.pt_file.stem().string(), PtGraph{std::move(g)}, cfg, threads);
        return;
    }
    if (cmd == Subcommand::Overlap && !opts.cs_file.empty() && !opts.tt_file.empty()) {
        SuffixRules rules;
        const bool have_rules = !cfg.suffix_rules.empty();
        if (have_rules) rules = SuffixRules::from_file(cfg.suffix_rules);
        CsGraph cs = load_cs(opts.cs_file, have_rules ? &rules : nullptr, opts.assume_unit_weights);
        TtGraph tt{read_graph_csv(opts.tt_file), cfg.min_cooccurrence};
        stage_overlap(em, "", opts.tt_file.stem().string(), cs, opts.cs_file.stem().string(), tt);
        return;
    }

    validate_config(cfg);
    SuffixRules rules = SuffixRules::from_file(cfg.suffix_rules);
    auto orgs = load_org_map(cfg.organizations);

    std::vector<SnapshotData> data;
    for (const auto& spec : cfg.snapshots) {
        SnapshotData sd;
        sd.spec = spec;
        sd.trackers = load_tracker_list(spec.tracker_list, &rules, spec.tracker_list_version);
        for (const auto& [domain, org] : orgs) sd.trackers.organizations[domain] = org;
        Snapshot raw = load_snapshot(spec.log, spec.id, spec.date_label,
                                     spec.tracker_list_version, &sd.parse_stats);
        sd.raw_records = raw.records.size();
        auto filtered = filter_publishers(raw, sd.trackers, rules);
        sd.snapshot = std::move(filtered.snapshot);
        sd.records_after_filter = sd.snapshot.records.size();
        sd.publishers_kept = filtered.publishers_kept;
        sd.publishers_dropped = filtered.publishers_dropped;
        sd.anomalous_records = filtered.anomalous_records;
        data.push_back(std::move(sd));
    }

    const bool want_align = cfg.align && data.size() >= 2;
    if (want_align) {
        std::vector<Snapshot> snaps;
        for (auto& sd : data) snaps.push_back(std::move(sd.snapshot));
        auto series = align(snaps, rules);
        ordered_json doc;
        doc["common_publishers"] = series.common_publishers.size();
        doc["snapshots"] = ordered_json::array();
        for (std::size_t i = 0; i < data.size(); ++i) {
            doc["snapshots"].push_back(
                {{"id", data[i].spec.id},
                 {"publishers_before", data[i].publishers_kept},
                 {"records_before", data[i].records_after_filter},
                 {"records_after", series.snapshots[i].records.size()}});
            data[i].snapshot = std::move(series.snapshots[i]);
        }
        em.write_json("align_report.json", doc);
    }

    const bool do_ingest = cmd == Subcommand::Ingest || cmd == Subcommand::All;
    const bool do_netstats = cmd == Subcommand::Netstats || cmd == Subcommand::All;
    const bool do_pt = cmd == Subcommand::Pt || cmd == Subcommand::All;
    const bool do_tt = cmd == Subcommand::Tt || cmd == Subcommand::Overlap || cmd == Subcommand::All;
    const bool do_overlap =
        (cmd == Subcommand::Overlap || cmd == Subcommand::All) && !cfg.cs_graphs.empty();
    const bool do_evolve =
        cmd == Subcommand::Evolve || (cmd == Subcommand::All && data.size() >= 2);

    if (cmd == Subcommand::Overlap && cfg.cs_graphs.empty())
        throw ConfigError("overlap needs cs_graphs in the config or --cs/--tt files");

    std::vector<CsGraph> cs_graphs;
    if (do_overlap)
        for (const auto& spec : cfg.cs_graphs)
            cs_graphs.push_back(load_cs(spec.path, &rules, spec.assume_unit_weights));

    for (auto& sd : data) {
        const std::string dir = sd.spec.id + "/";
        if (do_ingest) stage_ingest(em, sd, rules, want_align);
        if (do_netstats) stage_netstats(em, sd, rules);

        PtGraph pt;
        if (do_pt) {
            pt = stage_pt(em, sd, rules, cfg, sd.trackers.organizations, threads);
        } else if (do_tt) {
            require_nonempty(sd);
            pt = build_pt(sd.snapshot, sd.trackers, rules);
            if (pt.graph.empty())
                throw GraphError("no publishers with trackers in snapshot: " + sd.spec.id);
        }
        if (do_tt) {
            TtGraph tt = cmd == Subcommand::Overlap
                             ? build_tt(pt, cfg.min_cooccurrence)
                             : stage_tt(em, dir, sd.spec.id, pt, cfg, threads);
            if (do_overlap)
                for (std::size_t i = 0; i < cs_graphs.size(); ++i)
                    stage_overlap(em, dir, sd.spec.id, cs_graphs[i], cfg.cs_graphs[i].name, tt);
        }
    }

    if (do_evolve) stage_evolve(em, data, rules, cfg, threads, want_align);
}

}  // namespace

void run(Subcommand cmd, const RunConfig& cfg, const RunOptions& opts) {
    Emitter em(cfg.output_dir, cmd, cfg);
    try {
        run_impl(cmd, cfg, opts, em);
    } catch (const std::exception& e) {
        em.write_manifest("incomplete", e.what());
        throw;
    }
    em.write_manifest("complete");
}

}  // namespace trackgraph
