#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "trackgraph/config.hpp"
#include "trackgraph/errors.hpp"
#include "trackgraph/pipeline.hpp"
#include "trackgraph/version.hpp"

namespace {

struct CliArgs {
    std::string config;
    std::string output_dir;
    std::string pt_file, pt_roles;
    std::string cs_file, tt_file;
    bool assume_unit_weights = false;
    long min_cooccurrence = -1;
    long top_k = -1;
    bool no_align = false;
};

void add_common(CLI::App* sub, CliArgs& args, bool config_required) {
    auto* opt = sub->add_option("-c,--config", args.config, "Run configuration JSON");
    if (config_required) opt->required();
    sub->add_option("-o,--output-dir", args.output_dir, "Output directory (overrides config)");
    sub->add_flag("--no-align", args.no_align,
                  "Skip restriction to the common publisher set");
}

trackgraph::RunConfig effective_config(const CliArgs& args) {
    trackgraph::RunConfig cfg;
    if (!args.config.empty()) cfg = trackgraph::load_config(args.config);
    if (!args.output_dir.empty()) cfg.output_dir = args.output_dir;
    if (args.min_cooccurrence > 0)
        cfg.min_cooccurrence = static_cast<std::uint32_t>(args.min_cooccurrence);
    if (args.top_k > 0) cfg.top_k = static_cast<std::size_t>(args.top_k);
    if (args.no_align) cfg.align = false;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    using trackgraph::Subcommand;

    CLI::App app{"Web-tracking graph analytics over browser crawl logs"};
    app.set_version_flag("--version", trackgraph::kVersion);
    app.require_subcommand(1);

    CliArgs args;

    add_common(app.add_subcommand("ingest", "Parse, classify and filter crawl logs"), args, true);
    add_common(app.add_subcommand("netstats", "Per-publisher network activity and CDFs"), args,
               true);
    auto* pt = app.add_subcommand("pt", "Build publisher-tracker graphs and metrics");
    add_common(pt, args, true);
    pt->add_option("-k,--top-k", args.top_k, "Ranking size (overrides config)");

    auto* tt = app.add_subcommand("tt", "Derive tracker-tracker co-occurrence graphs");
    add_common(tt, args, false);
    tt->add_option("--pt", args.pt_file, "Read a PT edge-list CSV instead of crawl logs");
    tt->add_option("--roles", args.pt_roles, "Node-role CSV for --pt");
    tt->add_option("--min-cooccurrence", args.min_cooccurrence,
                   "Co-occurrence threshold (default 2)");

    auto* ov = app.add_subcommand("overlap", "Cookie-sync overlap against TT graphs");
    add_common(ov, args, false);
    ov->add_option("--cs", args.cs_file, "CS ground-truth CSV (with --tt)");
    ov->add_option("--tt", args.tt_file, "TT edge-list CSV (with --cs)");
    ov->add_flag("--assume-unit-weights", args.assume_unit_weights,
                 "Treat an unweighted CS file as weight 1 per edge");
    ov->add_option("--min-cooccurrence", args.min_cooccurrence,
                   "Co-occurrence threshold (default 2)");

    auto* ev = app.add_subcommand("evolve", "Cross-snapshot trends and top-k stability");
    add_common(ev, args, false);
    ev->add_option("-m,--manifest", args.config, "Snapshot manifest (same schema as --config)");
    ev->add_option("-k,--top-k", args.top_k, "Stability cutoff (overrides config)");

    auto* all = app.add_subcommand("all", "Run the full pipeline");
    add_common(all, args, true);
    all->add_option("-k,--top-k", args.top_k, "Ranking size (overrides config)");
    all->add_option("--min-cooccurrence", args.min_cooccurrence,
                    "Co-occurrence threshold (default 2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 4;
    }

    Subcommand cmd;
    if (app.got_subcommand("ingest")) cmd = Subcommand::Ingest;
    else if (app.got_subcommand("netstats")) cmd = Subcommand::Netstats;
    else if (app.got_subcommand("pt")) cmd = Subcommand::Pt;
    else if (app.got_subcommand("tt")) cmd = Subcommand::Tt;
    else if (app.got_subcommand("overlap")) cmd = Subcommand::Overlap;
    else if (app.got_subcommand("evolve")) cmd = Subcommand::Evolve;
    else cmd = Subcommand::All;

    try {
        const bool tt_direct = cmd == Subcommand::Tt && !args.pt_file.empty();
        const bool ov_direct =
            cmd == Subcommand::Overlap && !args.cs_file.empty() && !args.tt_file.empty();
        if (cmd == Subcommand::Tt && !tt_direct && args.config.empty())
            throw trackgraph::ConfigError("tt needs --config or --pt");
        if (cmd == Subcommand::Overlap && !ov_direct && args.config.empty())
            throw trackgraph::ConfigError("overlap needs --config or both --cs and --tt");
        if (cmd == Subcommand::Evolve && args.config.empty())
            throw trackgraph::ConfigError("evolve needs --config or --manifest");

        trackgraph::RunConfig cfg = effective_config(args);
        trackgraph::RunOptions opts;
        opts.pt_file = args.pt_file;
        opts.pt_roles = args.pt_roles;
        opts.cs_file = args.cs_file;
        opts.tt_file = args.tt_file;
        opts.assume_unit_weights = args.assume_unit_weights;

        trackgraph::run(cmd, cfg, opts);
        return 0;
    } catch (const trackgraph::ParseError& e) {
        std::fprintf(stderr, "trackgraph: %s\n", e.what());
        return 2;
    } catch (const trackgraph::ConfigError& e) {
        std::fprintf(stderr, "trackgraph: %s\n", e.what());
        return 4;
    } catch (const trackgraph::GraphError& e) {
        std::fprintf(stderr, "trackgraph: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "trackgraph: %s\n", e.what());
        return 3;
    }
}
