#pragma once

#include <filesystem>
#include <string>

#include "trackgraph/config.hpp"

namespace trackgraph {

enum class Subcommand { Ingest, Netstats, Pt, Tt, Overlap, Evolve, All };

const char* to_string(Subcommand c);

struct RunOptions {
    // Direct-file modes: `tt --pt <edges>` and `overlap --cs <file> --tt <file>`
    // bypass the config's snapshot pipeline.
    std::filesystem::path pt_file;
    std::filesystem::path pt_roles;
    std::filesystem::path cs_file;
    std::filesystem::path tt_file;
    bool assume_unit_weights = false;
    unsigned threads = 0;  // 0 = TRACKGRAPH_THREADS or hardware default
};

// Executes one pipeline stage (or `all`), writing every artifact under
// cfg.output_dir plus a run manifest that lists them. On error the manifest
// is written with status "incomplete" and the error is rethrown; the caller
// maps exception types to exit codes.
void run(Subcommand cmd, const RunConfig& cfg, const RunOptions& opts = {});

}  // namespace trackgraph
