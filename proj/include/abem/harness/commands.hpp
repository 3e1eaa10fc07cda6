#pragma once

#include <filesystem>

#include "abem/graph.hpp"
#include "abem/harness/config.hpp"

namespace abem::harness {

struct RunOptions {
    std::filesystem::path out_dir = "out";
    /// Reuse cells recorded in out_dir/checkpoint.jsonl by an earlier run
    /// with the same command, config and seed.
    bool resume = false;
};

/// Builds the configured dataset. Throws ConfigError when k exceeds the
/// smallest snapshot.
DynamicNetwork load_dataset(const ExperimentConfig& cfg);

/// ABEM, plain GA and pool-GA for a fixed g on one snapshot:
/// trace_abem.csv, trace_ga.csv, trace_pool_ga.csv.
void cmd_convergence(const ExperimentConfig& cfg, const RunOptions& opt);

/// Every algorithm for every k on one snapshot: results.csv.
void cmd_static(const ExperimentConfig& cfg, const RunOptions& opt);

/// ABEM over the (θ_s, θ_q, g) grid for every k: sweep.csv.
void cmd_sweep(const ExperimentConfig& cfg, const RunOptions& opt);

/// Replays all snapshots: dynamic.csv plus seeds_<algorithm>.csv.
void cmd_dynamic(const ExperimentConfig& cfg, const RunOptions& opt);

/// Writes the synthetic dataset: graph.edges for one snapshot, otherwise
/// snapshot_NNN.edges and temporal.edges (one calendar quarter per snapshot
/// from 2006 Q1).
void cmd_gen_synthetic(const ExperimentConfig& cfg, const RunOptions& opt);

}  // namespace abem::harness
