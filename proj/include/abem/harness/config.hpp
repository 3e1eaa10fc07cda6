#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abem/diffusion.hpp"
#include "abem/error.hpp"
#include "abem/evolve.hpp"
#include "abem/nomination.hpp"

namespace abem::harness {

/// Invalid experiment configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

struct DatasetSpec {
    enum class Kind { Synthetic, EdgeList, Temporal };
    Kind kind = Kind::Synthetic;

    // synthetic
    std::string model = "ba";  // "ba" or "er"
    std::size_t n = 500;
    std::size_t m = 3;
    double p = 0.08;
    std::size_t snapshots = 1;
    double churn = 0.0;
    /// Graph seed; derived from the run seed when unset.
    std::optional<std::uint64_t> graph_seed;

    // files: one path per snapshot (edge_list) or a single temporal list
    std::vector<std::filesystem::path> paths;
    bool directed = false;
    std::string buckets = "quarter";
    bool join_quit = true;
    std::string persistence = "until_quit";  // or "per_bucket"

    /// Position of the snapshot used by the single-snapshot commands.
    std::size_t snapshot = 0;
};

struct SweepGrid {
    std::vector<std::size_t> degree_thresholds;
    std::vector<double> quantile_thresholds;
    std::vector<std::size_t> generations;
};

struct ExperimentConfig {
    DatasetSpec dataset;
    std::vector<std::string> algorithms{"abem", "ga", "pool_ga", "greedy", "degree", "ddh", "random"};
    std::vector<std::size_t> k{5};
    /// In-loop spread estimation; max_hops stays unset.
    ICParams ic{0.1, kFitnessMcRuns, std::nullopt};
    std::size_t report_mc_runs = kReportMcRuns;
    NominationParams nomination;
    /// seed_set_size and rng_seed are filled per cell.
    GAConfig ga;
    bool common_random_numbers = false;
    std::size_t greedy_mc_runs = 200;
    /// Re-selection cadence of the baselines in the dynamic replay, in
    /// snapshots. ABEM adapts on every snapshot.
    std::map<std::string, std::size_t> cadence{{"ga", 1},     {"pool_ga", 1}, {"greedy", 4},
                                               {"degree", 4}, {"ddh", 4},     {"random", 1}};
    SweepGrid sweep{{2}, {0.7}, {100}};
    /// Wall-clock seconds in reports. Off keeps reports byte-reproducible.
    bool timing = false;
    std::uint64_t rng_seed = 1;
};

inline const std::vector<std::string>& known_algorithms() {
    static const std::vector<std::string> names{"abem", "ga",     "pool_ga", "greedy",
                                                "degree", "ddh", "random"};
    return names;
}

/// Parses YAML text. Relative dataset paths resolve against `base_dir`.
/// Throws ConfigError for unknown keys, wrong types and out-of-range values.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Range checks and file existence. Throws ConfigError.
void validate(const ExperimentConfig& cfg);

/// Canonical YAML rendering: every field, fixed order.
std::string canonical_yaml(const ExperimentConfig& cfg);

/// 16 hex digits of FNV-1a over the canonical text without rng_seed.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace abem::harness
