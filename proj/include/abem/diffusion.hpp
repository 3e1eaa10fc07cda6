#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "abem/graph.hpp"
#include "abem/rng.hpp"

namespace abem {

/// Independent Cascade parameters.
struct ICParams {
    double activation_probability = 0.1;  // p_a
    std::size_t mc_runs = 100;            // Monte-Carlo worlds per estimate
    /// Cascade rounds allowed; unset means unbounded. Local influence
    /// estimation uses l = 2 unless configured otherwise.
    std::optional<std::size_t> max_hops;

    /// Throws InvalidArgument when p_a is outside [0, 1], mc_runs is zero or
    /// max_hops is zero.
    void validate() const;
};

inline constexpr std::size_t kDefaultLocalHops = 2;
inline constexpr std::size_t kFitnessMcRuns = 100;
inline constexpr std::size_t kReportMcRuns = 1000;

/// Monte-Carlo estimate of σ(S).
struct SpreadEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t runs = 0;
};

// IC semantics: each newly activated node gets one chance per inactive
// out-neighbour, succeeding with probability p_a. Realisations are drawn from
// a keyed coin stream (see abem/simd/kernels.hpp): the coin of arc a in world
// w depends only on (world seed, a, w). Two estimates that use the same world
// seed therefore see the same live-edge worlds (common random numbers).

/// One cascade. The world seed is drawn from `rng`. Returns the activated
/// nodes, sorted. Throws MissingNodeError for a seed outside `s`.
std::vector<NodeId> simulate_ic_once(const Snapshot& s, std::span<const NodeId> seeds, double p_a,
                                     Rng& rng, std::optional<std::size_t> max_hops = std::nullopt);

/// Average activated-set size over params.mc_runs worlds; the world seed is
/// drawn from `rng`.
SpreadEstimate estimate_spread(const Snapshot& s, std::span<const NodeId> seeds,
                               const ICParams& params, Rng& rng);

/// As estimate_spread, on the worlds of an explicit world seed.
SpreadEstimate estimate_spread_on_worlds(const Snapshot& s, std::span<const NodeId> seeds,
                                         const ICParams& params, std::uint64_t world_seed);

/// σ(v) restricted to `params.max_hops` rounds (l). Throws InvalidArgument if
/// max_hops is unset.
SpreadEstimate estimate_local_influence(const Snapshot& s, NodeId v, const ICParams& params,
                                        Rng& rng);
SpreadEstimate estimate_local_influence_on_worlds(const Snapshot& s, NodeId v,
                                                  const ICParams& params,
                                                  std::uint64_t world_seed);

/// Activated-set size of every world 0 .. runs-1. Seeds are node indices.
std::vector<std::uint32_t> cascade_sizes(const Snapshot& s, std::span<const std::uint32_t> seeds,
                                         double p_a, std::size_t runs, std::uint64_t world_seed,
                                         std::optional<std::size_t> max_hops = std::nullopt);

inline constexpr std::size_t kBruteForceEdgeLimit = 20;

/// Exact σ(S) by summing over all 2^|E| live-edge subgraphs. Undirected edges
/// are one coin each. Throws InvalidArgument above kBruteForceEdgeLimit edges.
double exact_spread_bruteforce(const Snapshot& s, std::span<const NodeId> seeds, double p_a);

/// Thread-safe memo of spread estimates keyed by (snapshot uid, sorted seed
/// ids, p_a, mc_runs, world seed).
class FitnessCache {
public:
    std::optional<SpreadEstimate> find(std::uint64_t snapshot_uid, std::span<const NodeId> sorted_genes,
                                       double p_a, std::size_t mc_runs, std::uint64_t world_seed) const;
    void insert(std::uint64_t snapshot_uid, std::span<const NodeId> sorted_genes, double p_a,
                std::size_t mc_runs, std::uint64_t world_seed, const SpreadEstimate& value);
    /// Drops every entry that does not belong to `snapshot_uid`.
    void retain_only(std::uint64_t snapshot_uid);
    void clear();

    std::size_t size() const;
    std::size_t hits() const noexcept { return hits_.load(std::memory_order_relaxed); }
    std::size_t misses() const noexcept { return misses_.load(std::memory_order_relaxed); }

private:
    struct Key {
        std::uint64_t snapshot;
        std::vector<NodeId> genes;
        double p_a;
        std::size_t mc_runs;
        std::uint64_t world_seed;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };

    mutable std::shared_mutex mutex_;
    std::unordered_map<Key, SpreadEstimate, KeyHash> entries_;
    mutable std::atomic<std::size_t> hits_{0};
    mutable std::atomic<std::size_t> misses_{0};
};

/// GA fitness function σ(S_m): a spread estimate whose world seed is a pure
/// function of (base seed, snapshot time index, genes), so results do not
/// depend on evaluation order or thread count.
///
/// With common random numbers on, every seed set on a snapshot is evaluated
/// on the same worlds; otherwise each distinct seed set gets its own worlds.
class SpreadEvaluator {
public:
    SpreadEvaluator(ICParams params, std::uint64_t base_seed, bool common_random_numbers = false,
                    std::shared_ptr<FitnessCache> cache = std::make_shared<FitnessCache>());

    SpreadEstimate evaluate(const Snapshot& s, std::span<const NodeId> genes) const;
    /// Evaluates all seed sets, concurrently when threads are available.
    std::vector<SpreadEstimate> evaluate_many(const Snapshot& s,
                                              std::span<const std::vector<NodeId>> seed_sets) const;

    std::uint64_t world_seed_for(const Snapshot& s, std::span<const NodeId> sorted_genes) const;

    const ICParams& params() const noexcept { return params_; }
    bool common_random_numbers() const noexcept { return crn_; }
    FitnessCache& cache() const noexcept { return *cache_; }

private:
    ICParams params_;
    std::uint64_t base_seed_;
    bool crn_;
    std::shared_ptr<FitnessCache> cache_;
};

}  // namespace abem
