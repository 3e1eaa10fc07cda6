#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "abem/diffusion.hpp"
#include "abem/graph.hpp"
#include "abem/nomination.hpp"
#include "abem/rng.hpp"

namespace abem {

/// One chromosome: k distinct genes. Gene order is the position order used
/// by one-point crossover.
struct SeedSet {
    std::vector<NodeId> genes;
    std::optional<SpreadEstimate> fitness;

    bool contains(NodeId v) const noexcept;
    /// Estimated σ, or 0 when not evaluated yet.
    double fitness_value() const noexcept { return fitness ? fitness->mean : 0.0; }
};

/// One generation R_i.
struct Population {
    std::vector<SeedSet> members;
    std::size_t generation = 0;
    SeedSet best_ever;  // S'
};

struct GAConfig {
    std::size_t population_size = 50;  // |R_0|
    std::size_t generations = 1000;    // g; generation indices stay below this
    double crossover_rate = 1.0;       // p_c
    double mutation_rate = 0.1;        // p_m
    std::size_t seed_set_size = 5;     // k
    /// Stop after this many generations without a best-ever improvement;
    /// 0 runs the full g generations.
    std::size_t convergence_window = 100;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

/// Where operators draw replacement genes. `candidates` is tried first;
/// `fallback` is used only where an operator allows it and no candidate is
/// eligible. Both sorted ascending.
struct GeneSource {
    std::span<const NodeId> candidates;
    std::span<const NodeId> fallback;
};

/// Node id -> degree recorded when the node last entered the pool or the
/// population.
using DegreeHistory = std::unordered_map<NodeId, std::size_t>;

/// population_size chromosomes of k genes sampled without replacement from
/// `pool`, topped up from `fallback` when the pool has fewer than k nodes.
/// Genes come out sorted, so equal sets are equal chromosomes.
/// Throws InvalidArgument when pool ∪ fallback has fewer than k nodes.
Population init_population(std::span<const NodeId> pool, std::span<const NodeId> fallback,
                           const GAConfig& cfg, Rng& rng);

/// p_s(S_m) = σ(S_m) / Σ σ(S_i). Uniform when every fitness is zero.
std::vector<double> selection_rates(std::span<const double> fitnesses);

/// Independent keep flags, one Bernoulli(rates[i]) draw per member.
std::vector<char> selection_draw(std::span<const double> rates, Rng& rng);

/// Keeps each member with probability p_s, tops up with the fittest members
/// not yet kept, or trims to the fittest target_size survivors. The fittest
/// member is kept regardless of its draw. Requires |augmented| >= target_size.
Population select(const Population& augmented, std::size_t target_size, Rng& rng);

/// Suffix exchange at `slice` with set semantics: the first occurrence of a
/// gene is kept, so offspring may come out shorter than their parents.
std::pair<std::vector<NodeId>, std::vector<NodeId>> one_point_crossover(
    std::span<const NodeId> first, std::span<const NodeId> second, std::size_t slice);

/// Appends uniformly drawn genes not already present until `genes` has k
/// entries. Draws from candidates, then from fallback. Throws
/// InvalidArgument if both are exhausted.
void repair(std::vector<NodeId>& genes, std::size_t k, const GeneSource& source, Rng& rng);

/// Each member, with probability p_c, is crossed with the fittest other
/// member at a uniform slice in [1, k-1]; both repaired offspring are
/// appended and the parents stay.
Population crossover(const Population& pop, const GeneSource& source, double p_c, Rng& rng);

/// Every gene is replaced with probability p_m by a uniform candidate not
/// already in its chromosome; with no eligible candidate the gene stays.
Population mutate(const Population& pop, const GeneSource& source, double p_m, Rng& rng);

/// Re-calibration against snapshot `s`: genes that left the network are
/// replaced; genes outside the pool are replaced with probability
/// p_d = max(0, 1 - degree_now / degree_recorded). Replacements come from the
/// pool, or from the snapshot's nodes when the pool has none eligible; a
/// degraded gene with no eligible replacement is kept.
Population recalibrate(const Population& pop, const Snapshot& s, const InfluencerPool& pool,
                       const DegreeHistory& degree_history, Rng& rng);

/// Degree change rate; 0 for unknown or zero prior degree.
double degree_change_rate(std::size_t current_degree, std::optional<std::size_t> prior_degree);

/// Which parts of the agent-based machinery a GA run uses.
struct EvolutionVariant {
    std::string_view name;
    bool init_from_pool;
    bool operators_from_pool;
    bool recalibrate;  // also: carry the population across snapshots
};

inline constexpr EvolutionVariant kAbem{"abem", true, true, true};
inline constexpr EvolutionVariant kPlainGa{"ga", false, false, false};
inline constexpr EvolutionVariant kPoolGa{"pool_ga", true, false, false};

struct GenerationRecord {
    std::size_t snapshot = 0;    // position in the run
    std::size_t time_index = 0;  // snapshot's time index
    std::size_t generation = 0;  // restarts at 0 on every snapshot
    double best_fitness = 0.0;
    double avg_fitness = 0.0;
    std::size_t pool_size = 0;
};

using TraceSink = std::function<void(const GenerationRecord&)>;

struct SnapshotOutcome {
    std::size_t time_index = 0;
    SeedSet best;
    std::size_t generations = 0;  // generations run on this snapshot
    std::size_t pool_size = 0;
};

struct SeedingResult {
    std::vector<SnapshotOutcome> snapshots;
    std::vector<GenerationRecord> trace;
};

/// GA driver shared by ABEM and the GA baselines. One instance follows one
/// run across snapshots; `advance` processes the next snapshot.
class EvolutionEngine {
public:
    EvolutionEngine(EvolutionVariant variant, NominationParams nomination, GAConfig cfg,
                    ICParams fitness_ic, bool common_random_numbers = false);

    /// Runs the GA on `s` until convergence or the generation cap. When
    /// `fixed_pool` is given it replaces the nomination pass.
    SnapshotOutcome advance(const Snapshot& s, const TraceSink& sink = {},
                            const InfluencerPool* fixed_pool = nullptr);

    const Population& population() const noexcept { return population_; }
    const InfluencerPool& pool() const noexcept { return pool_; }
    const DegreeHistory& degree_history() const noexcept { return history_; }
    const SpreadEvaluator& evaluator() const noexcept { return evaluator_; }

private:
    void evaluate(const Snapshot& s);
    void note_new_genes(const Snapshot& s);

    EvolutionVariant variant_;
    NominationParams nomination_;
    GAConfig cfg_;
    SpreadEvaluator evaluator_;
    Rng rng_;
    InfluencerPool pool_;
    Population population_;
    DegreeHistory history_;
    std::vector<NodeId> present_;  // sorted genes currently in the population
    std::size_t snapshots_seen_ = 0;
};

/// ABEM over a snapshot sequence: per snapshot, refresh the pool, then
/// initialise (first snapshot) or carry the population forward, and evolve
/// with re-calibration each generation.
SeedingResult run_abem(const DynamicNetwork& net, const NominationParams& nomination,
                       const GAConfig& cfg, const ICParams& ic, const TraceSink& sink = {},
                       bool common_random_numbers = false);
SeedingResult run_abem(const Snapshot& s, const NominationParams& nomination, const GAConfig& cfg,
                       const ICParams& ic, const TraceSink& sink = {},
                       bool common_random_numbers = false);

/// Chromosome validity: k distinct genes, all in `s`.
bool valid_chromosome(const SeedSet& seeds, std::size_t k, const Snapshot& s);

}  // namespace abem
