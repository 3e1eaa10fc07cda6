#pragma once

#include <cstddef>

#include "abem/diffusion.hpp"
#include "abem/evolve.hpp"
#include "abem/graph.hpp"
#include "abem/nomination.hpp"
#include "abem/rng.hpp"

namespace abem {

inline constexpr std::size_t kGreedyMcRuns = 200;

/// Plain greedy hill climbing: k rounds, each adding the node with the
/// largest estimated marginal gain (ic.mc_runs worlds per candidate, shared
/// by all candidates of a round). Ties go to the smallest id.
SeedSet greedy_seed(const Snapshot& s, std::size_t k, const ICParams& ic, Rng& rng);

/// Top-k by degree, ties by smallest id.
SeedSet degree_seed(const Snapshot& s, std::size_t k);

/// Degree discount: repeatedly picks the largest
///   dd_v = d_v - 2 t_v - (d_v - t_v) t_v p_a
/// where t_v counts v's neighbours already selected. Ties by smallest id.
SeedSet ddh_seed(const Snapshot& s, std::size_t k, double p_a);

/// Uniform sample without replacement.
SeedSet random_seed(const Snapshot& s, std::size_t k, Rng& rng);

/// GA without a pool: initialisation and operators draw from all nodes.
/// cfg.rng_seed is replaced by a draw from `rng`.
SeedSet plain_ga_seed(const Snapshot& s, const GAConfig& cfg, const ICParams& ic, Rng& rng,
                      const TraceSink& sink = {});

/// GA whose initial population comes from `pool`; operators draw from all
/// nodes; no re-calibration.
SeedSet pool_ga_seed(const Snapshot& s, const InfluencerPool& pool, const GAConfig& cfg,
                     const ICParams& ic, Rng& rng, const TraceSink& sink = {});

/// Whether a baseline with the given cadence reselects at run position `t`.
constexpr bool reselects_at(std::size_t t, std::size_t cadence) noexcept {
    return cadence <= 1 || t % cadence == 0;
}

}  // namespace abem
