#include "abem/baselines.hpp"

#include <algorithm>
#include <numeric>

#include <tbb/parallel_for.h>

#include "abem/error.hpp"

namespace abem {
namespace {

void require_k(const Snapshot& s, std::size_t k) {
    if (k > s.node_count()) {
        throw InvalidArgument("k=" + std::to_string(k) + " exceeds the " +
                              std::to_string(s.node_count()) + " nodes of the snapshot");
    }
}

}  // namespace

SeedSet greedy_seed(const Snapshot& s, std::size_t k, const ICParams& ic, Rng& rng) {
    require_k(s, k);
    ic.validate();
    const auto n = s.node_count();
    SeedSet out;
    std::vector<char> chosen(n, 0);
    std::vector<SpreadEstimate> spread(n);
    for (std::size_t round = 0; round < k; ++round) {
        const std::uint64_t world_seed = rng();
        tbb::parallel_for(std::size_t{0}, n, [&](std::size_t i) {
            if (chosen[i]) return;
            auto trial = out.genes;
            trial.push_back(s.id_at(static_cast<std::uint32_t>(i)));
            spread[i] = estimate_spread_on_worlds(s, trial, ic, world_seed);
        });
        // Node indices follow id order, so the first maximum has the smallest id.
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (chosen[i]) continue;
            if (best == n || spread[i].mean > spread[best].mean) best = i;
        }
        chosen[best] = 1;
        out.genes.push_back(s.id_at(static_cast<std::uint32_t>(best)));
        out.fitness = spread[best];
    }
    return out;
}

SeedSet degree_seed(const Snapshot& s, std::size_t k) {
    require_k(s, k);
    std::vector<std::uint32_t> order(s.node_count());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return s.degree_at(a) > s.degree_at(b);
    });
    SeedSet out;
    for (std::size_t i = 0; i < k; ++i) out.genes.push_back(s.id_at(order[i]));
    return out;
}

SeedSet ddh_seed(const Snapshot& s, std::size_t k, double p_a) {
    require_k(s, k);
    ICParams{p_a, 1, std::nullopt}.validate();
    const auto n = s.node_count();
    std::vector<char> chosen(n, 0);
    std::vector<std::size_t> selected_neighbours(n, 0);  // t_v
    SeedSet out;
    for (std::size_t round = 0; round < k; ++round) {
        std::size_t best = n;
        double best_score = 0.0;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (chosen[v]) continue;
            const auto d = static_cast<double>(s.degree_at(v));
            const auto t = static_cast<double>(selected_neighbours[v]);
            const double score = d - 2.0 * t - (d - t) * t * p_a;
            if (best == n || score > best_score) {
                best = v;
                best_score = score;
            }
        }
        chosen[best] = 1;
        out.genes.push_back(s.id_at(static_cast<std::uint32_t>(best)));
        // v counts u as a selected neighbour when u is in Γ_v.
        for (std::uint32_t v = 0; v < n; ++v) {
            const auto targets = s.targets_of(v);
            if (std::binary_search(targets.begin(), targets.end(), static_cast<std::uint32_t>(best))) {
                ++selected_neighbours[v];
            }
        }
    }
    return out;
}

SeedSet random_seed(const Snapshot& s, std::size_t k, Rng& rng) {
    require_k(s, k);
    std::vector<NodeId> nodes(s.nodes().begin(), s.nodes().end());
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + uniform_index(rng, nodes.size() - i);
        std::swap(nodes[i], nodes[j]);
    }
    nodes.resize(k);
    return SeedSet{std::move(nodes), std::nullopt};
}

SeedSet plain_ga_seed(const Snapshot& s, const GAConfig& cfg, const ICParams& ic, Rng& rng,
                      const TraceSink& sink) {
    auto run_cfg = cfg;
    run_cfg.rng_seed = rng();
    EvolutionEngine engine(kPlainGa, NominationParams{}, run_cfg, ic);
    return engine.advance(s, sink).best;
}

SeedSet pool_ga_seed(const Snapshot& s, const InfluencerPool& pool, const GAConfig& cfg,
                     const ICParams& ic, Rng& rng, const TraceSink& sink) {
    auto run_cfg = cfg;
    run_cfg.rng_seed = rng();
    EvolutionEngine engine(kPoolGa, NominationParams{}, run_cfg, ic);
    return engine.advance(s, sink, &pool).best;
}

}  // namespace abem
