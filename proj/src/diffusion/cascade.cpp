#include <algorithm>
#include <cmath>

#include "abem/diffusion.hpp"
#include "abem/error.hpp"
#include "abem/simd/kernels.hpp"

namespace abem {
namespace {

using simd::kLanes;

// Per-thread buffers sized to the largest snapshot seen. Every batch leaves
// `active` and `next_fresh` all-zero again.
struct Scratch {
    std::vector<std::uint64_t> active;
    std::vector<std::uint64_t> next_fresh;
    std::vector<std::uint32_t> touched;
    std::vector<std::pair<std::uint32_t, std::uint64_t>> frontier;
    std::vector<std::uint32_t> next;
    std::vector<std::uint64_t> masks;

    void fit(std::size_t n) {
        if (active.size() < n) {
            active.resize(n, 0);
            next_fresh.resize(n, 0);
        }
    }
};

Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

// Propagates 64 worlds (world_base .. world_base+63, restricted to `valid`)
// and leaves the final active masks of touched nodes in sc.active.
void propagate_batch(const Snapshot& s, std::span<const std::uint32_t> seeds,
                     simd::CoinThreshold coin, std::uint64_t world_seed,
                     std::uint32_t world_base, std::uint64_t valid,
                     std::optional<std::size_t> max_hops, Scratch& sc,
                     const simd::KernelTable& k) {
    sc.touched.clear();
    sc.frontier.clear();
    for (const auto v : seeds) {
        if (sc.active[v] == 0) {
            sc.touched.push_back(v);
            sc.frontier.emplace_back(v, valid);
        }
        sc.active[v] = valid;
    }
    if (coin.value == 0 && !coin.always) return;

    std::size_t round = 0;
    while (!sc.frontier.empty() && (!max_hops || round < *max_hops)) {
        ++round;
        sc.next.clear();
        for (const auto& [u, fresh] : sc.frontier) {
            const auto end = s.arc_end(u);
            for (auto arc = s.arc_begin(u); arc < end; ++arc) {
                const auto v = s.arc_target(arc);
                const auto candidates = fresh & ~sc.active[v];
                if (candidates == 0) continue;
                const auto live = coin.always
                                      ? ~std::uint64_t{0}
                                      : k.live_mask(simd::arc_key(world_seed, arc), world_base,
                                                    coin.value);
                const auto gained = candidates & live;
                if (gained == 0) continue;
                if (sc.active[v] == 0) sc.touched.push_back(v);
                sc.active[v] |= gained;
                if (sc.next_fresh[v] == 0) sc.next.push_back(v);
                sc.next_fresh[v] |= gained;
            }
        }
        sc.frontier.clear();
        for (const auto v : sc.next) {
            sc.frontier.emplace_back(v, sc.next_fresh[v]);
            sc.next_fresh[v] = 0;
        }
    }
    // A hop cap can leave activations queued.
    for (const auto& [v, fresh] : sc.frontier) sc.next_fresh[v] = 0;
}

void clear_active(Scratch& sc) {
    for (const auto v : sc.touched) sc.active[v] = 0;
}

std::vector<std::uint32_t> seed_indices(const Snapshot& s, std::span<const NodeId> seeds) {
    std::vector<std::uint32_t> out;
    out.reserve(seeds.size());
    for (const auto id : seeds) out.push_back(s.index_of(id));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

template <typename OnWorld>
void run_worlds(const Snapshot& s, std::span<const std::uint32_t> seeds, double p_a,
                std::size_t runs, std::uint64_t world_seed, std::optional<std::size_t> max_hops,
                OnWorld&& on_world) {
    const auto coin = simd::make_threshold(p_a);
    const auto& k = simd::kernels();
    auto& sc = scratch();
    sc.fit(s.node_count());
    std::uint32_t counts[kLanes];
    for (std::size_t base = 0; base < runs; base += kLanes) {
        const auto lanes = std::min(kLanes, runs - base);
        const auto valid = lanes == kLanes ? ~std::uint64_t{0} : (std::uint64_t{1} << lanes) - 1;
        propagate_batch(s, seeds, coin, world_seed, static_cast<std::uint32_t>(base), valid,
                        max_hops, sc, k);
        sc.masks.clear();
        for (const auto v : sc.touched) sc.masks.push_back(sc.active[v]);
        std::fill(std::begin(counts), std::end(counts), 0u);
        k.accumulate_lane_counts(sc.masks.data(), sc.masks.size(), counts);
        clear_active(sc);
        for (std::size_t lane = 0; lane < lanes; ++lane) on_world(base + lane, counts[lane]);
    }
}

SpreadEstimate summarize(const Moments& m, std::size_t runs) {
    SpreadEstimate est;
    est.runs = runs;
    const auto r = static_cast<double>(runs);
    est.mean = m.sum / r;
    if (runs > 1) {
        const double var = std::max(0.0, (m.sum_sq - m.sum * m.sum / r) / (r - 1.0));
        est.std_error = std::sqrt(var / r);
    }
    return est;
}

SpreadEstimate spread_by_index(const Snapshot& s, std::span<const std::uint32_t> seeds,
                               const ICParams& params, std::uint64_t world_seed) {
    Moments m;
    run_worlds(s, seeds, params.activation_probability, params.mc_runs, world_seed,
               params.max_hops, [&](std::size_t, std::uint32_t size) {
                   const auto x = static_cast<double>(size);
                   m.sum += x;
                   m.sum_sq += x * x;
               });
    return summarize(m, params.mc_runs);
}

}  // namespace

void ICParams::validate() const {
    if (!(activation_probability >= 0.0 && activation_probability <= 1.0)) {
        throw InvalidArgument("activation probability must lie in [0, 1]");
    }
    if (mc_runs == 0) throw InvalidArgument("mc_runs must be at least 1");
    if (max_hops && *max_hops == 0) throw InvalidArgument("max_hops must be positive");
    if (mc_runs > 0xFFFFFFFFull - kLanes) throw InvalidArgument("mc_runs too large");
}

std::vector<std::uint32_t> cascade_sizes(const Snapshot& s, std::span<const std::uint32_t> seeds,
                                         double p_a, std::size_t runs, std::uint64_t world_seed,
                                         std::optional<std::size_t> max_hops) {
    std::vector<std::uint32_t> sizes(runs);
    run_worlds(s, seeds, p_a, runs, world_seed, max_hops,
               [&](std::size_t world, std::uint32_t size) { sizes[world] = size; });
    return sizes;
}

std::vector<NodeId> simulate_ic_once(const Snapshot& s, std::span<const NodeId> seeds, double p_a,
                                     Rng& rng, std::optional<std::size_t> max_hops) {
    ICParams{p_a, 1, max_hops}.validate();
    const auto idx = seed_indices(s, seeds);
    const std::uint64_t world_seed = rng();
    auto& sc = scratch();
    sc.fit(s.node_count());
    propagate_batch(s, idx, simd::make_threshold(p_a), world_seed, 0, 1, max_hops, sc,
                    simd::kernels());
    std::vector<NodeId> out;
    out.reserve(sc.touched.size());
    for (const auto v : sc.touched) out.push_back(s.id_at(v));
    clear_active(sc);
    std::sort(out.begin(), out.end());
    return out;
}

SpreadEstimate estimate_spread_on_worlds(const Snapshot& s, std::span<const NodeId> seeds,
                                         const ICParams& params, std::uint64_t world_seed) {
    params.validate();
    const auto idx = seed_indices(s, seeds);
    return spread_by_index(s, idx, params, world_seed);
}

SpreadEstimate estimate_spread(const Snapshot& s, std::span<const NodeId> seeds,
                               const ICParams& params, Rng& rng) {
    params.validate();
    const auto idx = seed_indices(s, seeds);
    return spread_by_index(s, idx, params, rng());
}

SpreadEstimate estimate_local_influence_on_worlds(const Snapshot& s, NodeId v,
                                                  const ICParams& params,
                                                  std::uint64_t world_seed) {
    if (!params.max_hops) throw InvalidArgument("local influence needs max_hops");
    params.validate();
    const std::uint32_t idx[1] = {s.index_of(v)};
    return spread_by_index(s, idx, params, world_seed);
}

SpreadEstimate estimate_local_influence(const Snapshot& s, NodeId v, const ICParams& params,
                                        Rng& rng) {
    return estimate_local_influence_on_worlds(s, v, params, rng());
}

}  // namespace abem
