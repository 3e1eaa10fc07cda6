#include "abem/nomination.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <tbb/parallel_for.h>

#include "abem/error.hpp"

namespace abem {

void NominationParams::validate() const {
    if (degree_threshold < 1) throw InvalidArgument("degree threshold must be at least 1");
    if (!(quantile_threshold >= 0.0 && quantile_threshold <= 1.0)) {
        throw InvalidArgument("quantile threshold must lie in [0, 1]");
    }
    ic.validate();
    if (!ic.max_hops) throw InvalidArgument("nomination needs a hop limit for σ(v)");
}

std::vector<NodeId> InfluencerPool::ids() const {
    std::vector<NodeId> out;
    out.reserve(entries_.size());
    for (const auto& [id, entry] : entries_) out.push_back(id);
    return out;
}

void InfluencerPool::write(std::ostream& out) const {
    out << "# node_id local_influence degree_at_nomination nominated_at\n";
    char buf[64];
    for (const auto& [id, e] : entries_) {
        std::snprintf(buf, sizeof buf, "%.17g", e.local_influence);
        out << id << ' ' << buf << ' ' << e.degree_at_nomination << ' ' << e.nominated_at << '\n';
    }
}

InfluencerPool InfluencerPool::read(std::istream& in) {
    InfluencerPool pool;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line.front() == '#') continue;
        std::istringstream row(line);
        NodeId id = 0;
        PoolEntry e;
        std::string extra;
        if (!(row >> id >> e.local_influence >> e.degree_at_nomination >> e.nominated_at) ||
            (row >> extra)) {
            throw ParseError("expected \"node_id local_influence degree_at_nomination nominated_at\"",
                             number);
        }
        pool.insert(id, e);
    }
    return pool;
}

std::vector<double> local_influences(const Snapshot& s, const ICParams& ic,
                                     std::uint64_t world_seed) {
    std::vector<double> sigma(s.node_count());
    tbb::parallel_for(std::size_t{0}, s.node_count(), [&](std::size_t i) {
        sigma[i] = estimate_local_influence_on_worlds(s, s.id_at(static_cast<std::uint32_t>(i)),
                                                      ic, world_seed)
                       .mean;
    });
    return sigma;
}

double rank_fraction(const Snapshot& s, std::uint32_t v_index, std::span<const double> sigma) {
    const auto neighbours = s.targets_of(v_index);
    if (neighbours.empty()) return 0.0;
    std::size_t below = 0;
    for (const auto u : neighbours) {
        if (sigma[u] < sigma[v_index]) ++below;  // ties do not count
    }
    return static_cast<double>(below) / static_cast<double>(neighbours.size());
}

NominationDecision decide_nomination(const Snapshot& s, NodeId v, std::span<const double> sigma,
                                     const NominationParams& params, bool currently_pooled) {
    const auto i = s.index_of(v);
    const bool passes = s.degree_at(i) >= params.degree_threshold &&
                        rank_fraction(s, i, sigma) >= params.quantile_threshold;
    if (passes) return NominationDecision::Nominate;
    return currently_pooled ? NominationDecision::Withdraw : NominationDecision::Unchanged;
}

NominationDecision evaluate_nomination(const Snapshot& s, NodeId v, const NominationParams& params,
                                       const InfluencerPool& pool, Rng& rng) {
    params.validate();
    const auto i = s.index_of(v);
    const std::uint64_t world_seed = rng();
    // Only v and its neighbours are ever read.
    std::vector<double> sigma(s.node_count(), 0.0);
    sigma[i] = estimate_local_influence_on_worlds(s, v, params.ic, world_seed).mean;
    for (const auto u : s.targets_of(i)) {
        sigma[u] = estimate_local_influence_on_worlds(s, s.id_at(u), params.ic, world_seed).mean;
    }
    return decide_nomination(s, v, sigma, params, pool.contains(v));
}

InfluencerPool refresh_pool_with(const Snapshot& s, const InfluencerPool& prior,
                                 const NominationParams& params, std::span<const double> sigma) {
    params.validate();
    InfluencerPool next;
    for (std::uint32_t i = 0; i < s.node_count(); ++i) {
        const auto v = s.id_at(i);
        const bool pooled = prior.contains(v);
        if (decide_nomination(s, v, sigma, params, pooled) != NominationDecision::Nominate) continue;
        PoolEntry e{sigma[i], s.degree_at(i), s.time_index()};
        if (pooled) e.nominated_at = prior.entries().at(v).nominated_at;
        next.insert(v, e);
    }
    return next;
}

InfluencerPool refresh_pool(const Snapshot& s, const InfluencerPool& prior,
                            const NominationParams& params, Rng& rng) {
    params.validate();
    const auto sigma = local_influences(s, params.ic, rng());
    return refresh_pool_with(s, prior, params, sigma);
}

std::vector<PoolSizePoint> pool_size_curve(
    const Snapshot& s, std::span<const std::pair<std::size_t, double>> grid, const ICParams& ic,
    Rng& rng) {
    if (grid.empty()) throw InvalidArgument("pool size grid is empty");
    const auto sigma = local_influences(s, ic, rng());
    std::vector<PoolSizePoint> out;
    out.reserve(grid.size());
    for (const auto& [theta_s, theta_q] : grid) {
        const NominationParams params{theta_s, theta_q, ic};
        out.push_back({theta_s, theta_q, refresh_pool_with(s, {}, params, sigma).size()});
    }
    return out;
}

}  // namespace abem
