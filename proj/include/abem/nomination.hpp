#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "abem/diffusion.hpp"
#include "abem/graph.hpp"
#include "abem/rng.hpp"

namespace abem {

struct NominationParams {
    std::size_t degree_threshold = 2;  // θ_s
    double quantile_threshold = 0.7;   // θ_q
    /// σ(v) estimation for the ranking; ranks need little precision.
    ICParams ic{0.1, 50, kDefaultLocalHops};

    void validate() const;
};

struct PoolEntry {
    double local_influence = 0.0;
    std::size_t degree_at_nomination = 0;
    std::size_t nominated_at = 0;  // time index of the snapshot that admitted it
    friend bool operator==(const PoolEntry&, const PoolEntry&) = default;
};

/// Influencer pool C(t).
class InfluencerPool {
public:
    bool contains(NodeId v) const { return entries_.contains(v); }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::map<NodeId, PoolEntry>& entries() const noexcept { return entries_; }
    /// Candidate ids, ascending.
    std::vector<NodeId> ids() const;

    void insert(NodeId v, const PoolEntry& entry) { entries_[v] = entry; }
    void erase(NodeId v) { entries_.erase(v); }

    /// Text table, one "node_id local_influence degree_at_nomination
    /// nominated_at" row per candidate after a '#' header line.
    void write(std::ostream& out) const;
    /// Throws ParseError on malformed rows.
    static InfluencerPool read(std::istream& in);

    friend bool operator==(const InfluencerPool&, const InfluencerPool&) = default;

private:
    std::map<NodeId, PoolEntry> entries_;
};

enum class NominationDecision { Nominate, Withdraw, Unchanged };

/// σ of every node, indexed like the snapshot's nodes, on shared worlds.
std::vector<double> local_influences(const Snapshot& s, const ICParams& ic,
                                     std::uint64_t world_seed);

/// Share of v's neighbours whose σ is strictly below σ(v); 0 for isolated v.
double rank_fraction(const Snapshot& s, std::uint32_t v_index, std::span<const double> sigma);

/// Nomination test from precomputed σ values (indexed like the snapshot).
NominationDecision decide_nomination(const Snapshot& s, NodeId v, std::span<const double> sigma,
                                     const NominationParams& params, bool currently_pooled);

/// Agent self-evaluation: estimates σ for v and its neighbours on shared
/// worlds drawn from `rng`, then applies the nomination test.
NominationDecision evaluate_nomination(const Snapshot& s, NodeId v, const NominationParams& params,
                                       const InfluencerPool& pool, Rng& rng);

/// Re-runs every agent's evaluation against `s`. Decisions are computed from
/// σ values fixed before any change, then committed together.
InfluencerPool refresh_pool(const Snapshot& s, const InfluencerPool& prior,
                            const NominationParams& params, Rng& rng);

/// Commit phase of refresh_pool, exposed for callers that hold σ already.
InfluencerPool refresh_pool_with(const Snapshot& s, const InfluencerPool& prior,
                                 const NominationParams& params, std::span<const double> sigma);

struct PoolSizePoint {
    std::size_t degree_threshold = 0;
    double quantile_threshold = 0.0;
    std::size_t pool_size = 0;
};

/// Pool size at each (θ_s, θ_q) grid point, from one shared set of σ values.
std::vector<PoolSizePoint> pool_size_curve(
    const Snapshot& s, std::span<const std::pair<std::size_t, double>> grid, const ICParams& ic,
    Rng& rng);

}  // namespace abem
