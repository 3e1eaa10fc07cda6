#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>

#include "abem/graph.hpp"
#include "abem/rng.hpp"

namespace abem {

/// G(n, p): each of the n(n-1)/2 pairs is an edge independently with probability p.
struct ErdosRenyi {
    std::size_t n = 0;
    double p = 0.0;
};

/// Preferential attachment. Seeding convention: nodes 0..m-1 start as a
/// clique (m(m-1)/2 edges); each later node attaches to m distinct existing
/// nodes chosen with probability proportional to degree, giving exactly
/// m(n-m) + m(m-1)/2 edges.
struct BarabasiAlbert {
    std::size_t n = 0;
    std::size_t m = 1;
};

using SyntheticModel = std::variant<ErdosRenyi, BarabasiAlbert>;

/// Undirected simple graph on ids 0..n-1. Same seed gives the same graph.
/// Throws InvalidArgument for p outside [0, 1] or m outside [1, n).
Snapshot generate_synthetic(const SyntheticModel& model, std::uint64_t rng_seed,
                            std::size_t time_index = 0);

/// Expected edge count of the model (exact for BA).
double expected_edge_count(const SyntheticModel& model);

/// Edge churn between consecutive snapshots: removes round(rate * |E|) edges
/// chosen uniformly and adds the same number of uniformly chosen pairs that
/// were not edges of `s`. The node set is unchanged.
Snapshot churn_edges(const Snapshot& s, double rate, Rng& rng, std::size_t time_index);

/// `count` snapshots: the first from `model`, each later one churned from its
/// predecessor at `rate`.
DynamicNetwork generate_dynamic(const SyntheticModel& model, std::size_t count, double rate,
                                std::uint64_t rng_seed);

}  // namespace abem
