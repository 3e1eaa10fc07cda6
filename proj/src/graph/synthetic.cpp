#include "abem/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "abem/error.hpp"

namespace abem {
namespace {

Snapshot erdos_renyi(const ErdosRenyi& model, Rng& rng, std::size_t time_index) {
    if (!(model.p >= 0.0 && model.p <= 1.0)) throw InvalidArgument("ER: p must lie in [0, 1]");
    std::vector<NodeId> nodes(model.n);
    std::iota(nodes.begin(), nodes.end(), NodeId{0});
    std::vector<Edge> edges;
    std::bernoulli_distribution coin(model.p);
    for (NodeId u = 0; u < model.n; ++u) {
        for (NodeId v = u + 1; v < model.n; ++v) {
            if (coin(rng)) edges.emplace_back(u, v);
        }
    }
    return Snapshot::from_edges(time_index, nodes, edges, false);
}

Snapshot barabasi_albert(const BarabasiAlbert& model, Rng& rng, std::size_t time_index) {
    const auto n = model.n;
    const auto m = model.m;
    if (m < 1 || m >= n) throw InvalidArgument("BA: need 1 <= m < n");

    std::vector<NodeId> nodes(n);
    std::iota(nodes.begin(), nodes.end(), NodeId{0});
    std::vector<Edge> edges;
    edges.reserve(m * (n - m) + m * (m - 1) / 2);
    // Each edge contributes both endpoints, so a uniform draw from this list
    // is a degree-proportional draw over nodes.
    std::vector<NodeId> endpoints;
    endpoints.reserve(2 * edges.capacity());

    for (NodeId u = 0; u < m; ++u) {
        for (NodeId v = u + 1; v < m; ++v) {
            edges.emplace_back(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    }

    std::vector<NodeId> chosen;
    for (NodeId v = m; v < n; ++v) {
        chosen.clear();
        while (chosen.size() < m) {
            // With m == 1 the very first step has no degree mass yet.
            const NodeId t = endpoints.empty() ? static_cast<NodeId>(uniform_index(rng, v))
                                               : endpoints[uniform_index(rng, endpoints.size())];
            if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
        }
        for (const auto t : chosen) {
            edges.emplace_back(t, v);
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }
    return Snapshot::from_edges(time_index, nodes, edges, false);
}

}  // namespace

Snapshot generate_synthetic(const SyntheticModel& model, std::uint64_t rng_seed,
                            std::size_t time_index) {
    Rng rng(rng_seed);
    return std::visit(
        [&](const auto& m) -> Snapshot {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ErdosRenyi>) {
                return erdos_renyi(m, rng, time_index);
            } else {
                return barabasi_albert(m, rng, time_index);
            }
        },
        model);
}

double expected_edge_count(const SyntheticModel& model) {
    return std::visit(
        [](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ErdosRenyi>) {
                return m.p * static_cast<double>(m.n) * static_cast<double>(m.n - 1) / 2.0;
            } else {
                return static_cast<double>(m.m * (m.n - m.m) + m.m * (m.m - 1) / 2);
            }
        },
        model);
}

Snapshot churn_edges(const Snapshot& s, double rate, Rng& rng, std::size_t time_index) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw InvalidArgument("churn rate must lie in [0, 1]");
    auto edges = s.edges();
    const auto count = static_cast<std::size_t>(std::llround(rate * static_cast<double>(edges.size())));
    const auto nodes = s.nodes();
    const auto n = nodes.size();
    const auto max_pairs = s.directed() ? n * (n - 1) : n * (n - 1) / 2;
    if (n < 2 || max_pairs - edges.size() < count) {
        throw InvalidArgument("graph too dense to churn at this rate");
    }

    const std::set<Edge> original(edges.begin(), edges.end());
    std::shuffle(edges.begin(), edges.end(), rng);
    edges.resize(edges.size() - count);

    std::set<Edge> added;
    while (added.size() < count) {
        auto u = nodes[uniform_index(rng, n)];
        auto v = nodes[uniform_index(rng, n)];
        if (u == v) continue;
        if (!s.directed() && u > v) std::swap(u, v);
        const Edge e{u, v};
        if (original.contains(e)) continue;
        added.insert(e);
    }
    edges.insert(edges.end(), added.begin(), added.end());
    return Snapshot::from_edges(time_index, nodes, edges, s.directed());
}

DynamicNetwork generate_dynamic(const SyntheticModel& model, std::size_t count, double rate,
                                std::uint64_t rng_seed) {
    if (count == 0) throw InvalidArgument("need at least one snapshot");
    std::vector<Snapshot> snapshots;
    snapshots.push_back(generate_synthetic(model, rng_seed, 0));
    Rng rng(derive_seed(rng_seed, "churn"));
    for (std::size_t t = 1; t < count; ++t) {
        snapshots.push_back(churn_edges(snapshots.back(), rate, rng, t));
    }
    return DynamicNetwork(std::move(snapshots));
}

}  // namespace abem
