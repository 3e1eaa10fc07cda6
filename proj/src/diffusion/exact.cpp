#include <cmath>
#include <cstdint>
#include <vector>

#include "abem/diffusion.hpp"
#include "abem/error.hpp"

namespace abem {

double exact_spread_bruteforce(const Snapshot& s, std::span<const NodeId> seeds, double p_a) {
    ICParams{p_a, 1, std::nullopt}.validate();
    const auto edges = s.edges();
    if (edges.size() > kBruteForceEdgeLimit) {
        throw InvalidArgument("brute-force spread refuses " + std::to_string(edges.size()) +
                              " edges (limit " + std::to_string(kBruteForceEdgeLimit) + ")");
    }

    const auto n = s.node_count();
    // adjacency[u] = (neighbour, edge number); undirected edges appear at both ends.
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adjacency(n);
    for (std::uint32_t e = 0; e < edges.size(); ++e) {
        const auto u = s.index_of(edges[e].first);
        const auto v = s.index_of(edges[e].second);
        adjacency[u].emplace_back(v, e);
        if (!s.directed()) adjacency[v].emplace_back(u, e);
    }
    std::vector<std::uint32_t> start;
    for (const auto id : seeds) start.push_back(s.index_of(id));

    const auto m = static_cast<std::uint32_t>(edges.size());
    std::vector<char> reached(n);
    std::vector<std::uint32_t> stack;
    double expected = 0.0;
    for (std::uint64_t live = 0; live < (std::uint64_t{1} << m); ++live) {
        const int k = std::popcount(live);
        const double weight = std::pow(p_a, k) * std::pow(1.0 - p_a, static_cast<int>(m) - k);
        if (weight == 0.0) continue;

        std::fill(reached.begin(), reached.end(), 0);
        stack.clear();
        std::size_t count = 0;
        for (const auto v : start) {
            if (!reached[v]) {
                reached[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            for (const auto& [v, e] : adjacency[u]) {
                if (((live >> e) & 1u) && !reached[v]) {
                    reached[v] = 1;
                    ++count;
                    stack.push_back(v);
                }
            }
        }
        expected += weight * static_cast<double>(count);
    }
    return expected;
}

}  // namespace abem
