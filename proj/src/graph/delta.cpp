#include <algorithm>
#include <iterator>

#include "abem/error.hpp"
#include "abem/graph.hpp"

namespace abem {

SnapshotDelta diff(const Snapshot& earlier, const Snapshot& later) {
    SnapshotDelta d;
    const auto a_nodes = earlier.nodes();
    const auto b_nodes = later.nodes();
    std::set_difference(b_nodes.begin(), b_nodes.end(), a_nodes.begin(), a_nodes.end(),
                        std::back_inserter(d.nodes_added));
    std::set_difference(a_nodes.begin(), a_nodes.end(), b_nodes.begin(), b_nodes.end(),
                        std::back_inserter(d.nodes_removed));

    const auto a_edges = earlier.edges();
    const auto b_edges = later.edges();
    std::set_difference(b_edges.begin(), b_edges.end(), a_edges.begin(), a_edges.end(),
                        std::back_inserter(d.edges_added));
    std::set_difference(a_edges.begin(), a_edges.end(), b_edges.begin(), b_edges.end(),
                        std::back_inserter(d.edges_removed));
    return d;
}

Snapshot apply(const Snapshot& earlier, const SnapshotDelta& delta, std::size_t time_index) {
    std::vector<NodeId> nodes;
    const auto base = earlier.nodes();
    std::set_difference(base.begin(), base.end(), delta.nodes_removed.begin(),
                        delta.nodes_removed.end(), std::back_inserter(nodes));
    nodes.insert(nodes.end(), delta.nodes_added.begin(), delta.nodes_added.end());

    std::vector<Edge> edges;
    const auto base_edges = earlier.edges();
    std::set_difference(base_edges.begin(), base_edges.end(), delta.edges_removed.begin(),
                        delta.edges_removed.end(), std::back_inserter(edges));
    edges.insert(edges.end(), delta.edges_added.begin(), delta.edges_added.end());

    std::sort(nodes.begin(), nodes.end());
    for (const auto& [u, v] : edges) {
        if (!std::binary_search(nodes.begin(), nodes.end(), u) ||
            !std::binary_search(nodes.begin(), nodes.end(), v)) {
            throw InvalidArgument("delta leaves an edge with a removed endpoint");
        }
    }
    return Snapshot::from_edges(time_index, nodes, edges, earlier.directed());
}

DynamicNetwork::DynamicNetwork(std::vector<Snapshot> snapshots)
    : snapshots_(std::move(snapshots)) {
    for (std::size_t i = 1; i < snapshots_.size(); ++i) {
        if (snapshots_[i].time_index() <= snapshots_[i - 1].time_index()) {
            throw InvalidArgument("snapshot time indices must strictly increase");
        }
        deltas_.push_back(diff(snapshots_[i - 1], snapshots_[i]));
    }
}

}  // namespace abem
