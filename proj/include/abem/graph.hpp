#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace abem {

/// Dataset-local node identifier. Ids are kept exactly as they appear in the
/// input; they need not be contiguous.
using NodeId = std::uint64_t;
using Edge = std::pair<NodeId, NodeId>;

/// One immutable graph G(t).
///
/// Nodes are stored sorted by id and addressed internally by their dense
/// position ("index"). Adjacency is CSR over indices; each list is sorted and
/// duplicate free. An undirected snapshot stores every edge in both
/// directions, so `arc_count()` is twice `edge_count()` there.
///
/// Arc ids (positions in the CSR target array) are stable for the lifetime of
/// the snapshot and key the per-edge coins of the cascade simulator.
class Snapshot {
public:
    Snapshot() = default;

    /// Builds a snapshot from a node list and an edge list. Endpoints missing
    /// from `nodes` are added. Self-loops are dropped and counted; duplicate
    /// edges collapse. For undirected input (u, v) and (v, u) are one edge.
    static Snapshot from_edges(std::size_t time_index, std::span<const NodeId> nodes,
                               std::span<const Edge> edges, bool directed);

    std::size_t time_index() const noexcept { return time_index_; }
    bool directed() const noexcept { return directed_; }

    /// Identity shared by copies of this snapshot; distinct for every
    /// independently constructed one. Used to key fitness caches.
    std::uint64_t uid() const noexcept { return uid_; }

    std::size_t node_count() const noexcept { return ids_.size(); }
    /// Undirected: number of unordered pairs. Directed: number of arcs.
    std::size_t edge_count() const noexcept {
        return directed_ ? targets_.size() : targets_.size() / 2;
    }
    std::size_t arc_count() const noexcept { return targets_.size(); }
    std::size_t self_loops_dropped() const noexcept { return self_loops_dropped_; }

    std::span<const NodeId> nodes() const noexcept { return ids_; }
    bool contains(NodeId v) const noexcept { return index_.contains(v); }

    /// Out-degree (degree when undirected). Throws MissingNodeError.
    std::size_t degree(NodeId v) const;
    /// Sorted neighbour ids. Throws MissingNodeError.
    std::vector<NodeId> neighbors(NodeId v) const;

    /// Edge list; undirected edges are reported once as (min, max). Sorted.
    std::vector<Edge> edges() const;

    // Index-level access for inner loops.
    std::optional<std::uint32_t> find_index(NodeId v) const noexcept;
    std::uint32_t index_of(NodeId v) const;  // throws MissingNodeError
    NodeId id_at(std::uint32_t index) const noexcept { return ids_[index]; }
    std::size_t degree_at(std::uint32_t index) const noexcept {
        return offsets_[index + 1] - offsets_[index];
    }
    std::uint32_t arc_begin(std::uint32_t index) const noexcept { return offsets_[index]; }
    std::uint32_t arc_end(std::uint32_t index) const noexcept { return offsets_[index + 1]; }
    std::uint32_t arc_target(std::uint32_t arc) const noexcept { return targets_[arc]; }
    std::span<const std::uint32_t> targets_of(std::uint32_t index) const noexcept {
        return {targets_.data() + offsets_[index], targets_.data() + offsets_[index + 1]};
    }

    /// Same topology (nodes, adjacency, directedness) and time index.
    friend bool operator==(const Snapshot& a, const Snapshot& b) noexcept {
        return a.time_index_ == b.time_index_ && a.same_topology(b);
    }
    bool same_topology(const Snapshot& other) const noexcept {
        return directed_ == other.directed_ && ids_ == other.ids_ &&
               offsets_ == other.offsets_ && targets_ == other.targets_;
    }

private:
    std::size_t time_index_ = 0;
    bool directed_ = false;
    std::uint64_t uid_ = 0;
    std::size_t self_loops_dropped_ = 0;
    std::vector<NodeId> ids_;
    std::unordered_map<NodeId, std::uint32_t> index_;
    std::vector<std::uint32_t> offsets_{0};
    std::vector<std::uint32_t> targets_;
};

/// d_i(t) = |Γ_i(t)|.
inline std::size_t degree(const Snapshot& s, NodeId v) { return s.degree(v); }
inline std::vector<NodeId> neighbors(const Snapshot& s, NodeId v) { return s.neighbors(v); }

/// Change between two snapshots. Undirected edges are stored as (min, max).
struct SnapshotDelta {
    std::vector<NodeId> nodes_added;
    std::vector<NodeId> nodes_removed;
    std::vector<Edge> edges_added;
    std::vector<Edge> edges_removed;

    bool empty() const noexcept {
        return nodes_added.empty() && nodes_removed.empty() && edges_added.empty() &&
               edges_removed.empty();
    }
    friend bool operator==(const SnapshotDelta&, const SnapshotDelta&) = default;
};

SnapshotDelta diff(const Snapshot& earlier, const Snapshot& later);

/// Reconstructs the later snapshot. Directedness follows `earlier`.
Snapshot apply(const Snapshot& earlier, const SnapshotDelta& delta, std::size_t time_index);

/// Ordered snapshot sequence G_D with the deltas between neighbours.
class DynamicNetwork {
public:
    DynamicNetwork() = default;
    /// Throws InvalidArgument unless time indices strictly increase.
    explicit DynamicNetwork(std::vector<Snapshot> snapshots);

    std::size_t size() const noexcept { return snapshots_.size(); }
    bool empty() const noexcept { return snapshots_.empty(); }
    const Snapshot& operator[](std::size_t i) const { return snapshots_.at(i); }
    std::span<const Snapshot> snapshots() const noexcept { return snapshots_; }
    std::span<const SnapshotDelta> deltas() const noexcept { return deltas_; }

private:
    std::vector<Snapshot> snapshots_;
    std::vector<SnapshotDelta> deltas_;
};

}  // namespace abem
