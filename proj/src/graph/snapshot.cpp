#include "abem/graph.hpp"

#include <algorithm>
#include <atomic>
#include <limits>

#include "abem/error.hpp"

namespace abem {
namespace {

std::uint64_t next_uid() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace

Snapshot Snapshot::from_edges(std::size_t time_index, std::span<const NodeId> nodes,
                              std::span<const Edge> edges, bool directed) {
    Snapshot s;
    s.time_index_ = time_index;
    s.directed_ = directed;
    s.uid_ = next_uid();

    s.ids_.assign(nodes.begin(), nodes.end());
    s.ids_.reserve(s.ids_.size() + 2 * edges.size());
    for (const auto& [u, v] : edges) {
        s.ids_.push_back(u);
        s.ids_.push_back(v);
    }
    std::sort(s.ids_.begin(), s.ids_.end());
    s.ids_.erase(std::unique(s.ids_.begin(), s.ids_.end()), s.ids_.end());
    if (s.ids_.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw InvalidArgument("snapshot exceeds 2^32 nodes");
    }

    s.index_.reserve(s.ids_.size());
    for (std::uint32_t i = 0; i < s.ids_.size(); ++i) s.index_.emplace(s.ids_[i], i);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;
    arcs.reserve(directed ? edges.size() : 2 * edges.size());
    for (const auto& [u, v] : edges) {
        if (u == v) {
            ++s.self_loops_dropped_;
            continue;
        }
        const auto iu = s.index_.at(u);
        const auto iv = s.index_.at(v);
        arcs.emplace_back(iu, iv);
        if (!directed) arcs.emplace_back(iv, iu);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    s.offsets_.assign(s.ids_.size() + 1, 0);
    for (const auto& a : arcs) ++s.offsets_[a.first + 1];
    for (std::size_t i = 1; i < s.offsets_.size(); ++i) s.offsets_[i] += s.offsets_[i - 1];
    s.targets_.resize(arcs.size());
    for (std::size_t i = 0; i < arcs.size(); ++i) s.targets_[i] = arcs[i].second;
    return s;
}

std::optional<std::uint32_t> Snapshot::find_index(NodeId v) const noexcept {
    const auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::uint32_t Snapshot::index_of(NodeId v) const {
    const auto it = index_.find(v);
    if (it == index_.end()) throw MissingNodeError(v);
    return it->second;
}

std::size_t Snapshot::degree(NodeId v) const { return degree_at(index_of(v)); }

std::vector<NodeId> Snapshot::neighbors(NodeId v) const {
    const auto i = index_of(v);
    std::vector<NodeId> out;
    out.reserve(degree_at(i));
    for (auto t : targets_of(i)) out.push_back(ids_[t]);
    return out;
}

std::vector<Edge> Snapshot::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (std::uint32_t u = 0; u < ids_.size(); ++u) {
        for (auto v : targets_of(u)) {
            if (directed_ || u < v) out.emplace_back(ids_[u], ids_[v]);
        }
    }
    return out;
}

}  // namespace abem
