#include <algorithm>
#include <bit>
#include <mutex>

#include <tbb/parallel_for.h>

#include "abem/diffusion.hpp"

namespace abem {

std::size_t FitnessCache::KeyHash::operator()(const Key& k) const noexcept {
    std::uint64_t h = mix_seed(k.snapshot, k.world_seed);
    h = mix_seed(h, std::bit_cast<std::uint64_t>(k.p_a));
    h = mix_seed(h, k.mc_runs);
    for (const auto g : k.genes) h = mix_seed(h, g);
    return static_cast<std::size_t>(h);
}

std::optional<SpreadEstimate> FitnessCache::find(std::uint64_t snapshot_uid,
                                                 std::span<const NodeId> sorted_genes, double p_a,
                                                 std::size_t mc_runs,
                                                 std::uint64_t world_seed) const {
    const Key key{snapshot_uid, {sorted_genes.begin(), sorted_genes.end()}, p_a, mc_runs, world_seed};
    std::shared_lock lock(mutex_);
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        misses_.fetch_add(1, std::memory_order_relaxed);
        return std::nullopt;
    }
    hits_.fetch_add(1, std::memory_order_relaxed);
    return it->second;
}

void FitnessCache::insert(std::uint64_t snapshot_uid, std::span<const NodeId> sorted_genes,
                          double p_a, std::size_t mc_runs, std::uint64_t world_seed,
                          const SpreadEstimate& value) {
    Key key{snapshot_uid, {sorted_genes.begin(), sorted_genes.end()}, p_a, mc_runs, world_seed};
    std::unique_lock lock(mutex_);
    entries_.try_emplace(std::move(key), value);
}

void FitnessCache::retain_only(std::uint64_t snapshot_uid) {
    std::unique_lock lock(mutex_);
    std::erase_if(entries_, [&](const auto& kv) { return kv.first.snapshot != snapshot_uid; });
}

void FitnessCache::clear() {
    std::unique_lock lock(mutex_);
    entries_.clear();
}

std::size_t FitnessCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

SpreadEvaluator::SpreadEvaluator(ICParams params, std::uint64_t base_seed,
                                 bool common_random_numbers, std::shared_ptr<FitnessCache> cache)
    : params_(params), base_seed_(base_seed), crn_(common_random_numbers), cache_(std::move(cache)) {
    params_.validate();
}

std::uint64_t SpreadEvaluator::world_seed_for(const Snapshot& s,
                                              std::span<const NodeId> sorted_genes) const {
    const auto per_snapshot = mix_seed(base_seed_, s.time_index());
    if (crn_) return per_snapshot;
    std::uint64_t h = per_snapshot;
    for (const auto g : sorted_genes) h = mix_seed(h, g);
    return h;
}

SpreadEstimate SpreadEvaluator::evaluate(const Snapshot& s, std::span<const NodeId> genes) const {
    std::vector<NodeId> sorted(genes.begin(), genes.end());
    std::sort(sorted.begin(), sorted.end());
    const auto world_seed = world_seed_for(s, sorted);
    if (auto hit = cache_->find(s.uid(), sorted, params_.activation_probability, params_.mc_runs,
                                world_seed)) {
        return *hit;
    }
    const auto est = estimate_spread_on_worlds(s, sorted, params_, world_seed);
    cache_->insert(s.uid(), sorted, params_.activation_probability, params_.mc_runs, world_seed,
                   est);
    return est;
}

std::vector<SpreadEstimate> SpreadEvaluator::evaluate_many(
    const Snapshot& s, std::span<const std::vector<NodeId>> seed_sets) const {
    std::vector<SpreadEstimate> out(seed_sets.size());
    tbb::parallel_for(std::size_t{0}, seed_sets.size(),
                      [&](std::size_t i) { out[i] = evaluate(s, seed_sets[i]); });
    return out;
}

}  // namespace abem
