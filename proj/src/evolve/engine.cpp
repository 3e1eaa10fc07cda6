#include <algorithm>
#include <string>

#include "abem/error.hpp"
#include "abem/evolve.hpp"

namespace abem {

EvolutionEngine::EvolutionEngine(EvolutionVariant variant, NominationParams nomination,
                                 GAConfig cfg, ICParams fitness_ic, bool common_random_numbers)
    : variant_(variant),
      nomination_(nomination),
      cfg_(cfg),
      evaluator_(fitness_ic, derive_seed(cfg.rng_seed, "fitness"), common_random_numbers),
      rng_(derive_seed(cfg.rng_seed, "operators")) {
    cfg_.validate();
    if (variant_.init_from_pool || variant_.operators_from_pool) nomination_.validate();
}

void EvolutionEngine::evaluate(const Snapshot& s) {
    std::vector<std::vector<NodeId>> pending;
    std::vector<std::size_t> where;
    for (std::size_t i = 0; i < population_.members.size(); ++i) {
        if (!population_.members[i].fitness) {
            pending.push_back(population_.members[i].genes);
            where.push_back(i);
        }
    }
    const auto results = evaluator_.evaluate_many(s, pending);
    for (std::size_t j = 0; j < where.size(); ++j) population_.members[where[j]].fitness = results[j];
}

void EvolutionEngine::note_new_genes(const Snapshot& s) {
    std::vector<NodeId> now;
    for (const auto& m : population_.members) now.insert(now.end(), m.genes.begin(), m.genes.end());
    std::sort(now.begin(), now.end());
    now.erase(std::unique(now.begin(), now.end()), now.end());
    for (const auto v : now) {
        if (!std::binary_search(present_.begin(), present_.end(), v) && s.contains(v)) {
            history_[v] = s.degree(v);
        }
    }
    present_ = std::move(now);
}

SnapshotOutcome EvolutionEngine::advance(const Snapshot& s, const TraceSink& sink,
                                         const InfluencerPool* fixed_pool) {
    const auto k = cfg_.seed_set_size;
    if (s.node_count() < k) {
        throw InvalidArgument("snapshot " + std::to_string(s.time_index()) + " has fewer than k=" +
                              std::to_string(k) + " nodes");
    }
    const bool uses_pool = variant_.init_from_pool || variant_.operators_from_pool;
    if (fixed_pool != nullptr) {
        pool_ = *fixed_pool;
    } else if (uses_pool) {
        Rng pool_rng(derive_seed(cfg_.rng_seed, "pool/" + std::to_string(s.time_index())));
        auto next = refresh_pool(s, pool_, nomination_, pool_rng);
        for (const auto& [v, entry] : next.entries()) {
            if (!pool_.contains(v)) history_[v] = entry.degree_at_nomination;
        }
        pool_ = std::move(next);
    }
    evaluator_.cache().retain_only(s.uid());

    const auto pool_ids = pool_.ids();
    const auto all_nodes = s.nodes();
    const std::span<const NodeId> init_source =
        variant_.init_from_pool ? std::span<const NodeId>(pool_ids) : all_nodes;
    const GeneSource source{
        variant_.operators_from_pool ? std::span<const NodeId>(pool_ids) : all_nodes, all_nodes};
    const std::size_t reported_pool = uses_pool ? pool_.size() : 0;

    const bool carry = variant_.recalibrate && !population_.members.empty();
    if (carry) {
        population_ = recalibrate(population_, s, pool_, history_, rng_);
        for (auto& m : population_.members) m.fitness.reset();
    } else {
        population_ = init_population(init_source, all_nodes, cfg_, rng_);
        present_.clear();
    }
    population_.generation = 0;
    note_new_genes(s);
    evaluate(s);

    const auto record = [&](std::size_t generation) {
        double total = 0.0;
        for (const auto& m : population_.members) total += m.fitness_value();
        GenerationRecord r{snapshots_seen_, s.time_index(), generation,
                           population_.best_ever.fitness_value(),
                           total / static_cast<double>(population_.members.size()), reported_pool};
        if (sink) sink(r);
    };
    const auto update_best = [&]() {
        bool improved = false;
        for (const auto& m : population_.members) {
            if (!population_.best_ever.fitness ||
                m.fitness_value() > population_.best_ever.fitness_value()) {
                population_.best_ever = m;
                improved = true;
            }
        }
        return improved;
    };

    population_.best_ever = SeedSet{};
    update_best();
    record(0);

    std::size_t generation = 1;
    std::size_t stale = 0;
    for (; generation < cfg_.generations; ++generation) {
        if (cfg_.convergence_window > 0 && stale >= cfg_.convergence_window) break;
        population_.generation = generation;
        if (variant_.recalibrate) population_ = recalibrate(population_, s, pool_, history_, rng_);
        population_ = select(population_, std::min(cfg_.population_size, population_.members.size()),
                             rng_);
        population_ = crossover(population_, source, cfg_.crossover_rate, rng_);
        population_ = mutate(population_, source, cfg_.mutation_rate, rng_);
        note_new_genes(s);
        evaluate(s);
        stale = update_best() ? 0 : stale + 1;
        record(generation);
    }

    ++snapshots_seen_;
    return SnapshotOutcome{s.time_index(), population_.best_ever, generation, reported_pool};
}

SeedingResult run_abem(const DynamicNetwork& net, const NominationParams& nomination,
                       const GAConfig& cfg, const ICParams& ic, const TraceSink& sink,
                       bool common_random_numbers) {
    EvolutionEngine engine(kAbem, nomination, cfg, ic, common_random_numbers);
    SeedingResult result;
    const TraceSink collect = [&](const GenerationRecord& r) {
        result.trace.push_back(r);
        if (sink) sink(r);
    };
    for (const auto& s : net.snapshots()) result.snapshots.push_back(engine.advance(s, collect));
    return result;
}

SeedingResult run_abem(const Snapshot& s, const NominationParams& nomination, const GAConfig& cfg,
                       const ICParams& ic, const TraceSink& sink, bool common_random_numbers) {
    return run_abem(DynamicNetwork({s}), nomination, cfg, ic, sink, common_random_numbers);
}

}  // namespace abem
