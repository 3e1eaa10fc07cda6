#include <algorithm>
#include <numeric>

#include "abem/error.hpp"
#include "abem/evolve.hpp"

namespace abem {
namespace {

bool has(const std::vector<NodeId>& genes, NodeId v) {
    return std::find(genes.begin(), genes.end(), v) != genes.end();
}

// Uniform draw from `from` minus `exclude`: a few rejection rounds, then an
// exact pass over the eligible nodes.
std::optional<NodeId> draw_excluding(std::span<const NodeId> from,
                                     const std::vector<NodeId>& exclude, Rng& rng) {
    if (from.empty()) return std::nullopt;
    for (int attempt = 0; attempt < 16; ++attempt) {
        const auto c = from[uniform_index(rng, from.size())];
        if (!has(exclude, c)) return c;
    }
    std::vector<NodeId> eligible;
    for (const auto c : from) {
        if (!has(exclude, c)) eligible.push_back(c);
    }
    if (eligible.empty()) return std::nullopt;
    return eligible[uniform_index(rng, eligible.size())];
}

std::optional<NodeId> draw_gene(const GeneSource& source, const std::vector<NodeId>& exclude,
                                Rng& rng) {
    if (auto c = draw_excluding(source.candidates, exclude, rng)) return c;
    return draw_excluding(source.fallback, exclude, rng);
}

std::vector<NodeId> dedup_in_order(std::span<const NodeId> genes) {
    std::vector<NodeId> out;
    out.reserve(genes.size());
    for (const auto g : genes) {
        if (!has(out, g)) out.push_back(g);
    }
    return out;
}

// Indices sorted by fitness (descending), ties by position.
std::vector<std::size_t> rank_by_fitness(const std::vector<SeedSet>& members) {
    std::vector<std::size_t> order(members.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return members[a].fitness_value() > members[b].fitness_value();
    });
    return order;
}

}  // namespace

bool SeedSet::contains(NodeId v) const noexcept { return has(genes, v); }

void GAConfig::validate() const {
    if (population_size < 1) throw InvalidArgument("population size must be at least 1");
    if (generations < 1) throw InvalidArgument("generation count must be at least 1");
    if (seed_set_size < 1) throw InvalidArgument("seed set size must be at least 1");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
        throw InvalidArgument("crossover rate must lie in [0, 1]");
    }
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
        throw InvalidArgument("mutation rate must lie in [0, 1]");
    }
}

Population init_population(std::span<const NodeId> pool, std::span<const NodeId> fallback,
                           const GAConfig& cfg, Rng& rng) {
    cfg.validate();
    const auto k = cfg.seed_set_size;
    std::vector<NodeId> universe(pool.begin(), pool.end());
    universe.insert(universe.end(), fallback.begin(), fallback.end());
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    if (universe.size() < k) {
        throw InvalidArgument("only " + std::to_string(universe.size()) +
                              " candidate nodes for seed sets of size " + std::to_string(k));
    }

    Population pop;
    pop.members.reserve(cfg.population_size);
    for (std::size_t m = 0; m < cfg.population_size; ++m) {
        SeedSet s;
        if (pool.size() >= k) {
            while (s.genes.size() < k) s.genes.push_back(*draw_excluding(pool, s.genes, rng));
        } else {
            s.genes = dedup_in_order(pool);
            repair(s.genes, k, GeneSource{{}, fallback}, rng);
        }
        std::sort(s.genes.begin(), s.genes.end());
        pop.members.push_back(std::move(s));
    }
    return pop;
}

std::vector<double> selection_rates(std::span<const double> fitnesses) {
    if (fitnesses.empty()) return {};
    double total = 0.0;
    for (const auto f : fitnesses) {
        if (!(f >= 0.0)) throw InvalidArgument("fitness values must be non-negative");
        total += f;
    }
    std::vector<double> rates(fitnesses.size());
    if (total <= 0.0) {
        std::fill(rates.begin(), rates.end(), 1.0 / static_cast<double>(fitnesses.size()));
        return rates;
    }
    for (std::size_t i = 0; i < rates.size(); ++i) rates[i] = fitnesses[i] / total;
    return rates;
}

std::vector<char> selection_draw(std::span<const double> rates, Rng& rng) {
    std::vector<char> kept(rates.size(), 0);
    for (std::size_t i = 0; i < rates.size(); ++i) kept[i] = uniform_unit(rng) < rates[i];
    return kept;
}

Population select(const Population& augmented, std::size_t target_size, Rng& rng) {
    const auto& members = augmented.members;
    if (members.size() < target_size) {
        throw InvalidArgument("selection needs at least target_size members");
    }
    if (members.size() == target_size) return augmented;

    std::vector<double> fitness;
    fitness.reserve(members.size());
    for (const auto& m : members) fitness.push_back(m.fitness_value());
    const auto rates = selection_rates(fitness);

    auto kept = selection_draw(rates, rng);
    const auto ranked = rank_by_fitness(members);
    kept[ranked.front()] = 1;  // the fittest member always survives
    auto count = static_cast<std::size_t>(std::count(kept.begin(), kept.end(), 1));

    if (count < target_size) {
        for (const auto i : ranked) {
            if (count == target_size) break;
            if (!kept[i]) {
                kept[i] = 1;
                ++count;
            }
        }
    } else if (count > target_size) {
        std::size_t retained = 0;
        for (const auto i : ranked) {
            if (!kept[i]) continue;
            if (retained < target_size) {
                ++retained;
            } else {
                kept[i] = 0;
            }
        }
    }

    Population out;
    out.generation = augmented.generation;
    out.best_ever = augmented.best_ever;
    out.members.reserve(target_size);
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (kept[i]) out.members.push_back(members[i]);
    }
    return out;
}

std::pair<std::vector<NodeId>, std::vector<NodeId>> one_point_crossover(
    std::span<const NodeId> first, std::span<const NodeId> second, std::size_t slice) {
    if (first.size() != second.size()) throw InvalidArgument("parents differ in size");
    if (slice > first.size()) throw InvalidArgument("slicing point beyond chromosome");
    std::vector<NodeId> a(first.begin(), first.begin() + slice);
    a.insert(a.end(), second.begin() + slice, second.end());
    std::vector<NodeId> b(second.begin(), second.begin() + slice);
    b.insert(b.end(), first.begin() + slice, first.end());
    return {dedup_in_order(a), dedup_in_order(b)};
}

void repair(std::vector<NodeId>& genes, std::size_t k, const GeneSource& source, Rng& rng) {
    while (genes.size() < k) {
        const auto g = draw_gene(source, genes, rng);
        if (!g) throw InvalidArgument("no node left to repair a seed set");
        genes.push_back(*g);
    }
}

Population crossover(const Population& pop, const GeneSource& source, double p_c, Rng& rng) {
    Population out = pop;
    const auto& parents = pop.members;
    if (parents.size() < 2) return out;
    const auto ranked = rank_by_fitness(parents);

    for (std::size_t m = 0; m < parents.size(); ++m) {
        if (!(uniform_unit(rng) < p_c)) continue;
        const auto partner = ranked[0] != m ? ranked[0] : ranked[1];
        const auto& a = parents[m].genes;
        const auto& b = parents[partner].genes;
        const auto k = a.size();
        const std::size_t slice = k >= 2 ? 1 + uniform_index(rng, k - 1) : 0;
        auto [first, second] = one_point_crossover(a, b, slice);
        repair(first, k, source, rng);
        repair(second, k, source, rng);
        out.members.push_back(SeedSet{std::move(first), std::nullopt});
        out.members.push_back(SeedSet{std::move(second), std::nullopt});
    }
    return out;
}

Population mutate(const Population& pop, const GeneSource& source, double p_m, Rng& rng) {
    Population out = pop;
    for (auto& member : out.members) {
        bool changed = false;
        for (std::size_t i = 0; i < member.genes.size(); ++i) {
            if (!(uniform_unit(rng) < p_m)) continue;
            if (const auto c = draw_excluding(source.candidates, member.genes, rng)) {
                member.genes[i] = *c;
                changed = true;
            }
        }
        if (changed) member.fitness.reset();
    }
    return out;
}

double degree_change_rate(std::size_t current_degree, std::optional<std::size_t> prior_degree) {
    if (!prior_degree || *prior_degree == 0) return 0.0;
    const double ratio = static_cast<double>(current_degree) / static_cast<double>(*prior_degree);
    return std::clamp(1.0 - ratio, 0.0, 1.0);
}

Population recalibrate(const Population& pop, const Snapshot& s, const InfluencerPool& pool,
                       const DegreeHistory& degree_history, Rng& rng) {
    const auto pool_ids = pool.ids();
    const GeneSource source{pool_ids, s.nodes()};
    Population out = pop;
    for (auto& member : out.members) {
        bool changed = false;
        for (std::size_t i = 0; i < member.genes.size(); ++i) {
            const auto v = member.genes[i];
            bool replace = false;
            if (!s.contains(v)) {
                replace = true;
            } else if (!pool.contains(v)) {
                const auto it = degree_history.find(v);
                const auto prior = it == degree_history.end()
                                       ? std::nullopt
                                       : std::optional<std::size_t>(it->second);
                const double p_d = degree_change_rate(s.degree(v), prior);
                replace = p_d > 0.0 && uniform_unit(rng) < p_d;
            }
            if (!replace) continue;
            const auto c = draw_gene(source, member.genes, rng);
            if (!c) {
                // a degraded gene with no substitute stays put
                if (s.contains(v)) continue;
                throw InvalidArgument("snapshot too small to re-calibrate a seed set");
            }
            member.genes[i] = *c;
            changed = true;
        }
        if (changed) member.fitness.reset();
    }
    return out;
}

bool valid_chromosome(const SeedSet& seeds, std::size_t k, const Snapshot& s) {
    if (seeds.genes.size() != k) return false;
    auto sorted = seeds.genes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    return std::all_of(sorted.begin(), sorted.end(), [&](NodeId v) { return s.contains(v); });
}

}  // namespace abem
