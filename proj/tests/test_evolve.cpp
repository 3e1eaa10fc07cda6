#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "abem/error.hpp"
#include "abem/evolve.hpp"
#include "abem/synthetic.hpp"
#include "oracles.hpp"

using namespace abem;

namespace {

std::vector<NodeId> iota_ids(NodeId from, NodeId to) {
    std::vector<NodeId> out;
    for (NodeId v = from; v < to; ++v) out.push_back(v);
    return out;
}

SeedSet scored(std::vector<NodeId> genes, double f) {
    return SeedSet{std::move(genes), SpreadEstimate{f, 0.0, 1}};
}

GAConfig small_config(std::size_t k, std::size_t pop = 10) {
    GAConfig cfg;
    cfg.seed_set_size = k;
    cfg.population_size = pop;
    return cfg;
}

}  // namespace

TEST(Init, PoolOfSizeKGivesIdenticalChromosomes) {
    const auto pool = iota_ids(10, 13);
    const auto all = iota_ids(0, 50);
    Rng rng(1);
    const auto pop = init_population(pool, all, small_config(3), rng);
    ASSERT_EQ(pop.members.size(), 10u);
    for (const auto& m : pop.members) {
        auto g = m.genes;
        std::sort(g.begin(), g.end());
        EXPECT_EQ(g, pool);
    }
}

TEST(Init, SmallPoolToppedUpFromFallback) {
    const std::vector<NodeId> pool{7};
    const auto all = iota_ids(0, 20);
    Rng rng(2);
    const auto pop = init_population(pool, all, small_config(4), rng);
    for (const auto& m : pop.members) {
        EXPECT_EQ(m.genes.size(), 4u);
        EXPECT_TRUE(m.contains(7));
        EXPECT_EQ(std::set<NodeId>(m.genes.begin(), m.genes.end()).size(), 4u);
    }
    EXPECT_THROW(init_population(std::vector<NodeId>{1}, std::vector<NodeId>{2}, small_config(3), rng),
                 InvalidArgument);
}

TEST(Init, DefaultsAndDeterminism) {
    GAConfig cfg;
    EXPECT_EQ(cfg.population_size, 50u);
    EXPECT_EQ(cfg.generations, 1000u);
    EXPECT_EQ(cfg.crossover_rate, 1.0);
    EXPECT_EQ(cfg.mutation_rate, 0.1);
    const auto pool = iota_ids(0, 30);
    Rng a(5), b(5);
    const auto pa = init_population(pool, pool, cfg, a);
    const auto pb = init_population(pool, pool, cfg, b);
    ASSERT_EQ(pa.members.size(), 50u);
    for (std::size_t i = 0; i < pa.members.size(); ++i) EXPECT_EQ(pa.members[i].genes, pb.members[i].genes);
}

TEST(SelectionRates, Examples) {
    auto r = selection_rates(std::vector<double>{3, 1});
    EXPECT_DOUBLE_EQ(r[0], 0.75);
    EXPECT_DOUBLE_EQ(r[1], 0.25);
    r = selection_rates(std::vector<double>{2, 3, 5});
    EXPECT_DOUBLE_EQ(r[0], 0.2);
    EXPECT_DOUBLE_EQ(r[1], 0.3);
    EXPECT_DOUBLE_EQ(r[2], 0.5);
    r = selection_rates(std::vector<double>{4, 4, 4, 4});
    for (double x : r) EXPECT_DOUBLE_EQ(x, 0.25);
    r = selection_rates(std::vector<double>{0, 0});
    for (double x : r) EXPECT_DOUBLE_EQ(x, 0.5);
    EXPECT_THROW(selection_rates(std::vector<double>{1, -1}), InvalidArgument);
}

TEST(Select, SizeEqualTargetIsUnchanged) {
    Population p;
    p.members = {scored({1}, 1), scored({2}, 2), scored({3}, 3)};
    Rng rng(1);
    const auto out = select(p, 3, rng);
    ASSERT_EQ(out.members.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(out.members[i].genes, p.members[i].genes);
}

TEST(Select, BestAlwaysSurvives) {
    Rng rng(3);
    for (int t = 0; t < 500; ++t) {
        Population p;
        const std::size_t n = 4 + rng() % 20;
        for (std::size_t i = 0; i < n; ++i) p.members.push_back(scored({i}, uniform_unit(rng) * 10));
        const auto best = std::max_element(p.members.begin(), p.members.end(), [](auto& a, auto& b) {
                              return a.fitness_value() < b.fitness_value();
                          })->genes;
        const std::size_t target = 1 + rng() % n;
        const auto out = select(p, target, rng);
        ASSERT_EQ(out.members.size(), target);
        EXPECT_TRUE(std::any_of(out.members.begin(), out.members.end(),
                                [&](const SeedSet& m) { return m.genes == best; }));
    }
}

TEST(Select, KeepFrequencyMatchesRateBeforeFill) {
    const std::vector<double> fitness{3, 1};
    const auto rates = selection_rates(fitness);
    Rng rng(8);
    int kept[2] = {0, 0};
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const auto k = selection_draw(rates, rng);
        kept[0] += k[0];
        kept[1] += k[1];
    }
    EXPECT_NEAR(kept[0] / double(trials), 0.75, 0.02);
    EXPECT_NEAR(kept[1] / double(trials), 0.25, 0.02);
}

TEST(Select, SurvivorsStartFromTheDraw) {
    Population p;
    for (NodeId i = 0; i < 12; ++i) p.members.push_back(scored({i}, 1.0 + static_cast<double>(i % 4)));
    std::vector<double> f;
    for (const auto& m : p.members) f.push_back(m.fitness_value());
    const auto rates = selection_rates(f);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng a(seed), b(seed);
        const auto draw = selection_draw(rates, a);
        const auto drawn = static_cast<std::size_t>(std::count(draw.begin(), draw.end(), 1));
        const auto out = select(p, 6, b);
        if (drawn > 6) continue;
        for (std::size_t i = 0; i < draw.size(); ++i) {
            if (!draw[i]) continue;
            EXPECT_TRUE(std::any_of(out.members.begin(), out.members.end(),
                                    [&](const SeedSet& m) { return m.genes == p.members[i].genes; }));
        }
    }
}

TEST(Crossover, OnePointExamples) {
    auto [a, b] = one_point_crossover(std::vector<NodeId>{1, 2, 3, 4}, std::vector<NodeId>{5, 6, 7, 8}, 2);
    EXPECT_EQ(a, (std::vector<NodeId>{1, 2, 7, 8}));
    EXPECT_EQ(b, (std::vector<NodeId>{5, 6, 3, 4}));
    auto [c, d] = one_point_crossover(std::vector<NodeId>{1, 2, 3}, std::vector<NodeId>{3, 4, 5}, 1);
    EXPECT_EQ(c, (std::vector<NodeId>{1, 4, 5}));
    EXPECT_EQ(d, (std::vector<NodeId>{3, 2}));
    std::vector<NodeId> repaired = d;
    const std::vector<NodeId> pool{9};
    Rng rng(1);
    repair(repaired, 3, GeneSource{pool, {}}, rng);
    EXPECT_EQ(repaired, (std::vector<NodeId>{3, 2, 9}));
}

TEST(Crossover, ZeroRateIsIdentity) {
    Population p;
    p.members = {scored({1, 2}, 1), scored({3, 4}, 2)};
    const auto pool = iota_ids(0, 10);
    Rng rng(1);
    const auto out = crossover(p, GeneSource{pool, pool}, 0.0, rng);
    ASSERT_EQ(out.members.size(), 2u);
    EXPECT_EQ(out.members[0].genes, p.members[0].genes);
}

TEST(Crossover, AppendsTwoOffspringPerCrossing) {
    Population p;
    p.members = {scored({1, 2, 3}, 1), scored({4, 5, 6}, 5), scored({7, 8, 9}, 2)};
    const auto pool = iota_ids(0, 20);
    Rng rng(2);
    const auto out = crossover(p, GeneSource{pool, pool}, 1.0, rng);
    ASSERT_EQ(out.members.size(), 9u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(out.members[i].genes, p.members[i].genes);
    for (std::size_t i = 3; i < 9; ++i) {
        EXPECT_EQ(out.members[i].genes.size(), 3u);
        EXPECT_FALSE(out.members[i].fitness);
    }
    // member 1 is the fittest, so it pairs with member 2 (next best)
    const auto& o = out.members[5].genes;
    EXPECT_TRUE(o[0] == 4 && (o[2] == 9));
}

TEST(Crossover, RepairFallsBackWhenPoolExhausted) {
    std::vector<NodeId> genes{1, 2};
    const std::vector<NodeId> pool{1, 2};
    const auto all = iota_ids(0, 5);
    Rng rng(1);
    repair(genes, 4, GeneSource{pool, all}, rng);
    EXPECT_EQ(genes.size(), 4u);
    std::vector<NodeId> stuck{1, 2};
    EXPECT_THROW(repair(stuck, 3, GeneSource{pool, pool}, rng), InvalidArgument);
}

TEST(Mutate, ZeroAndOneRates) {
    Population p;
    p.members = {scored({1, 2, 3}, 1)};
    const std::vector<NodeId> pool{10, 11, 12, 13};
    Rng rng(3);
    EXPECT_EQ(mutate(p, GeneSource{pool, {}}, 0.0, rng).members[0].genes, p.members[0].genes);
    const auto all = mutate(p, GeneSource{pool, {}}, 1.0, rng).members[0];
    for (auto g : all.genes) EXPECT_GE(g, 10u);
    EXPECT_FALSE(all.fitness);
    // no eligible candidate: unchanged
    const std::vector<NodeId> inside{1, 2, 3};
    EXPECT_EQ(mutate(p, GeneSource{inside, {}}, 1.0, rng).members[0].genes, p.members[0].genes);
}

TEST(Mutate, GeneFrequencyMatchesRate) {
    Population p;
    for (NodeId i = 0; i < 2000; ++i) p.members.push_back(scored({5 * i, 5 * i + 1, 5 * i + 2, 5 * i + 3, 5 * i + 4}, 1));
    const std::vector<NodeId> pool = iota_ids(100000, 100500);
    Rng rng(4);
    const auto out = mutate(p, GeneSource{pool, {}}, 0.1, rng);
    std::size_t changed = 0;
    for (std::size_t m = 0; m < p.members.size(); ++m)
        for (std::size_t g = 0; g < 5; ++g) changed += out.members[m].genes[g] != p.members[m].genes[g];
    EXPECT_NEAR(changed / 10000.0, 0.1, 0.01);
}

TEST(Recalibrate, DeletedGeneAlwaysReplaced) {
    const auto s = oracle::to_snapshot(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
    Population p;
    p.members = {scored({0, 99}, 3)};
    InfluencerPool pool;
    pool.insert(2, {});
    Rng rng(1);
    for (int t = 0; t < 50; ++t) {
        const auto out = recalibrate(p, s, pool, {}, rng);
        EXPECT_EQ(out.members[0].genes, (std::vector<NodeId>{0, 2}));
        EXPECT_FALSE(out.members[0].fitness);
    }
}

TEST(Recalibrate, UnchangedDegreeNeverReplaced) {
    const auto s = oracle::to_snapshot(6, {{0, 1}, {0, 2}, {0, 3}, {4, 5}});
    Population p;
    p.members = {scored({0, 4}, 3)};
    const DegreeHistory history{{0, 3}, {4, 1}};
    InfluencerPool pool;
    pool.insert(5, {});
    Rng rng(1);
    for (int t = 0; t < 200; ++t) {
        const auto out = recalibrate(p, s, pool, history, rng);
        EXPECT_EQ(out.members[0].genes, p.members[0].genes);
        EXPECT_TRUE(out.members[0].fitness);
    }
}

TEST(Recalibrate, HalvedDegreeReplacedHalfTheTime) {
    const auto s = oracle::to_snapshot(8, {{0, 1}, {0, 2}, {3, 4}, {5, 6}});
    Population p;
    p.members = {scored({0}, 1)};
    const DegreeHistory history{{0, 4}};
    InfluencerPool pool;
    pool.insert(7, {});
    Rng rng(6);
    int replaced = 0;
    for (int t = 0; t < 10000; ++t) replaced += recalibrate(p, s, pool, history, rng).members[0].genes[0] != 0;
    EXPECT_NEAR(replaced / 10000.0, 0.5, 0.02);
    EXPECT_DOUBLE_EQ(degree_change_rate(2, 4), 0.5);
    EXPECT_DOUBLE_EQ(degree_change_rate(6, 4), 0.0);
    EXPECT_DOUBLE_EQ(degree_change_rate(3, std::nullopt), 0.0);
}

TEST(Recalibrate, EmptyPoolFallsBackToSnapshotNodes) {
    const auto s = oracle::to_snapshot(4, {{0, 1}, {2, 3}});
    Population p;
    p.members = {scored({0, 50}, 1)};
    Rng rng(1);
    const auto out = recalibrate(p, s, {}, {}, rng);
    EXPECT_TRUE(valid_chromosome(out.members[0], 2, s));
}

TEST(Engine, KEqualsNodeCount) {
    const auto s = oracle::to_snapshot(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    GAConfig cfg = small_config(5, 6);
    cfg.generations = 5;
    const auto result = run_abem(s, NominationParams{1, 0.5, {1.0, 10, 2}}, cfg, {1.0, 20, std::nullopt});
    ASSERT_EQ(result.snapshots.size(), 1u);
    auto genes = result.snapshots[0].best.genes;
    std::sort(genes.begin(), genes.end());
    EXPECT_EQ(genes, iota_ids(0, 5));
    EXPECT_DOUBLE_EQ(result.snapshots[0].best.fitness_value(), 5.0);
}

TEST(Engine, GenerationCapAndTrace) {
    const auto s = generate_synthetic(BarabasiAlbert{150, 2}, 2);
    GAConfig cfg = small_config(3, 12);
    cfg.generations = 25;
    cfg.convergence_window = 0;
    std::vector<GenerationRecord> trace;
    run_abem(s, NominationParams{}, cfg, {0.1, 50, std::nullopt},
             [&](const GenerationRecord& r) { trace.push_back(r); });
    ASSERT_EQ(trace.size(), 25u);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        EXPECT_EQ(trace[i].generation, i);
        if (i > 0) {
            EXPECT_GE(trace[i].best_fitness, trace[i - 1].best_fitness);
        }
        EXPECT_LE(trace[i].avg_fitness, trace[i].best_fitness + 1e-9);
        EXPECT_GT(trace[i].pool_size, 0u);
    }
}

TEST(Engine, ConvergenceWindowStopsEarly) {
    const auto s = oracle::to_snapshot(4, {{0, 1}, {2, 3}});
    GAConfig cfg = small_config(1, 4);
    cfg.generations = 1000;
    cfg.convergence_window = 5;
    const auto r = run_abem(s, NominationParams{1, 0.0, {0.5, 10, 2}}, cfg, {0.0, 10, std::nullopt});
    EXPECT_LE(r.snapshots[0].generations, 6u);
}

TEST(Engine, DeterministicResult) {
    const auto net = generate_dynamic(BarabasiAlbert{120, 2}, 3, 0.1, 4);
    GAConfig cfg = small_config(3, 10);
    cfg.generations = 15;
    const auto a = run_abem(net, NominationParams{}, cfg, {0.1, 64, std::nullopt});
    const auto b = run_abem(net, NominationParams{}, cfg, {0.1, 64, std::nullopt});
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        EXPECT_EQ(a.trace[i].best_fitness, b.trace[i].best_fitness);
        EXPECT_EQ(a.trace[i].avg_fitness, b.trace[i].avg_fitness);
    }
    for (std::size_t t = 0; t < net.size(); ++t) {
        EXPECT_EQ(a.snapshots[t].best.genes, b.snapshots[t].best.genes);
        EXPECT_TRUE(valid_chromosome(a.snapshots[t].best, 3, net[t]));
    }
}

TEST(Engine, CarriedPopulationSurvivesNodeLoss) {
    const auto first = generate_synthetic(BarabasiAlbert{80, 2}, 1);
    std::vector<NodeId> keep;
    for (auto v : first.nodes())
        if (v % 3 != 0) keep.push_back(v);
    std::vector<Edge> edges;
    for (auto [u, v] : first.edges())
        if (u % 3 != 0 && v % 3 != 0) edges.emplace_back(u, v);
    const auto second = Snapshot::from_edges(1, keep, edges, false);
    GAConfig cfg = small_config(4, 10);
    cfg.generations = 10;
    EvolutionEngine engine(kAbem, NominationParams{1, 0.3, {0.1, 20, 2}}, cfg, {0.1, 32, std::nullopt});
    engine.advance(first);
    const auto out = engine.advance(second);
    EXPECT_TRUE(valid_chromosome(out.best, 4, second));
    for (const auto& m : engine.population().members) EXPECT_TRUE(valid_chromosome(m, 4, second));
}

TEST(Engine, ZeroRatesOnlyFilter) {
    const auto s = generate_synthetic(ErdosRenyi{60, 0.08}, 3);
    GAConfig cfg = small_config(3, 8);
    cfg.generations = 6;
    cfg.crossover_rate = 0.0;
    cfg.mutation_rate = 0.0;
    cfg.convergence_window = 0;
    EvolutionEngine engine(kPlainGa, NominationParams{}, cfg, {0.1, 32, std::nullopt});
    std::multiset<std::vector<NodeId>> initial;
    bool first = true;
    engine.advance(s, [&](const GenerationRecord& r) {
        if (first) {
            for (const auto& m : engine.population().members) initial.insert(m.genes);
            first = false;
        }
        (void)r;
    });
    for (const auto& m : engine.population().members) EXPECT_TRUE(initial.contains(m.genes));
}

TEST(Engine, NearExhaustiveOptimumOfSameSchedule) {
    // ER(60, 0.08), k = 3, p_a = 0.1: scored with the engine's own fitness
    // function, every one of the C(60, 3) triples.
    const auto s = generate_synthetic(ErdosRenyi{60, 0.08}, derive_seed(1, "graph"));
    GAConfig cfg;
    cfg.seed_set_size = 3;
    cfg.convergence_window = 100;
    cfg.rng_seed = 1;
    NominationParams nom;
    nom.ic.activation_probability = 0.1;
    EvolutionEngine engine(kAbem, nom, cfg, {0.1, kFitnessMcRuns, std::nullopt}, true);
    const auto best = engine.advance(s).best;

    const auto nodes = s.nodes();
    SpreadEstimate optimum{};
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = a + 1; b < nodes.size(); ++b)
            for (std::size_t c = b + 1; c < nodes.size(); ++c) {
                const std::vector<NodeId> t{nodes[a], nodes[b], nodes[c]};
                const auto e = engine.evaluator().evaluate(s, t);
                if (e.mean > optimum.mean) optimum = e;
            }
    const double se = std::hypot(optimum.std_error, best.fitness->std_error);
    EXPECT_GE(best.fitness_value(), optimum.mean - 2.0 * se);
}
