#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "abem/graph_io.hpp"
#include "abem/harness/commands.hpp"
#include "abem/harness/config.hpp"
#include "abem/harness/report.hpp"

namespace fs = std::filesystem;
using namespace abem;
using namespace abem::harness;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        std::vector<std::string> cols;
        std::string c;
        std::istringstream ls(line);
        while (std::getline(ls, c, ',')) cols.push_back(c);
        if (!line.empty() && line.back() == ',') cols.emplace_back();
        rows.push_back(cols);
    }
    return rows;
}

class Harness : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir = fs::temp_directory_path() / (std::string("abem_harness_") + info->name());
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    RunOptions out(const std::string& name, bool resume = false) const { return {dir / name, resume}; }

    fs::path dir;
};

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.dataset.n = 120;
    c.dataset.m = 2;
    c.k = {3};
    c.ic.mc_runs = 40;
    c.report_mc_runs = 200;
    c.ga.population_size = 12;
    c.ga.generations = 15;
    c.ga.convergence_window = 5;
    c.greedy_mc_runs = 20;
    c.nomination.ic.mc_runs = 20;
    return c;
}

}  // namespace

TEST(Config, EmptyTextGivesValidDefaults) {
    const auto c = parse_config("", ".");
    EXPECT_EQ(c.k, std::vector<std::size_t>{5});
    EXPECT_EQ(c.algorithms.size(), 7u);
    EXPECT_EQ(c.report_mc_runs, 1000u);
    EXPECT_EQ(c.nomination.degree_threshold, 2u);
    EXPECT_DOUBLE_EQ(c.nomination.quantile_threshold, 0.7);
    EXPECT_EQ(c.cadence.at("greedy"), 4u);
    EXPECT_NO_THROW(validate(c));
}

TEST(Config, ParsesNestedSections) {
    const auto c = parse_config(R"(
dataset: {kind: synthetic, model: er, n: 60, p: 0.08}
algorithms: [abem, degree]
k: [3, 5]
ic: {activation_probability: 0.2, mc_runs: 30}
nomination: {degree_threshold: 3, quantile_threshold: 0.5, hops: 3}
ga: {population_size: 10, generations: 40, common_random_numbers: true}
cadence: {degree: 2}
sweep: {degree_threshold: [1, 2], quantile_threshold: 0.9}
rng_seed: 42
)",
                                ".");
    EXPECT_EQ(c.dataset.model, "er");
    EXPECT_EQ(c.dataset.n, 60u);
    EXPECT_EQ(c.algorithms, (std::vector<std::string>{"abem", "degree"}));
    EXPECT_EQ(c.k, (std::vector<std::size_t>{3, 5}));
    EXPECT_DOUBLE_EQ(c.ic.activation_probability, 0.2);
    EXPECT_DOUBLE_EQ(c.nomination.ic.activation_probability, 0.2);
    EXPECT_EQ(c.nomination.ic.max_hops, std::optional<std::size_t>(3));
    EXPECT_EQ(c.ga.generations, 40u);
    EXPECT_TRUE(c.common_random_numbers);
    EXPECT_EQ(c.cadence.at("degree"), 2u);
    EXPECT_EQ(c.sweep.quantile_thresholds, std::vector<double>{0.9});
    EXPECT_EQ(c.rng_seed, 42u);
    EXPECT_NO_THROW(validate(c));
}

TEST(Config, RejectsUnknownKeysAndWrongTypes) {
    EXPECT_THROW(parse_config("colour: red", "."), ConfigError);
    EXPECT_THROW(parse_config("ga: {popsize: 3}", "."), ConfigError);
    EXPECT_THROW(parse_config("k: many", "."), ConfigError);
    EXPECT_THROW(parse_config("cadence: {abem: 2}", "."), ConfigError);
    EXPECT_THROW(parse_config("dataset: {kind: csv}", "."), ConfigError);
    EXPECT_THROW(parse_config("[unbalanced", "."), ConfigError);
}

TEST(Config, ValidationFailures) {
    auto bad = [](auto edit) {
        auto c = small_config();
        edit(c);
        return c;
    };
    EXPECT_THROW(validate(bad([](auto& c) { c.algorithms = {"celf"}; })), ConfigError);
    EXPECT_THROW(validate(bad([](auto& c) { c.k = {}; })), ConfigError);
    EXPECT_THROW(validate(bad([](auto& c) { c.ic.activation_probability = 1.5; })), ConfigError);
    EXPECT_THROW(validate(bad([](auto& c) { c.nomination.quantile_threshold = -0.1; })), ConfigError);
    EXPECT_THROW(validate(bad([](auto& c) { c.ga.population_size = 0; })), ConfigError);
    EXPECT_THROW(validate(bad([](auto& c) { c.dataset.model = "ws"; })), ConfigError);
    EXPECT_THROW(validate(bad([](auto& c) {
                     c.dataset.kind = DatasetSpec::Kind::EdgeList;
                     c.dataset.paths = {"/nonexistent/graph.edges"};
                 })),
                 ConfigError);
    EXPECT_THROW(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST(Config, KLargerThanSmallestSnapshotRejected) {
    auto c = small_config();
    c.dataset.n = 10;
    c.k = {3, 11};
    EXPECT_THROW(load_dataset(c), ConfigError);
    c.k = {10};
    EXPECT_NO_THROW(load_dataset(c));
}

TEST(Config, CanonicalTextRoundTripsAndHashIgnoresSeed) {
    auto c = small_config();
    c.sweep.quantile_thresholds = {0.3, 0.7};
    const auto text = canonical_yaml(c);
    EXPECT_EQ(canonical_yaml(parse_config(text, ".")), text);

    auto reseeded = c;
    reseeded.rng_seed = 99;
    EXPECT_EQ(config_hash(reseeded), config_hash(c));
    EXPECT_NE(canonical_yaml(reseeded), text);

    auto changed = c;
    changed.ic.activation_probability = 0.11;
    EXPECT_NE(config_hash(changed), config_hash(c));
    EXPECT_EQ(config_hash(c).size(), 16u);
}

TEST(Config, RelativePathsResolveAgainstConfigDirectory) {
    const auto c = parse_config("dataset: {kind: edge_list, paths: [a.edges, /abs/b.edges]}", "/data/run");
    ASSERT_EQ(c.dataset.paths.size(), 2u);
    EXPECT_EQ(c.dataset.paths[0], fs::path("/data/run/a.edges"));
    EXPECT_EQ(c.dataset.paths[1], fs::path("/abs/b.edges"));
}

TEST(Report, RowFormat) {
    ResultRow r{"abem", 5, 2, 12.5, 0.25, std::nullopt, 7, 30};
    EXPECT_EQ(format_row(r, "00ff", 3), "abem,5,2,12.500000,0.250000,,7,30,00ff,3");
    r.seconds = 1.23456;
    EXPECT_EQ(format_row(r, "00ff", 3), "abem,5,2,12.500000,0.250000,1.235,7,30,00ff,3");
}

TEST_F(Harness, ConvergenceWritesGRowsPerAlgorithm) {
    auto c = small_config();
    c.ga.generations = 10;
    cmd_convergence(c, out("conv"));
    for (const char* alg : {"abem", "ga", "pool_ga"}) {
        const auto path = dir / "conv" / (std::string("trace_") + alg + ".csv");
        ASSERT_TRUE(fs::exists(path)) << alg;
        EXPECT_EQ(slurp(path).substr(0, slurp(path).find('\n')), kTraceHeader);
        const auto rows = csv(path);
        ASSERT_EQ(rows.size(), 10u) << alg;
        double best = -1.0;
        for (std::size_t g = 0; g < rows.size(); ++g) {
            EXPECT_EQ(rows[g][0], std::to_string(g));
            const double b = std::stod(rows[g][1]);
            EXPECT_GE(b, best) << alg << " generation " << g;
            best = b;
        }
    }
    EXPECT_TRUE(fs::exists(dir / "conv" / "config.canonical.yaml"));
}

TEST_F(Harness, StaticHasOneRowPerAlgorithmAndK) {
    auto c = small_config();
    c.k = {2, 4};
    cmd_static(c, out("a"));
    const auto rows = csv(dir / "a" / "results.csv");
    ASSERT_EQ(rows.size(), c.algorithms.size() * c.k.size());
    const auto hash = config_hash(c);
    std::set<std::pair<std::string, std::string>> cells;
    for (const auto& r : rows) {
        ASSERT_EQ(r.size(), 10u);
        EXPECT_EQ(r[5], "");  // timing off
        EXPECT_EQ(r[8], hash);
        EXPECT_EQ(r[9], std::to_string(c.rng_seed));
        cells.emplace(r[0], r[1]);
    }
    EXPECT_EQ(cells.size(), rows.size());
    EXPECT_EQ(parse_config(slurp(dir / "a" / "config.canonical.yaml"), ".").rng_seed, c.rng_seed);
    EXPECT_EQ(config_hash(parse_config(slurp(dir / "a" / "config.canonical.yaml"), ".")), hash);
}

TEST_F(Harness, StaticIsByteReproducible) {
    auto c = small_config();
    cmd_static(c, out("a"));
    cmd_static(c, out("b"));
    EXPECT_EQ(slurp(dir / "a" / "results.csv"), slurp(dir / "b" / "results.csv"));
    c.rng_seed = 2;
    cmd_static(c, out("c"));
    EXPECT_NE(slurp(dir / "a" / "results.csv"), slurp(dir / "c" / "results.csv"));
}

TEST_F(Harness, TimingColumnFilledWhenEnabled) {
    auto c = small_config();
    c.algorithms = {"degree", "abem"};
    c.timing = true;
    cmd_static(c, out("t"));
    for (const auto& r : csv(dir / "t" / "results.csv")) EXPECT_FALSE(r[5].empty());
}

TEST_F(Harness, ResumeAfterInterruptionMatchesUninterruptedRun) {
    auto c = small_config();
    c.k = {2, 3};
    cmd_static(c, out("full"));
    const auto expected = slurp(dir / "full" / "results.csv");

    // Simulate a crash: a few completed cells and a torn last line.
    const auto run = dir / "crashed";
    fs::create_directories(run);
    std::istringstream log(slurp(dir / "full" / "checkpoint.jsonl"));
    std::ofstream cp(run / "checkpoint.jsonl");
    std::string line;
    for (int i = 0; i < 4 && std::getline(log, line); ++i) cp << line << '\n';
    std::getline(log, line);
    cp << line.substr(0, line.size() / 2);
    cp.close();

    cmd_static(c, out("crashed", true));
    EXPECT_EQ(slurp(run / "results.csv"), expected);

    // Entries from another seed are not reused.
    auto other = c;
    other.rng_seed = 5;
    cmd_static(other, out("crashed", true));
    EXPECT_NE(slurp(run / "results.csv"), expected);
}

TEST_F(Harness, ResumeReusesRecordedCells) {
    auto c = small_config();
    c.algorithms = {"degree"};
    cmd_static(c, out("r"));
    // A doctored entry proves the cell is read back rather than recomputed.
    auto text = slurp(dir / "r" / "checkpoint.jsonl");
    const auto at = text.find("\"results.csv\":[\"");
    ASSERT_NE(at, std::string::npos);
    text.insert(at + 16, "X");
    std::ofstream(dir / "r" / "checkpoint.jsonl", std::ios::trunc) << text;
    cmd_static(c, out("r", true));
    EXPECT_EQ(csv(dir / "r" / "results.csv").front()[0], "Xdegree");
}

TEST_F(Harness, SweepPoolShrinksAlongEachThresholdAxis) {
    auto c = small_config();
    c.sweep = {{1, 2, 4}, {0.0, 0.5, 0.9}, {3}};
    cmd_sweep(c, out("s"));
    const auto rows = csv(dir / "s" / "sweep.csv");
    ASSERT_EQ(rows.size(), 9u);
    std::map<std::pair<std::size_t, double>, std::size_t> pool;
    for (const auto& r : rows) {
        pool[{std::stoul(r[0]), std::stod(r[1])}] = std::stoul(r[10]);
        EXPECT_EQ(r[9], "3");  // fixed generation budget
    }
    const auto at = [&](std::size_t s, double q) { return pool.at({s, q}); };
    for (double q : {0.0, 0.5, 0.9}) {
        EXPECT_GE(at(1, q), at(2, q));
        EXPECT_GE(at(2, q), at(4, q));
    }
    for (std::size_t s : {1, 2, 4}) {
        EXPECT_GE(at(s, 0.0), at(s, 0.5));
        EXPECT_GE(at(s, 0.5), at(s, 0.9));
    }
}

TEST_F(Harness, SweepSingleCellAndRuntimeGrowsWithGenerations) {
    auto c = small_config();
    c.sweep = {{2}, {0.7}, {1}};
    cmd_sweep(c, out("one"));
    EXPECT_EQ(csv(dir / "one" / "sweep.csv").size(), 1u);

    c.timing = true;
    c.sweep = {{1}, {0.0}, {5, 40, 160}};
    cmd_sweep(c, out("g"));
    const auto rows = csv(dir / "g" / "sweep.csv");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_LT(std::stod(rows[0][8]), std::stod(rows[1][8]));
    EXPECT_LT(std::stod(rows[1][8]), std::stod(rows[2][8]));
}

TEST_F(Harness, DynamicCadenceAndSeedsInSnapshot) {
    auto c = small_config();
    c.dataset.snapshots = 12;
    c.dataset.churn = 0.1;
    c.algorithms = {"abem", "degree", "random"};
    c.cadence["degree"] = 4;
    c.ga.generations = 5;
    cmd_dynamic(c, out("d"));

    const auto net = load_dataset(c);
    EXPECT_EQ(csv(dir / "d" / "dynamic.csv").size(), 12u * 3u);

    const auto degree = csv(dir / "d" / "seeds_degree.csv");
    ASSERT_EQ(degree.size(), 12u);
    std::vector<std::size_t> reselected;
    for (std::size_t i = 0; i < degree.size(); ++i)
        if (degree[i][2] == "1") reselected.push_back(i);
    EXPECT_EQ(reselected, (std::vector<std::size_t>{0, 4, 8}));

    const auto random = csv(dir / "d" / "seeds_random.csv");
    for (const auto& r : random) EXPECT_EQ(r[2], "1");

    const auto abem = csv(dir / "d" / "seeds_abem.csv");
    ASSERT_EQ(abem.size(), 12u);
    for (std::size_t i = 0; i < abem.size(); ++i) {
        std::istringstream ids(abem[i][3]);
        NodeId v;
        std::size_t count = 0;
        while (ids >> v) {
            EXPECT_TRUE(net[i].contains(v)) << "snapshot " << i << " node " << v;
            ++count;
        }
        EXPECT_EQ(count, 3u);
    }
}

TEST_F(Harness, DynamicIsByteReproducible) {
    auto c = small_config();
    c.dataset.snapshots = 3;
    c.dataset.churn = 0.1;
    c.algorithms = {"abem", "pool_ga", "greedy"};
    cmd_dynamic(c, out("a"));
    cmd_dynamic(c, out("b"));
    for (const char* f : {"dynamic.csv", "seeds_abem.csv", "seeds_pool_ga.csv", "seeds_greedy.csv"})
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
}

TEST_F(Harness, GenSyntheticEdgeListRoundTrip) {
    auto c = small_config();
    c.dataset.model = "er";
    c.dataset.n = 40;
    c.dataset.p = 0.1;
    cmd_gen_synthetic(c, out("g"));
    const auto loaded = load_edge_list_file(dir / "g" / "graph.edges", false);
    const auto net = load_dataset(c);
    const auto& generated = net[0];
    EXPECT_EQ(loaded.edges(), generated.edges());

    // The written file feeds an edge_list config.
    auto from_file = c;
    from_file.dataset.kind = DatasetSpec::Kind::EdgeList;
    from_file.dataset.paths = {dir / "g" / "graph.edges"};
    EXPECT_EQ(load_dataset(from_file)[0].edges(), generated.edges());
}

TEST_F(Harness, GenSyntheticZeroChurnGivesIdenticalSnapshots) {
    auto c = small_config();
    c.dataset.snapshots = 3;
    c.dataset.churn = 0.0;
    cmd_gen_synthetic(c, out("g"));
    const auto first = slurp(dir / "g" / "snapshot_000.edges");
    EXPECT_EQ(slurp(dir / "g" / "snapshot_001.edges"), first);
    EXPECT_EQ(slurp(dir / "g" / "snapshot_002.edges"), first);

    TemporalLoadOptions o;
    o.persistence = EdgePersistence::PerBucket;
    const auto net = load_temporal_edge_list_file(dir / "g" / "temporal.edges", o);
    ASSERT_EQ(net.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(net[i].edges(), load_dataset(c)[i].edges());
}

TEST_F(Harness, GenSyntheticNeedsSyntheticDataset) {
    auto c = small_config();
    c.dataset.kind = DatasetSpec::Kind::EdgeList;
    c.dataset.paths = {dir};
    EXPECT_THROW(cmd_gen_synthetic(c, out("x")), ConfigError);
}

TEST_F(Harness, RandomCoverageBelowGreedyOnAverage) {
    double random = 0.0, greedy = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto c = small_config();
        c.algorithms = {"greedy", "random"};
        c.rng_seed = seed;
        cmd_static(c, out("s" + std::to_string(seed)));
        for (const auto& r : csv(dir / ("s" + std::to_string(seed)) / "results.csv"))
            (r[0] == "greedy" ? greedy : random) += std::stod(r[3]);
    }
    EXPECT_LE(random, greedy);
}
