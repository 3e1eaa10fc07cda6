#include "abem/harness/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "abem/baselines.hpp"
#include "abem/evolve.hpp"
#include "abem/graph_io.hpp"
#include "abem/harness/report.hpp"
#include "abem/nomination.hpp"
#include "abem/rng.hpp"
#include "abem/synthetic.hpp"

namespace abem::harness {
namespace {

using Clock = std::chrono::steady_clock;

struct Run {
    ExperimentConfig cfg;
    DynamicNetwork net;
    std::string hash;
    Checkpoint checkpoint;
};

Run start(const ExperimentConfig& cfg, const RunOptions& opt, const char* command) {
    validate(cfg);
    auto net = load_dataset(cfg);
    std::filesystem::create_directories(opt.out_dir);
    std::ofstream(opt.out_dir / "config.canonical.yaml", std::ios::trunc) << canonical_yaml(cfg);
    const auto hash = config_hash(cfg);
    Checkpoint cp(opt.out_dir / "checkpoint.jsonl", command, hash, cfg.rng_seed, opt.resume);
    return Run{cfg, std::move(net), hash, std::move(cp)};
}

std::uint64_t evolve_seed(const ExperimentConfig& cfg, std::size_t k) {
    return derive_seed(cfg.rng_seed, "evolve/k" + std::to_string(k));
}

GAConfig ga_config(const ExperimentConfig& cfg, std::size_t k, std::uint64_t seed) {
    auto ga = cfg.ga;
    ga.seed_set_size = k;
    ga.rng_seed = seed;
    return ga;
}

// Reported coverage: every algorithm on a snapshot sees the same worlds.
SpreadEstimate final_estimate(const ExperimentConfig& cfg, const Snapshot& s,
                              const std::vector<NodeId>& genes) {
    std::vector<NodeId> present;
    for (NodeId v : genes)
        if (s.contains(v)) present.push_back(v);
    const ICParams ic{cfg.ic.activation_probability, cfg.report_mc_runs, std::nullopt};
    return estimate_spread_on_worlds(s, present, ic,
                                     derive_seed(cfg.rng_seed, "final/" + std::to_string(s.time_index())));
}

struct Selection {
    SeedSet seeds;
    std::size_t generations = 0;
    std::size_t pool_size = 0;
    double seconds = 0.0;
};

const EvolutionVariant& variant_of(const std::string& alg) {
    if (alg == "abem") return kAbem;
    if (alg == "ga") return kPlainGa;
    return kPoolGa;
}

bool is_evolutionary(const std::string& alg) { return alg == "abem" || alg == "ga" || alg == "pool_ga"; }

// The pool an ABEM engine with this seed would nominate on `s`.
InfluencerPool engine_pool(const Snapshot& s, const InfluencerPool& prior, const NominationParams& nom,
                           std::uint64_t seed) {
    Rng rng(derive_seed(seed, "pool/" + std::to_string(s.time_index())));
    return refresh_pool(s, prior, nom, rng);
}

// One-shot selection on a single snapshot. The GA family shares `ga.rng_seed`.
Selection select_once(const std::string& alg, const Snapshot& s, std::size_t k, const ExperimentConfig& cfg,
                      const GAConfig& ga, const NominationParams& nom, std::uint64_t cell_seed,
                      const TraceSink& sink = {}) {
    const auto t0 = Clock::now();
    Selection out;
    if (is_evolutionary(alg)) {
        EvolutionEngine engine(variant_of(alg), nom, ga, cfg.ic, cfg.common_random_numbers);
        std::optional<InfluencerPool> pool;
        if (alg == "pool_ga") pool = engine_pool(s, {}, nom, ga.rng_seed);
        auto o = engine.advance(s, sink, pool ? &*pool : nullptr);
        out.seeds = std::move(o.best);
        out.generations = o.generations;
        out.pool_size = o.pool_size;
    } else if (alg == "greedy") {
        Rng rng(derive_seed(cell_seed, "greedy"));
        out.seeds = greedy_seed(s, k, {cfg.ic.activation_probability, cfg.greedy_mc_runs, std::nullopt}, rng);
    } else if (alg == "degree") {
        out.seeds = degree_seed(s, k);
    } else if (alg == "ddh") {
        out.seeds = ddh_seed(s, k, cfg.ic.activation_probability);
    } else {
        Rng rng(derive_seed(cell_seed, "random"));
        out.seeds = random_seed(s, k, rng);
    }
    out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return out;
}

std::string trace_line(const GenerationRecord& r) {
    return std::to_string(r.generation) + ',' + format_number(r.best_fitness) + ',' +
           format_number(r.avg_fitness) + ',' + std::to_string(r.pool_size);
}

std::string join_ids(const std::vector<NodeId>& ids) {
    std::string out;
    for (NodeId v : ids) {
        if (!out.empty()) out += ' ';
        out += std::to_string(v);
    }
    return out;
}

std::string format_threshold(double q) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", q);
    return buf;
}

std::optional<double> seconds_if(const ExperimentConfig& cfg, double s) {
    return cfg.timing ? std::optional<double>(s) : std::nullopt;
}

// Runs `body` for a cell unless the checkpoint already has it; appends the
// cell's lines to `files` either way.
template <typename Body>
void cell(Run& run, const std::string& key, std::map<std::string, std::vector<std::string>>& files,
          Body&& body) {
    const Checkpoint::CellOutput* done = run.checkpoint.find(key);
    Checkpoint::CellOutput fresh;
    if (!done) {
        fresh = body();
        run.checkpoint.record(key, fresh);
        done = &fresh;
    }
    for (const auto& [file, lines] : *done) {
        auto& dst = files[file];
        dst.insert(dst.end(), lines.begin(), lines.end());
    }
}

}  // namespace

DynamicNetwork load_dataset(const ExperimentConfig& cfg) {
    const auto& d = cfg.dataset;
    DynamicNetwork net;
    switch (d.kind) {
        case DatasetSpec::Kind::Synthetic: {
            SyntheticModel model = d.model == "ba" ? SyntheticModel(BarabasiAlbert{d.n, d.m})
                                                   : SyntheticModel(ErdosRenyi{d.n, d.p});
            const auto seed = d.graph_seed.value_or(derive_seed(cfg.rng_seed, "dataset"));
            if (d.snapshots == 1) {
                net = DynamicNetwork({generate_synthetic(model, seed)});
            } else {
                net = generate_dynamic(model, d.snapshots, d.churn, seed);
            }
            break;
        }
        case DatasetSpec::Kind::EdgeList: {
            std::vector<Snapshot> snaps;
            for (std::size_t i = 0; i < d.paths.size(); ++i) {
                std::istringstream in(read_text_file(d.paths[i]));
                snaps.push_back(load_edge_list(in, d.directed, i));
            }
            net = DynamicNetwork(std::move(snaps));
            break;
        }
        case DatasetSpec::Kind::Temporal: {
            TemporalLoadOptions o;
            o.buckets = BucketSpec::parse(d.buckets);
            o.join_quit_rule = d.join_quit;
            o.persistence = d.persistence == "per_bucket" ? EdgePersistence::PerBucket
                                                          : EdgePersistence::UntilQuit;
            o.directed = d.directed;
            net = load_temporal_edge_list_file(d.paths.front(), o);
            break;
        }
    }
    if (net.empty()) throw ConfigError("dataset has no snapshots");
    if (d.snapshot >= net.size()) {
        throw ConfigError("dataset.snapshot " + std::to_string(d.snapshot) + " is past the last of " +
                          std::to_string(net.size()) + " snapshots");
    }
    std::size_t smallest = std::numeric_limits<std::size_t>::max();
    for (const auto& s : net.snapshots()) smallest = std::min(smallest, s.node_count());
    for (auto k : cfg.k) {
        if (k > smallest) {
            throw ConfigError("k=" + std::to_string(k) + " exceeds the smallest snapshot (" +
                              std::to_string(smallest) + " nodes)");
        }
    }
    return net;
}

void cmd_convergence(const ExperimentConfig& config, const RunOptions& opt) {
    auto run = start(config, opt, "convergence");
    const auto& cfg = run.cfg;
    const auto& s = run.net[cfg.dataset.snapshot];
    const auto k = cfg.k.front();
    auto ga = ga_config(cfg, k, evolve_seed(cfg, k));
    ga.convergence_window = 0;

    std::map<std::string, std::vector<std::string>> files;
    for (const std::string alg : {"abem", "ga", "pool_ga"}) {
        const auto file = "trace_" + alg + ".csv";
        cell(run, alg, files, [&] {
            Checkpoint::CellOutput out;
            auto& lines = out[file];
            select_once(alg, s, k, cfg, ga, cfg.nomination, 0,
                        [&](const GenerationRecord& r) { lines.push_back(trace_line(r)); });
            return out;
        });
        write_lines(opt.out_dir / file, kTraceHeader, files[file]);
    }
}

void cmd_static(const ExperimentConfig& config, const RunOptions& opt) {
    auto run = start(config, opt, "static");
    const auto& cfg = run.cfg;
    const auto& s = run.net[cfg.dataset.snapshot];

    std::map<std::string, std::vector<std::string>> files;
    for (auto k : cfg.k) {
        const auto ga = ga_config(cfg, k, evolve_seed(cfg, k));
        for (const auto& alg : cfg.algorithms) {
            const auto key = alg + "/k=" + std::to_string(k);
            cell(run, key, files, [&] {
                auto sel = select_once(alg, s, k, cfg, ga, cfg.nomination, derive_seed(cfg.rng_seed, key));
                const auto est = final_estimate(cfg, s, sel.seeds.genes);
                ResultRow row{alg,          k, s.time_index(), est.mean, est.std_error,
                              seconds_if(cfg, sel.seconds), sel.generations, sel.pool_size};
                return Checkpoint::CellOutput{{"results.csv", {format_row(row, run.hash, cfg.rng_seed)}}};
            });
        }
    }
    write_lines(opt.out_dir / "results.csv", kResultHeader, files["results.csv"]);
}

void cmd_sweep(const ExperimentConfig& config, const RunOptions& opt) {
    auto run = start(config, opt, "sweep");
    const auto& cfg = run.cfg;
    const auto& s = run.net[cfg.dataset.snapshot];

    std::map<std::string, std::vector<std::string>> files;
    for (auto k : cfg.k) {
        for (auto ts : cfg.sweep.degree_thresholds) {
            for (auto tq : cfg.sweep.quantile_thresholds) {
                for (auto g : cfg.sweep.generations) {
                    const auto key = "k=" + std::to_string(k) + "/ts=" + std::to_string(ts) +
                                     "/tq=" + format_threshold(tq) + "/g=" + std::to_string(g);
                    cell(run, key, files, [&] {
                        auto nom = cfg.nomination;
                        nom.degree_threshold = ts;
                        nom.quantile_threshold = tq;
                        // Same engine seed in every cell: pools differ only by the thresholds.
                        auto ga = ga_config(cfg, k, evolve_seed(cfg, k));
                        ga.generations = g;
                        ga.convergence_window = 0;
                        auto sel = select_once("abem", s, k, cfg, ga, nom, 0);
                        const auto est = final_estimate(cfg, s, sel.seeds.genes);
                        ResultRow row{"abem",   k, s.time_index(), est.mean, est.std_error,
                                      seconds_if(cfg, sel.seconds), sel.generations, sel.pool_size};
                        const auto line = std::to_string(ts) + ',' + format_threshold(tq) + ',' +
                                          std::to_string(g) + ',' + format_row(row, run.hash, cfg.rng_seed);
                        return Checkpoint::CellOutput{{"sweep.csv", {line}}};
                    });
                }
            }
        }
    }
    write_lines(opt.out_dir / "sweep.csv",
                std::string("degree_threshold,quantile_threshold,generations_budget,") + kResultHeader,
                files["sweep.csv"]);
}

void cmd_dynamic(const ExperimentConfig& config, const RunOptions& opt) {
    auto run = start(config, opt, "dynamic");
    const auto& cfg = run.cfg;
    const auto& net = run.net;

    std::map<std::string, std::vector<std::string>> files;
    for (auto k : cfg.k) {
        for (const auto& alg : cfg.algorithms) {
            const auto key = alg + "/k=" + std::to_string(k);
            const auto seeds_file = "seeds_" + alg + ".csv";
            cell(run, key, files, [&] {
                Checkpoint::CellOutput out;
                auto& rows = out["dynamic.csv"];
                auto& seed_rows = out[seeds_file];
                const auto seed = evolve_seed(cfg, k);
                std::optional<EvolutionEngine> abem;
                if (alg == "abem") abem.emplace(kAbem, cfg.nomination, ga_config(cfg, k, seed), cfg.ic,
                                                cfg.common_random_numbers);
                InfluencerPool pool;
                std::vector<NodeId> current;
                const auto cadence = alg == "abem" ? std::size_t{1} : cfg.cadence.at(alg);

                for (std::size_t pos = 0; pos < net.size(); ++pos) {
                    const auto& s = net[pos];
                    const bool reselect = reselects_at(pos, cadence);
                    Selection sel;
                    if (abem) {
                        const auto t0 = Clock::now();
                        auto o = abem->advance(s);
                        sel.seeds = std::move(o.best);
                        sel.generations = o.generations;
                        sel.pool_size = o.pool_size;
                        sel.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
                    } else if (alg == "pool_ga") {
                        // The pool follows the network even between re-selections.
                        pool = engine_pool(s, pool, cfg.nomination, seed);
                        sel.pool_size = pool.size();
                        if (reselect) {
                            const auto t0 = Clock::now();
                            const auto ga = ga_config(cfg, k, mix_seed(seed, s.time_index()));
                            EvolutionEngine engine(kPoolGa, cfg.nomination, ga, cfg.ic,
                                                   cfg.common_random_numbers);
                            auto o = engine.advance(s, {}, &pool);
                            sel.seeds = std::move(o.best);
                            sel.generations = o.generations;
                            sel.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
                        }
                    } else if (reselect) {
                        const auto ga = ga_config(cfg, k, mix_seed(seed, s.time_index()));
                        sel = select_once(alg, s, k, cfg, ga, cfg.nomination,
                                          derive_seed(cfg.rng_seed, key + "/t=" + std::to_string(s.time_index())));
                    }
                    if (reselect) current = sel.seeds.genes;
                    const auto est = final_estimate(cfg, s, current);
                    ResultRow row{alg,
                                  k,
                                  s.time_index(),
                                  est.mean,
                                  est.std_error,
                                  seconds_if(cfg, reselect ? sel.seconds : 0.0),
                                  sel.generations,
                                  sel.pool_size};
                    rows.push_back(format_row(row, run.hash, cfg.rng_seed));
                    seed_rows.push_back(std::to_string(k) + ',' + std::to_string(s.time_index()) + ',' +
                                        (reselect ? "1" : "0") + ',' + join_ids(current));
                }
                return out;
            });
        }
    }
    write_lines(opt.out_dir / "dynamic.csv", kResultHeader, files["dynamic.csv"]);
    for (const auto& alg : cfg.algorithms) {
        const auto file = "seeds_" + alg + ".csv";
        write_lines(opt.out_dir / file, "k,snapshot,reselected,seeds", files[file]);
    }
}

void cmd_gen_synthetic(const ExperimentConfig& config, const RunOptions& opt) {
    if (config.dataset.kind != DatasetSpec::Kind::Synthetic) {
        throw ConfigError("gen-synthetic needs a synthetic dataset");
    }
    validate(config);
    const auto net = load_dataset(config);
    std::filesystem::create_directories(opt.out_dir);
    std::ofstream(opt.out_dir / "config.canonical.yaml", std::ios::trunc) << canonical_yaml(config);

    const auto write = [&](const std::filesystem::path& path, const auto& fill) {
        std::ofstream out(path, std::ios::trunc | std::ios::binary);
        if (!out) throw Error("cannot write " + path.string());
        fill(out);
        if (!out) throw Error("write failed: " + path.string());
    };
    if (net.size() == 1) {
        write(opt.out_dir / "graph.edges", [&](std::ostream& out) { write_edge_list(out, net[0]); });
        return;
    }
    for (std::size_t i = 0; i < net.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%03zu.edges", i);
        write(opt.out_dir / name, [&](std::ostream& out) { write_edge_list(out, net[i]); });
    }
    write(opt.out_dir / "temporal.edges", [&](std::ostream& out) {
        out << "# u v unix_timestamp, one calendar quarter per snapshot\n";
        for (std::size_t i = 0; i < net.size(); ++i) {
            const auto ts = quarter_start(2006 + static_cast<int>(i / 4), static_cast<int>(i % 4) + 1);
            for (const auto& e : net[i].edges()) out << e.first << ' ' << e.second << ' ' << ts << '\n';
        }
    });
}

}  // namespace abem::harness
