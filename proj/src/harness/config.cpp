#include "abem/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>

#include <yaml-cpp/yaml.h>

#include "abem/graph_io.hpp"
#include "abem/rng.hpp"

namespace abem::harness {
namespace {

void only_keys(const YAML::Node& node, const std::string& where, std::set<std::string> allowed) {
    if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& into, const std::string& where) {
    const auto v = node[key];
    if (!v) return;
    try {
        into = v.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

// A scalar or a list.
template <typename T>
void read_list(const YAML::Node& node, const char* key, std::vector<T>& into,
               const std::string& where) {
    const auto v = node[key];
    if (!v) return;
    try {
        if (v.IsSequence()) {
            into = v.as<std::vector<T>>();
        } else {
            into = {v.as<T>()};
        }
    } catch (const YAML::Exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

std::string num(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

const char* kind_name(DatasetSpec::Kind k) {
    switch (k) {
        case DatasetSpec::Kind::EdgeList:
            return "edge_list";
        case DatasetSpec::Kind::Temporal:
            return "temporal";
        default:
            return "synthetic";
    }
}

std::string render(const ExperimentConfig& c, bool with_seed) {
    const auto& d = c.dataset;
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "dataset" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << kind_name(d.kind);
    if (d.kind == DatasetSpec::Kind::Synthetic) {
        out << YAML::Key << "model" << YAML::Value << d.model;
        out << YAML::Key << "n" << YAML::Value << d.n;
        if (d.model == "ba") out << YAML::Key << "m" << YAML::Value << d.m;
        if (d.model == "er") out << YAML::Key << "p" << YAML::Value << num(d.p);
        out << YAML::Key << "snapshots" << YAML::Value << d.snapshots;
        out << YAML::Key << "churn" << YAML::Value << num(d.churn);
        if (d.graph_seed) out << YAML::Key << "graph_seed" << YAML::Value << *d.graph_seed;
    } else {
        out << YAML::Key << "paths" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (const auto& p : d.paths) out << p.string();
        out << YAML::EndSeq;
        out << YAML::Key << "directed" << YAML::Value << d.directed;
        if (d.kind == DatasetSpec::Kind::Temporal) {
            out << YAML::Key << "buckets" << YAML::Value << d.buckets;
            out << YAML::Key << "join_quit" << YAML::Value << d.join_quit;
            out << YAML::Key << "persistence" << YAML::Value << d.persistence;
        }
    }
    out << YAML::Key << "snapshot" << YAML::Value << d.snapshot;
    out << YAML::EndMap;

    out << YAML::Key << "algorithms" << YAML::Value << YAML::Flow << c.algorithms;
    out << YAML::Key << "k" << YAML::Value << YAML::Flow << c.k;

    out << YAML::Key << "ic" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "activation_probability" << YAML::Value << num(c.ic.activation_probability);
    out << YAML::Key << "mc_runs" << YAML::Value << c.ic.mc_runs;
    out << YAML::Key << "report_mc_runs" << YAML::Value << c.report_mc_runs;
    out << YAML::EndMap;

    out << YAML::Key << "nomination" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "degree_threshold" << YAML::Value << c.nomination.degree_threshold;
    out << YAML::Key << "quantile_threshold" << YAML::Value << num(c.nomination.quantile_threshold);
    out << YAML::Key << "mc_runs" << YAML::Value << c.nomination.ic.mc_runs;
    out << YAML::Key << "hops" << YAML::Value << c.nomination.ic.max_hops.value_or(0);
    out << YAML::EndMap;

    out << YAML::Key << "ga" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "population_size" << YAML::Value << c.ga.population_size;
    out << YAML::Key << "generations" << YAML::Value << c.ga.generations;
    out << YAML::Key << "crossover_rate" << YAML::Value << num(c.ga.crossover_rate);
    out << YAML::Key << "mutation_rate" << YAML::Value << num(c.ga.mutation_rate);
    out << YAML::Key << "convergence_window" << YAML::Value << c.ga.convergence_window;
    out << YAML::Key << "common_random_numbers" << YAML::Value << c.common_random_numbers;
    out << YAML::EndMap;

    out << YAML::Key << "greedy" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "mc_runs" << YAML::Value << c.greedy_mc_runs;
    out << YAML::EndMap;

    out << YAML::Key << "cadence" << YAML::Value << YAML::BeginMap;
    for (const auto& [name, every] : c.cadence) out << YAML::Key << name << YAML::Value << every;
    out << YAML::EndMap;

    out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "degree_threshold" << YAML::Value << YAML::Flow << c.sweep.degree_thresholds;
    out << YAML::Key << "quantile_threshold" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double q : c.sweep.quantile_thresholds) out << num(q);
    out << YAML::EndSeq;
    out << YAML::Key << "generations" << YAML::Value << YAML::Flow << c.sweep.generations;
    out << YAML::EndMap;

    out << YAML::Key << "report" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "timing" << YAML::Value << c.timing;
    out << YAML::EndMap;

    if (with_seed) out << YAML::Key << "rng_seed" << YAML::Value << c.rng_seed;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config is not valid YAML: ") + e.what());
    }
    ExperimentConfig c;
    if (!root || root.IsNull()) return c;
    only_keys(root, "config",
              {"dataset", "algorithms", "k", "ic", "nomination", "ga", "greedy", "cadence", "sweep",
               "report", "rng_seed"});

    if (const auto d = root["dataset"]) {
        only_keys(d, "dataset",
                  {"kind", "model", "n", "m", "p", "snapshots", "churn", "graph_seed", "paths", "path",
                   "directed", "buckets", "join_quit", "persistence", "snapshot"});
        auto& ds = c.dataset;
        std::string kind = "synthetic";
        read(d, "kind", kind, "dataset");
        if (kind == "synthetic") {
            ds.kind = DatasetSpec::Kind::Synthetic;
        } else if (kind == "edge_list") {
            ds.kind = DatasetSpec::Kind::EdgeList;
        } else if (kind == "temporal") {
            ds.kind = DatasetSpec::Kind::Temporal;
        } else {
            throw ConfigError("dataset.kind: unknown kind '" + kind + "'");
        }
        read(d, "model", ds.model, "dataset");
        read(d, "n", ds.n, "dataset");
        read(d, "m", ds.m, "dataset");
        read(d, "p", ds.p, "dataset");
        read(d, "snapshots", ds.snapshots, "dataset");
        read(d, "churn", ds.churn, "dataset");
        if (d["graph_seed"]) {
            std::uint64_t g = 0;
            read(d, "graph_seed", g, "dataset");
            ds.graph_seed = g;
        }
        std::vector<std::string> paths;
        read_list(d, "paths", paths, "dataset");
        read_list(d, "path", paths, "dataset");
        for (const auto& p : paths) {
            std::filesystem::path path(p);
            ds.paths.push_back(path.is_absolute() ? path : (base_dir / path).lexically_normal());
        }
        read(d, "directed", ds.directed, "dataset");
        read(d, "buckets", ds.buckets, "dataset");
        read(d, "join_quit", ds.join_quit, "dataset");
        read(d, "persistence", ds.persistence, "dataset");
        read(d, "snapshot", ds.snapshot, "dataset");
    }
    read_list(root, "algorithms", c.algorithms, "config");
    read_list(root, "k", c.k, "config");

    if (const auto ic = root["ic"]) {
        only_keys(ic, "ic", {"activation_probability", "mc_runs", "report_mc_runs"});
        read(ic, "activation_probability", c.ic.activation_probability, "ic");
        read(ic, "mc_runs", c.ic.mc_runs, "ic");
        read(ic, "report_mc_runs", c.report_mc_runs, "ic");
    }
    c.nomination.ic.activation_probability = c.ic.activation_probability;
    if (const auto nm = root["nomination"]) {
        only_keys(nm, "nomination", {"degree_threshold", "quantile_threshold", "mc_runs", "hops"});
        read(nm, "degree_threshold", c.nomination.degree_threshold, "nomination");
        read(nm, "quantile_threshold", c.nomination.quantile_threshold, "nomination");
        read(nm, "mc_runs", c.nomination.ic.mc_runs, "nomination");
        std::size_t hops = *c.nomination.ic.max_hops;
        read(nm, "hops", hops, "nomination");
        c.nomination.ic.max_hops = hops;
    }
    if (const auto ga = root["ga"]) {
        only_keys(ga, "ga",
                  {"population_size", "generations", "crossover_rate", "mutation_rate",
                   "convergence_window", "common_random_numbers"});
        read(ga, "population_size", c.ga.population_size, "ga");
        read(ga, "generations", c.ga.generations, "ga");
        read(ga, "crossover_rate", c.ga.crossover_rate, "ga");
        read(ga, "mutation_rate", c.ga.mutation_rate, "ga");
        read(ga, "convergence_window", c.ga.convergence_window, "ga");
        read(ga, "common_random_numbers", c.common_random_numbers, "ga");
    }
    if (const auto g = root["greedy"]) {
        only_keys(g, "greedy", {"mc_runs"});
        read(g, "mc_runs", c.greedy_mc_runs, "greedy");
    }
    if (const auto cad = root["cadence"]) {
        std::set<std::string> names(known_algorithms().begin(), known_algorithms().end());
        names.erase("abem");
        only_keys(cad, "cadence", names);
        for (const auto& kv : cad) {
            std::size_t every = 0;
            read(cad, kv.first.as<std::string>().c_str(), every, "cadence");
            c.cadence[kv.first.as<std::string>()] = every;
        }
    }
    if (const auto sw = root["sweep"]) {
        only_keys(sw, "sweep", {"degree_threshold", "quantile_threshold", "generations"});
        read_list(sw, "degree_threshold", c.sweep.degree_thresholds, "sweep");
        read_list(sw, "quantile_threshold", c.sweep.quantile_thresholds, "sweep");
        read_list(sw, "generations", c.sweep.generations, "sweep");
    }
    if (const auto rep = root["report"]) {
        only_keys(rep, "report", {"timing"});
        read(rep, "timing", c.timing, "report");
    }
    read(root, "rng_seed", c.rng_seed, "config");
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
    return parse_config(read_text_file(path), path.parent_path());
}

void validate(const ExperimentConfig& c) {
    const auto& d = c.dataset;
    const auto wrap = [](const char* where, auto&& check) {
        try {
            check();
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string(where) + ": " + e.what());
        }
    };
    if (d.kind == DatasetSpec::Kind::Synthetic) {
        if (d.model != "ba" && d.model != "er") throw ConfigError("dataset.model must be 'ba' or 'er'");
        if (d.n < 1) throw ConfigError("dataset.n must be positive");
        if (d.model == "ba" && (d.m < 1 || d.m >= d.n)) throw ConfigError("dataset.m must lie in [1, n)");
        if (d.model == "er" && !(d.p >= 0.0 && d.p <= 1.0)) throw ConfigError("dataset.p must lie in [0, 1]");
        if (d.snapshots < 1) throw ConfigError("dataset.snapshots must be positive");
        if (!(d.churn >= 0.0 && d.churn <= 1.0)) throw ConfigError("dataset.churn must lie in [0, 1]");
        if (d.snapshot >= d.snapshots) throw ConfigError("dataset.snapshot is past the last snapshot");
    } else {
        if (d.paths.empty()) throw ConfigError("dataset.paths is empty");
        if (d.kind == DatasetSpec::Kind::Temporal && d.paths.size() != 1) {
            throw ConfigError("a temporal dataset takes exactly one path");
        }
        for (const auto& p : d.paths) {
            if (!std::filesystem::exists(p)) throw ConfigError("dataset file not found: " + p.string());
        }
        if (d.kind == DatasetSpec::Kind::Temporal) {
            wrap("dataset.buckets", [&] { BucketSpec::parse(d.buckets); });
            if (d.persistence != "until_quit" && d.persistence != "per_bucket") {
                throw ConfigError("dataset.persistence must be 'until_quit' or 'per_bucket'");
            }
        }
    }
    if (c.algorithms.empty()) throw ConfigError("algorithms is empty");
    for (const auto& a : c.algorithms) {
        const auto& known = known_algorithms();
        if (std::find(known.begin(), known.end(), a) == known.end()) {
            throw ConfigError("unknown algorithm '" + a + "'");
        }
    }
    if (c.k.empty()) throw ConfigError("k is empty");
    for (auto k : c.k)
        if (k < 1) throw ConfigError("k values must be positive");
    wrap("ic", [&] { c.ic.validate(); });
    if (c.report_mc_runs < 1) throw ConfigError("ic.report_mc_runs must be positive");
    wrap("nomination", [&] { c.nomination.validate(); });
    wrap("ga", [&] {
        auto g = c.ga;
        g.seed_set_size = c.k.front();
        g.validate();
    });
    if (c.greedy_mc_runs < 1) throw ConfigError("greedy.mc_runs must be positive");
    for (const auto& [name, every] : c.cadence)
        if (every < 1) throw ConfigError("cadence." + name + " must be positive");
    for (auto t : c.sweep.degree_thresholds)
        if (t < 1) throw ConfigError("sweep.degree_threshold values must be positive");
    for (auto q : c.sweep.quantile_thresholds)
        if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("sweep.quantile_threshold values must lie in [0, 1]");
    for (auto g : c.sweep.generations)
        if (g < 1) throw ConfigError("sweep.generations values must be positive");
}

std::string canonical_yaml(const ExperimentConfig& cfg) { return render(cfg, true); }

std::string config_hash(const ExperimentConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(render(cfg, false))));
    return buf;
}

}  // namespace abem::harness
