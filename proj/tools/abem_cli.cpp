// abem: experiment runner. Exit codes: 0 ok, 1 runtime failure, 2 bad
// configuration or arguments.
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "abem/error.hpp"
#include "abem/harness/commands.hpp"
#include "abem/harness/config.hpp"

namespace {

using Command = std::function<void(const abem::harness::ExperimentConfig&, const abem::harness::RunOptions&)>;

struct Args {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    bool resume = false;
};

CLI::App* add_command(CLI::App& app, const char* name, const char* help, Args& args) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", args.config, "YAML experiment config")->required();
    sub->add_option("-s,--seed", args.seed, "overrides rng_seed");
    sub->add_option("-o,--out", args.out, "output directory")->capture_default_str();
    sub->add_flag("--resume", args.resume, "skip cells recorded in the checkpoint");
    return sub;
}

}  // namespace

int main(int argc, char** argv) {
    namespace h = abem::harness;
    CLI::App app{"Agent-based evolutionary seeding for dynamic networks"};
    app.require_subcommand(1);
    Args args;
    const std::pair<const char*, Command> commands[] = {
        {"convergence", h::cmd_convergence}, {"static", h::cmd_static},
        {"sweep", h::cmd_sweep},             {"dynamic", h::cmd_dynamic},
        {"gen-synthetic", h::cmd_gen_synthetic},
    };
    const char* help[] = {
        "GA traces of ABEM, plain GA and pool-GA on one snapshot",
        "every algorithm and k on one snapshot",
        "ABEM over the threshold and generation grid",
        "replay every snapshot with re-selection cadences",
        "write the synthetic dataset as edge lists",
    };
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < std::size(commands); ++i)
        subs.push_back(add_command(app, commands[i].first, help[i], args));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        auto cfg = h::load_config(args.config);
        if (args.seed) cfg.rng_seed = *args.seed;
        const h::RunOptions opt{args.out, args.resume};
        for (std::size_t i = 0; i < subs.size(); ++i)
            if (subs[i]->parsed()) commands[i].second(cfg, opt);
    } catch (const h::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
