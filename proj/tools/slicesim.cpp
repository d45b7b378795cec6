// slicesim - RAN-CN converged slicing experiments: deterministic scenario
// simulation, baseline/controller sweeps, oracle soundness checks, and the
// agent-driven closed control loop.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "rancn/config.hpp"
#include "rancn/errors.hpp"
#include "rancn/runner.hpp"

namespace {

rancn::exp::ExperimentConfig load_config(const std::string& path, const std::string& controller,
                                         long long seed_override, int workers_override,
                                         const std::string& output_dir,
                                         const std::string& reasoner) {
    auto config = path.empty() ? rancn::exp::ExperimentConfig{}
                               : rancn::exp::load_experiment_config(path);
    if (!controller.empty()) {
        const auto kind = rancn::control::controller_from_string(controller);
        if (!kind) throw rancn::ConfigError("unknown controller '" + controller + "'");
        config.controllers = {*kind};
    }
    if (seed_override >= 0) {
        config.seeds = {static_cast<std::uint64_t>(seed_override)};
    }
    if (workers_override > 0) config.workers = workers_override;
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (!reasoner.empty()) config.reasoner = reasoner;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RAN-CN converged network slicing simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string controller;
    std::string output_dir;
    std::string reasoner;
    long long seed = -1;
    int workers = 0;
    int max_users = 8;
    bool verbose = false;

    app.add_flag("--verbose", verbose, "verbose diagnostics");

    auto* simulate = app.add_subcommand("simulate", "run one scenario per controller and seed");
    simulate->add_option("--config", config_path, "experiment config file");
    simulate->add_option("--controller", controller, "override the controller list");
    simulate->add_option("--seed", seed, "override the seed list");
    simulate->add_option("--output-dir", output_dir, "output directory");
    simulate->add_option("--workers", workers, "worker pool size");

    auto* sweep = app.add_subcommand("sweep", "cartesian sweep over user counts x controllers x seeds");
    sweep->add_option("--config", config_path, "experiment config file");
    sweep->add_option("--output-dir", output_dir, "output directory");
    sweep->add_option("--workers", workers, "worker pool size");

    auto* oracle = app.add_subcommand("oracle-check", "verify heuristics never beat the exact oracle");
    oracle->add_option("--config", config_path, "experiment config file");
    oracle->add_option("--max-users", max_users, "scenario size (must be within the oracle cap)");
    oracle->add_option("--output-dir", output_dir, "output directory");

    auto* agent = app.add_subcommand("agent-run", "closed-loop run with a ReAct episode");
    agent->add_option("--config", config_path, "experiment config file");
    agent->add_option("--reasoner", reasoner, "scripted | heuristic | external");
    agent->add_option("--seed", seed, "override the seed list");
    agent->add_option("--output-dir", output_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto config =
            load_config(config_path, controller, seed, workers, output_dir, reasoner);
        if (verbose) std::fputs(config.canonical_text().c_str(), stderr);
        if (simulate->parsed()) return rancn::exp::cmd_simulate(config);
        if (sweep->parsed()) return rancn::exp::cmd_sweep(config);
        if (oracle->parsed()) return rancn::exp::cmd_oracle_check(config, max_users);
        if (agent->parsed()) return rancn::exp::cmd_agent_run(config);
    } catch (const rancn::ConfigError& ex) {
        std::fprintf(stderr, "config error: %s\n", ex.what());
        return rancn::exp::kExitConfigError;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return rancn::exp::kExitConfigError;
    }
    return rancn::exp::kExitOk;
}
