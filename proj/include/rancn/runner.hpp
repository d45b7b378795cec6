#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rancn/config.hpp"

namespace rancn::exp {

// Exit codes shared with the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitSoundnessViolation = 2;
inline constexpr int kExitPartialFailure = 3;

struct RunOutput {
    std::string scenario_id;
    std::string artifact_stem;  // "<controller>-<scenario_id>", names every export
    std::string controller;
    std::uint64_t seed = 0;
    int n_users = 0;
    int satisfied_total = 0;
    int admitted_total = 0;
    double ratio = 0;
    double runtime_ms = 0;
    std::vector<std::string> flags;

    std::string record_jsonl;  // one RunRecord line
    std::string sla_jsonl;     // one line per tick
    std::string trace_jsonl;   // agent runs only
    std::string audit_jsonl;   // agent runs only
    std::string metrics_csv;   // agent runs only: end-of-run monitoring DB dump
};

// Executes one scenario x controller x seed. The scenario is a pure function
// of (seed, n_users, mix); controllers add no randomness of their own.
RunOutput execute_run(const ExperimentConfig& config, control::ControllerKind controller,
                      std::uint64_t seed, int n_users);

agent::ReasonerFn make_reasoner(const ExperimentConfig& config, const std::string& kind);

// The scripted sequence shipped as the default replay: the two canonical
// directives, then Finish.
std::vector<std::string> default_script();

int cmd_simulate(const ExperimentConfig& config);
int cmd_sweep(const ExperimentConfig& config);
int cmd_oracle_check(const ExperimentConfig& config, int max_users);
int cmd_agent_run(const ExperimentConfig& config);

}  // namespace rancn::exp
