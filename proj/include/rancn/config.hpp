#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rancn/controllers.hpp"
#include "rancn/policy.hpp"
#include "rancn/reasoners.hpp"
#include "rancn/slicing.hpp"

namespace rancn::exp {

// Fully resolved experiment configuration. Parsed from a plain dotted-key
// text document; unknown keys are errors so typos in radio constants cannot
// silently poison an experiment.
struct ExperimentConfig {
    // scenario
    int n_users = 40;
    std::vector<int> user_sweep;                       // non-empty enables `sweep`
    std::map<std::string, int> slice_mix = {{"eMBB", 20}, {"URLLC", 20}};
    slicing::ScenarioConfig scenario;

    // run
    std::vector<control::ControllerKind> controllers = {
        control::ControllerKind::round_robin,
        control::ControllerKind::domain_isolated_pair,
        control::ControllerKind::e2e_heuristic,
    };
    std::vector<std::uint64_t> seeds = {1};
    std::string output_dir = "out";
    int workers = 1;

    // agent loop
    int episode_budget = 8;
    int context_char_limit = 4096;
    int short_term_window = 16;
    int retrieve_top_k = 3;
    std::string reasoner = "heuristic";  // scripted | heuristic | external

    reasoners::HeuristicConfig heuristic;
    reasoners::ExternalReasonerConfig external;
    policy::ConstraintTemplate constraints;
    int oracle_cap = 12;

    // Slice mix rescaled to n by largest remainder (weights = configured mix).
    std::map<std::string, int> mix_for(int n) const;

    // Canonical key=value rendering of every resolved field.
    std::string canonical_text() const;
    std::uint64_t digest() const;
};

// Parses `key = value` lines with '#' comments. Throws ConfigError naming the
// offending key/value and line.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

// The full key set with defaults, rendered as a config document.
std::string default_config_text();

}  // namespace rancn::exp
