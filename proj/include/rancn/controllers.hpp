#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rancn/agent.hpp"
#include "rancn/monitoring.hpp"
#include "rancn/policy.hpp"
#include "rancn/slicing.hpp"

namespace rancn::control {

enum class ControllerKind {
    round_robin,
    ran_only,
    cn_only,
    domain_isolated_pair,
    e2e_heuristic,
    exact_oracle,
    agent_driven,
};

std::string to_string(ControllerKind kind);
std::optional<ControllerKind> controller_from_string(const std::string& name);

struct AllocationResult {
    std::vector<slicing::AdmissionDecision> decisions;  // one per user
    int satisfied_total = 0;
    double runtime_ms = 0;  // wall clock; excluded from reproducibility
};

inline constexpr int kDefaultOracleCap = 12;

// Static baseline: equal PRB share per user on its cell (floor, min 1)
// regardless of need, chains embedded first-fit in the same id order.
AllocationResult run_round_robin(slicing::NetworkState& state);

// Greedy RAN admission by ascending PRB need; SFC embedding attempted only
// afterwards, so CN pressure surfaces as late downgrades.
AllocationResult run_ran_only(slicing::NetworkState& state);

// Mirror image: greedy embedding by ascending chain compute, PRBs assigned
// as an afterthought.
AllocationResult run_cn_only(slicing::NetworkState& state);

// Combined RAN-strategy + CN-strategy running independently; a user counts
// only when both domains picked it, modeling domain-isolated control.
AllocationResult run_domain_isolated_pair(slicing::NetworkState& state);

// Joint admission: users ordered by combined RAN+CN footprint, admitted only
// when jointly feasible, with one swap-and-refill local-search pass.
AllocationResult run_e2e_heuristic(slicing::NetworkState& state);

// Exhaustive subset search (branch-and-bound, descending cardinality) using
// the same deterministic sub-procedures as the heuristics. Refuses scenarios
// above the cap.
AllocationResult run_exact_oracle(slicing::NetworkState& state, int cap = kDefaultOracleCap);

AllocationResult run_controller(ControllerKind kind, slicing::NetworkState& state,
                                int oracle_cap = kDefaultOracleCap);

struct AgentRunOptions {
    std::string episode_id = "ep0";
    std::string objective =
        "Maximize the number of SLA-satisfied users across both slices by inspecting "
        "cross-domain KPIs and adjusting policy parameters when a domain is the bottleneck.";
    int episode_budget = 8;
    std::size_t context_char_limit = 4096;
    std::size_t short_term_window = 16;
    std::size_t retrieve_top_k = 3;
};

struct AgentRunOutcome {
    AllocationResult result;          // allocation in force after the loop
    slicing::SlaReport before;        // tick-0 report (pre-episode)
    slicing::SlaReport after;         // report for the returned allocation
    agent::ReActTrace trace;
    bool episode_aborted = false;
    bool reallocated = false;  // directives were accepted and applied
};

// Closed loop: e2e admission -> KPI ingest -> one ReAct episode through the
// orchestrator -> re-admission at the next tick when directives landed.
// Aborted episodes keep the pre-episode allocation, flagged.
AgentRunOutcome run_agent_driven(slicing::NetworkState& state, monitor::MonitoringDb& db,
                                 policy::Orchestrator& orchestrator,
                                 agent::ExperienceStore& experiences,
                                 const agent::ReasonerFn& reasoner,
                                 const AgentRunOptions& options = {});

// Registers the standard db.query / policy.apply tools against the given
// store and orchestrator (exposed for tests that drive episodes directly).
void register_standard_tools(agent::ToolRegistry& registry, const monitor::MonitoringDb& db,
                             policy::Orchestrator& orchestrator);

}  // namespace rancn::control
