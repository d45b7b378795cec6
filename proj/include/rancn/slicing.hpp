#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rancn/cn.hpp"
#include "rancn/ran.hpp"

namespace rancn::slicing {

enum class SliceKind { embb, urllc };
std::string to_string(SliceKind kind);

struct SliceSpec {
    std::string slice_id;
    SliceKind kind = SliceKind::embb;
    double rate_floor_bps = 0;
    double latency_budget_ms = 0;
    int chain_min = 0;  // allowed VNF chain length range
    int chain_max = 0;
    double flow_bandwidth_bps = 0;

    void validate() const;  // throws ConfigError
};

enum class RejectReason { ran_capacity, cn_compute, cn_bandwidth, latency, policy };
std::string to_string(RejectReason reason);

struct AdmissionDecision {
    std::string user_id;
    bool admitted = false;
    int assigned_prbs = 0;
    std::optional<std::string> embedding_request;  // set iff admitted
    std::optional<RejectReason> reject_reason;     // set iff rejected
};

struct SlaViolation {
    std::string user_id;
    std::string reason;
};

struct SlaReport {
    long tick = 0;
    int satisfied_total = 0;
    std::map<std::string, int> satisfied_by_slice;
    double satisfaction_ratio = 1.0;  // defined as 1 for zero users
    std::vector<SlaViolation> violations;
};

// One JSON-lines record per tick; field names are fixed.
std::string sla_report_jsonl(const SlaReport& report);

struct PolicyState {
    std::optional<long> admission_cap;  // network-wide, set by directives
};

// Joint RAN+CN snapshot at a control tick. Value-semantic: controllers and
// the dispatcher copy it freely for rollback and replay.
struct NetworkState {
    long tick = 0;
    std::uint64_t scenario_seed = 0;
    ran::RegionSpec region;
    ran::PathLossParams pathloss;
    ran::RadioParams radio;
    std::vector<ran::Cell> cells;
    std::vector<ran::UserTerminal> users;
    cn::FatTreeTopology topology;
    std::map<std::string, SliceSpec> slices;
    std::map<std::string, cn::SfcRequest> sfc_templates;  // user id -> chain template
    std::vector<AdmissionDecision> decisions;             // aligned with users
    PolicyState policy;

    const ran::UserTerminal& user(const std::string& id) const;
    ran::UserTerminal& user(const std::string& id);
    const ran::Cell& cell(const std::string& id) const;
    ran::Cell& cell(const std::string& id);
    const AdmissionDecision& decision(const std::string& user_id) const;
    AdmissionDecision& decision(const std::string& user_id);
    const SliceSpec& slice_of(const ran::UserTerminal& u) const;
    int admitted_count() const;
};

struct ScenarioConfig {
    ran::RegionSpec region{1000, 1000, {{500, 500}}};
    double cell_tx_power_dbm = 43;
    int cell_total_prbs = 100;
    double prb_bandwidth_hz = 180e3;
    ran::PathLossParams pathloss;
    ran::RadioParams radio;
    cn::FatTreeParams fat_tree;
    int vnf_compute_min = 5;
    int vnf_compute_max = 15;
    double vnf_processing_ms = 0.5;
    bool poisson_user_count = false;  // PPP fidelity mode: N ~ Poisson(n_users)
    // eMBB + URLLC archetypes with the documented default SLAs.
    std::map<std::string, SliceSpec> slices = {
        {"eMBB", SliceSpec{"eMBB", SliceKind::embb, 50e6, 100.0, 4, 6, 50e6}},
        {"URLLC", SliceSpec{"URLLC", SliceKind::urllc, 2e6, 5.0, 2, 3, 2e6}},
    };
};

ScenarioConfig default_scenario_config();

// Scenario at t=0: users placed and attached, per-user SFC templates drawn,
// topology built, nothing admitted.
NetworkState generate_scenario(int n_users, const std::map<std::string, int>& slice_mix,
                               std::uint64_t seed, const ScenarioConfig& config);

// Per-PRB link SNR for a user against its serving cell (shadowing draw
// seeded per user from the scenario seed).
double user_snr(const NetworkState& state, const ran::UserTerminal& u);

// PRBs the user's slice may still draw on this cell: free PRBs minus the
// unconsumed reservations guaranteed to other slices.
int available_prbs_for(const NetworkState& state, const ran::Cell& cell,
                       const std::string& slice_id);

struct SlaEvaluation {
    bool satisfied = false;
    std::string reason;  // empty when satisfied
};

// Pure function of state: admitted AND rate >= floor AND embedding live AND
// latency <= budget, closed inequalities. First failed check names the reason.
SlaEvaluation evaluate_user_sla(const NetworkState& state, const std::string& user_id);

SlaReport sla_report(const NetworkState& state);

struct Feasibility {
    bool ran_feasible = false;
    bool cn_feasible = false;
    bool joint_feasible = false;
};

// Joint feasibility under current residual resources; never mutates state.
Feasibility feasibility_check(const NetworkState& state, const std::string& user_id);

// Drops every allocation (PRBs, embeddings, decisions) while keeping policy
// parameters (reservations, capacities, admission cap). Used when directives
// take effect at the next control tick.
void reset_allocations(NetworkState& state);

std::uint64_t state_digest(const NetworkState& state);

}  // namespace rancn::slicing
