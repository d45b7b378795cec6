#include <doctest.h>

#include "rancn/controllers.hpp"
#include "rancn/errors.hpp"
#include "rancn/reasoners.hpp"
#include "rancn/rng.hpp"
#include "support/oracles.hpp"

using namespace rancn;

namespace {

slicing::NetworkState scenario(int n, std::uint64_t seed,
                               slicing::ScenarioConfig cfg = slicing::default_scenario_config()) {
    return slicing::generate_scenario(n, {{"eMBB", n / 2}, {"URLLC", n - n / 2}}, seed, cfg);
}

// Every controller must leave a conservation-clean state covering all users.
void check_postconditions(const slicing::NetworkState& state,
                          const control::AllocationResult& result) {
    REQUIRE(result.decisions.size() == state.users.size());
    std::set<std::string> seen;
    for (const auto& d : result.decisions) {
        CHECK(seen.insert(d.user_id).second);
        if (d.admitted) {
            CHECK(d.assigned_prbs > 0);
            CHECK(d.embedding_request.has_value());
            CHECK(state.topology.embeddings.count(*d.embedding_request) == 1);
        } else {
            CHECK(d.reject_reason.has_value());
        }
    }
    for (const auto& cell : state.cells) {
        CHECK_NOTHROW(ran::prb_utilization(cell, state.users));  // no oversubscription
    }
    CHECK(oracles::usage_matches(state.topology));
    // Every live embedding is owned by an admitted user.
    for (const auto& [req_id, emb] : state.topology.embeddings) {
        bool owned = false;
        for (const auto& d : result.decisions) {
            owned = owned || (d.admitted && d.embedding_request == req_id);
        }
        CHECK(owned);
    }
}

}  // namespace

TEST_CASE("round_robin: one user with ample resources gets the whole pool") {
    auto cfg = slicing::default_scenario_config();
    auto state = slicing::generate_scenario(1, {{"URLLC", 1}}, 3, cfg);
    const auto result = control::run_round_robin(state);
    CHECK(result.satisfied_total == 1);
    CHECK(result.decisions[0].assigned_prbs == 100);  // floor(100/1)
    check_postconditions(state, result);
}

TEST_CASE("round_robin: 200 users on a 100-PRB cell admit at most 100 via the min-1 rule") {
    auto cfg = slicing::default_scenario_config();
    cfg.fat_tree.server_compute_units = 10000;  // CN out of the way
    auto state = slicing::generate_scenario(200, {{"URLLC", 200}}, 3, cfg);
    const auto result = control::run_round_robin(state);
    int admitted = 0, with_one = 0;
    for (const auto& d : result.decisions) {
        admitted += d.admitted ? 1 : 0;
        with_one += d.admitted && d.assigned_prbs == 1 ? 1 : 0;
    }
    CHECK(admitted == 100);
    CHECK(with_one == 100);
    check_postconditions(state, result);
}

TEST_CASE("round_robin: never beats the e2e heuristic in >=90% of 100 seeds") {
    int rr_not_worse = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto rr_state = scenario(20, seed);
        auto e2e_state = scenario(20, seed);
        const int rr = control::run_round_robin(rr_state).satisfied_total;
        const int e2e = control::run_e2e_heuristic(e2e_state).satisfied_total;
        rr_not_worse += rr <= e2e ? 1 : 0;
    }
    CHECK(rr_not_worse >= 90);
}

TEST_CASE("ran_only vs cn_only: diverge on a CN-rich RAN-poor fixture") {
    auto cfg = slicing::default_scenario_config();
    cfg.cell_total_prbs = 30;                      // RAN-poor
    cfg.fat_tree.server_compute_units = 10000;     // CN-rich
    auto ran_state = scenario(20, 16, cfg);
    auto cn_state = scenario(20, 16, cfg);
    const int ran = control::run_ran_only(ran_state).satisfied_total;
    const int cn = control::run_cn_only(cn_state).satisfied_total;
    CHECK(ran != cn);
    CHECK(ran > cn);  // PRB-aware ordering wins when PRBs are the only bottleneck
    check_postconditions(ran_state, control::AllocationResult{ran_state.decisions, ran, 0});
    check_postconditions(cn_state, control::AllocationResult{cn_state.decisions, cn, 0});
}

TEST_CASE("unconstrained scenario: every strategy reaches the oracle optimum") {
    auto cfg = slicing::default_scenario_config();
    cfg.cell_total_prbs = 2000;
    cfg.fat_tree.server_compute_units = 10000;
    for (const auto kind :
         {control::ControllerKind::ran_only, control::ControllerKind::cn_only,
          control::ControllerKind::e2e_heuristic, control::ControllerKind::domain_isolated_pair}) {
        auto state = scenario(8, 11, cfg);
        const auto result = control::run_controller(kind, state);
        CHECK(result.satisfied_total == 8);
    }
    auto state = scenario(8, 11, cfg);
    CHECK(control::run_exact_oracle(state).satisfied_total == 8);
}

TEST_CASE("domain_isolated_pair: satisfied set is the intersection of both domains") {
    auto state = scenario(40, 7);
    const auto pair = control::run_domain_isolated_pair(state);

    auto ran_state = scenario(40, 7);
    const auto ran = control::run_ran_only(ran_state);
    auto cn_state = scenario(40, 7);
    const auto cn = control::run_cn_only(cn_state);

    // The pair can never satisfy a user that either isolated domain skipped.
    for (std::size_t i = 0; i < state.users.size(); ++i) {
        if (pair.decisions[i].admitted) {
            CHECK(ran_state.users[i].assigned_prbs > 0);
            CHECK(cn.decisions[i].embedding_request.has_value());
        }
    }
    CHECK(pair.satisfied_total <= ran.satisfied_total);
    check_postconditions(state, pair);
}

TEST_CASE("e2e_heuristic: all jointly feasible users are admitted") {
    auto cfg = slicing::default_scenario_config();
    cfg.cell_total_prbs = 3000;
    cfg.fat_tree.server_compute_units = 5000;
    auto state = scenario(12, 13, cfg);
    const auto result = control::run_e2e_heuristic(state);
    CHECK(result.satisfied_total == 12);
    check_postconditions(state, result);
}

TEST_CASE("e2e_heuristic: within 1 of the oracle on >=95% of 200 small scenarios, never above") {
    int within_one = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto h_state = scenario(10, seed);
        auto o_state = scenario(10, seed);
        const int h = control::run_e2e_heuristic(h_state).satisfied_total;
        const int o = control::run_exact_oracle(o_state).satisfied_total;
        REQUIRE(h <= o);
        within_one += (o - h) <= 1 ? 1 : 0;
    }
    CHECK(within_one >= 190);
}

TEST_CASE("e2e_heuristic beats the pair at the 40-user operating point (paired seeds)") {
    double e2e_sum = 0, pair_sum = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto e_state = scenario(40, seed);
        auto p_state = scenario(40, seed);
        const int e = control::run_e2e_heuristic(e_state).satisfied_total;
        const int p = control::run_domain_isolated_pair(p_state).satisfied_total;
        e2e_sum += e;
        pair_sum += p;
        CHECK(e >= p);  // holds per-seed in this regime
    }
    CHECK(e2e_sum / 30 > pair_sum / 30);
}

TEST_CASE("exact_oracle: two users with ample resources are both admitted") {
    auto cfg = slicing::default_scenario_config();
    auto state = slicing::generate_scenario(2, {{"URLLC", 2}}, 17, cfg);
    const auto result = control::run_exact_oracle(state);
    CHECK(result.satisfied_total == 2);
}

TEST_CASE("exact_oracle: single PRB forces the lexicographically smaller user") {
    auto cfg = slicing::default_scenario_config();
    cfg.cell_total_prbs = 1;
    cfg.region = {100, 100, {{50, 50}}};  // everyone close: 1 PRB covers the URLLC floor
    auto state = slicing::generate_scenario(2, {{"URLLC", 2}}, 19, cfg);
    const auto result = control::run_exact_oracle(state);
    CHECK(result.satisfied_total == 1);
    CHECK(result.decisions[0].user_id == "ue0000");
    CHECK(result.decisions[0].admitted);
    CHECK(!result.decisions[1].admitted);
}

TEST_CASE("exact_oracle: refuses scenarios above the cap") {
    auto state = scenario(13, 3);
    CHECK_THROWS_AS(control::run_exact_oracle(state, 12), ConfigError);
}

TEST_CASE("exact_oracle: equals the unpruned full enumeration on random 8-user scenarios") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto fresh = scenario(8, 400 + seed);
        const int expected = oracles::naive_best_subset(fresh);
        auto state = scenario(8, 400 + seed);
        const auto result = control::run_exact_oracle(state);
        CHECK(result.satisfied_total == expected);
        check_postconditions(state, result);
    }
}

TEST_CASE("soundness: no controller beats the oracle on small scenarios") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto o_state = scenario(9, 700 + seed);
        const int oracle = control::run_exact_oracle(o_state).satisfied_total;
        for (const auto kind :
             {control::ControllerKind::round_robin, control::ControllerKind::ran_only,
              control::ControllerKind::cn_only, control::ControllerKind::domain_isolated_pair,
              control::ControllerKind::e2e_heuristic}) {
            auto state = scenario(9, 700 + seed);
            CHECK(control::run_controller(kind, state).satisfied_total <= oracle);
        }
    }
}

TEST_CASE("determinism: controllers are pure functions of (scenario, seed)") {
    for (const auto kind :
         {control::ControllerKind::round_robin, control::ControllerKind::ran_only,
          control::ControllerKind::cn_only, control::ControllerKind::domain_isolated_pair,
          control::ControllerKind::e2e_heuristic}) {
        auto a = scenario(25, 23);
        auto b = scenario(25, 23);
        control::run_controller(kind, a);
        control::run_controller(kind, b);
        CHECK(slicing::state_digest(a) == slicing::state_digest(b));
    }
}

TEST_CASE("controllers require a fresh scenario") {
    auto state = scenario(10, 29);
    control::run_e2e_heuristic(state);
    CHECK_THROWS_AS(control::run_e2e_heuristic(state), IntegrityError);
}

TEST_CASE("admission cap: controllers stop admitting at the cap with reason policy") {
    auto state = scenario(20, 31);
    state.policy.admission_cap = 5;
    const auto result = control::run_e2e_heuristic(state);
    CHECK(state.admitted_count() == 5);
    int policy_rejects = 0;
    for (const auto& d : result.decisions) {
        policy_rejects +=
            (!d.admitted && d.reject_reason == slicing::RejectReason::policy) ? 1 : 0;
    }
    CHECK(policy_rejects > 0);
}

// ---- agent-driven closed loop ---------------------------------------------

namespace {

// CN bandwidth-bottlenecked fixture: one reachable server behind thin core
// links, flows sized so the core tier is the binding resource.
slicing::ScenarioConfig bottleneck_config() {
    auto cfg = slicing::default_scenario_config();
    cfg.region = {300, 300, {{150, 150}}};
    cfg.fat_tree.k = 2;
    cfg.fat_tree.server_compute_units = 500;
    cfg.fat_tree.core_link_bps = 0.4e9;
    cfg.slices.at("URLLC").flow_bandwidth_bps = 30e6;
    return cfg;
}

slicing::NetworkState bottleneck_scenario(std::uint64_t seed) {
    auto state = slicing::generate_scenario(16, {{"URLLC", 16}}, seed, bottleneck_config());
    // Starve the pod-0 server so every chain must cross the core links.
    state.topology.node("pod00-srv000").compute_capacity = 4;
    return state;
}

}  // namespace

TEST_CASE("agent_driven: healthy scenario issues zero directives, equals e2e") {
    auto cfg = slicing::default_scenario_config();
    auto state = slicing::generate_scenario(6, {{"eMBB", 3}, {"URLLC", 3}}, 37, cfg);
    auto reference = slicing::generate_scenario(6, {{"eMBB", 3}, {"URLLC", 3}}, 37, cfg);
    const auto expected = control::run_e2e_heuristic(reference);

    monitor::MonitoringDb db;
    policy::Orchestrator orchestrator({}, state);
    agent::ExperienceStore experiences;
    reasoners::HeuristicReasoner heuristic;
    const auto outcome = control::run_agent_driven(
        state, db, orchestrator, experiences,
        [&heuristic](const std::string& ctx) { return heuristic(ctx); });

    CHECK(outcome.trace.final_directives.empty());
    CHECK(!outcome.reallocated);
    CHECK(outcome.result.satisfied_total == expected.satisfied_total);
    CHECK(outcome.before.satisfied_total == outcome.after.satisfied_total);
    CHECK(outcome.trace.outcome == agent::EpisodeOutcome::finished);
    CHECK(experiences.size() == 1);
}

TEST_CASE("agent_driven: CN bottleneck triggers Core_Bandwidth and improves satisfaction") {
    auto state = bottleneck_scenario(41);
    monitor::MonitoringDb db;
    policy::Orchestrator orchestrator({}, state);
    agent::ExperienceStore experiences;
    reasoners::HeuristicConfig hcfg;
    hcfg.latency_watermark_ms = 1.5;
    reasoners::HeuristicReasoner heuristic(hcfg);

    const auto outcome = control::run_agent_driven(
        state, db, orchestrator, experiences,
        [&heuristic](const std::string& ctx) { return heuristic(ctx); });

    CHECK(outcome.before.satisfied_total < 16);  // the bottleneck bites first
    bool core_bw_accepted = false;
    for (const auto& rec : orchestrator.audit_log()) {
        core_bw_accepted = core_bw_accepted ||
                           (rec.verdict == policy::Verdict::accepted &&
                            rec.directive_text.find("Core_Bandwidth") != std::string::npos);
    }
    CHECK(core_bw_accepted);
    CHECK(outcome.reallocated);
    CHECK(outcome.after.satisfied_total >= outcome.before.satisfied_total);
    CHECK(outcome.after.satisfied_total > outcome.before.satisfied_total);
    CHECK(state.tick == 1);
}

TEST_CASE("agent_driven: scripted replay gives identical results across runs") {
    auto run_once = [](std::uint64_t seed) {
        auto state = scenario(12, seed);
        monitor::MonitoringDb db;
        policy::Orchestrator orchestrator({}, state);
        agent::ExperienceStore experiences;
        reasoners::ScriptedReasoner scripted({
            "Thought: reserve\nAction: Apply[ApplyPolicy[PRB_reservation += 10%]]",
            "Thought: widen\nAction: Apply[ApplyPolicy[Core_Bandwidth += 1 Gbps]]",
            "Thought: done\nAction: Finish[applied]",
        });
        auto outcome = control::run_agent_driven(
            state, db, orchestrator, experiences,
            [&scripted](const std::string& ctx) { return scripted(ctx); });
        return std::make_pair(slicing::state_digest(state),
                              agent::trace_jsonl(outcome.trace, 0));
    };
    const auto a = run_once(43);
    const auto b = run_once(43);
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
}

TEST_CASE("agent_driven: aborted episode keeps the pre-episode allocation, flagged") {
    auto state = scenario(10, 47);
    auto reference = scenario(10, 47);
    const auto expected = control::run_e2e_heuristic(reference);

    monitor::MonitoringDb db;
    policy::Orchestrator orchestrator({}, state);
    agent::ExperienceStore experiences;
    reasoners::ScriptedReasoner broken({"junk", "junk", "junk"});
    const auto outcome = control::run_agent_driven(
        state, db, orchestrator, experiences,
        [&broken](const std::string& ctx) { return broken(ctx); });

    CHECK(outcome.episode_aborted);
    CHECK(!outcome.reallocated);
    CHECK(outcome.result.satisfied_total == expected.satisfied_total);
    CHECK(state.tick == 0);
}

TEST_CASE("audit reconciliation: accepted records equal final_directives across episodes") {
    auto state = scenario(12, 53);
    monitor::MonitoringDb db;
    policy::Orchestrator orchestrator({}, state);
    agent::ExperienceStore experiences;

    std::size_t directives_total = 0;
    for (int episode = 0; episode < 3; ++episode) {
        slicing::reset_allocations(state);
        state.tick = 10 * episode;  // keep the shared DB's series monotone
        reasoners::ScriptedReasoner scripted({
            "Thought: a\nAction: Apply[ApplyPolicy[PRB_reservation += 2%]]",
            "Thought: b\nAction: Apply[ApplyPolicy[PRB_reservation += 90%]]",  // rejected
            "Thought: c\nAction: Finish[pass " + std::to_string(episode) + "]",
        });
        const auto outcome = control::run_agent_driven(
            state, db, orchestrator, experiences,
            [&scripted](const std::string& ctx) { return scripted(ctx); });
        directives_total += outcome.trace.final_directives.size();
    }
    std::size_t accepted = 0;
    for (const auto& rec : orchestrator.audit_log()) {
        accepted += rec.verdict == policy::Verdict::accepted ? 1 : 0;
    }
    CHECK(accepted == directives_total);
    CHECK(orchestrator.audit_log().size() == 6);  // 3 episodes x (1 accepted + 1 rejected)
}

TEST_CASE("monotone resources: extra capacity never lowers the oracle optimum") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        auto base_cfg = slicing::default_scenario_config();
        base_cfg.cell_total_prbs = 40;  // scarce enough that capacity matters
        auto base_state = scenario(8, 900 + seed, base_cfg);
        const int base = control::run_exact_oracle(base_state).satisfied_total;

        auto more_prbs = base_cfg;
        more_prbs.cell_total_prbs = 80;
        auto prb_state = scenario(8, 900 + seed, more_prbs);
        CHECK(control::run_exact_oracle(prb_state).satisfied_total >= base);

        auto more_compute = base_cfg;
        more_compute.fat_tree.server_compute_units = 100;
        auto compute_state = scenario(8, 900 + seed, more_compute);
        CHECK(control::run_exact_oracle(compute_state).satisfied_total >= base);

        auto more_bandwidth = base_cfg;
        more_bandwidth.fat_tree.edge_link_bps *= 2;
        more_bandwidth.fat_tree.agg_link_bps *= 2;
        more_bandwidth.fat_tree.core_link_bps *= 2;
        auto bw_state = scenario(8, 900 + seed, more_bandwidth);
        CHECK(control::run_exact_oracle(bw_state).satisfied_total >= base);
    }
}

TEST_CASE("reservations set by the orchestrator are respected at re-admission") {
    auto state = scenario(40, 61);
    monitor::MonitoringDb db;
    policy::Orchestrator orchestrator({}, state);
    agent::ExperienceStore experiences;
    reasoners::ScriptedReasoner scripted({
        "Thought: guarantee eMBB headroom\n"
        "Action: Apply[ApplyPolicy[PRB_reservation.slice=eMBB += 20%]]",
        "Thought: done\nAction: Finish[reserved]",
    });
    const auto outcome = control::run_agent_driven(
        state, db, orchestrator, experiences,
        [&scripted](const std::string& ctx) { return scripted(ctx); });
    REQUIRE(outcome.reallocated);

    for (const auto& cell : state.cells) {
        std::map<std::string, int> used;
        for (const auto& u : state.users) {
            if (u.serving_cell == cell.id) used[u.slice_id] += u.assigned_prbs;
        }
        int held_for_others = 0;
        for (const auto& [slice_id, fraction] : cell.prb_reservation) {
            const int guaranteed = static_cast<int>(fraction * cell.total_prbs + 1e-9);
            held_for_others += std::max(0, guaranteed - used[slice_id]);
        }
        int total_used = 0;
        for (const auto& [slice_id, n] : used) total_used += n;
        CHECK(total_used + held_for_others <= cell.total_prbs);
    }
}
