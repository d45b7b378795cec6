#include "rancn/controllers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "rancn/errors.hpp"
#include "rancn/strutil.hpp"

namespace rancn::control {

using slicing::AdmissionDecision;
using slicing::NetworkState;
using slicing::RejectReason;

std::string to_string(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::round_robin: return "RoundRobin";
        case ControllerKind::ran_only: return "RanOnly";
        case ControllerKind::cn_only: return "CnOnly";
        case ControllerKind::domain_isolated_pair: return "DomainIsolatedPair";
        case ControllerKind::e2e_heuristic: return "E2EHeuristic";
        case ControllerKind::exact_oracle: return "ExactOracle";
        case ControllerKind::agent_driven: return "AgentDriven";
    }
    return "?";
}

std::optional<ControllerKind> controller_from_string(const std::string& name) {
    if (name == "RoundRobin") return ControllerKind::round_robin;
    if (name == "RanOnly") return ControllerKind::ran_only;
    if (name == "CnOnly") return ControllerKind::cn_only;
    if (name == "DomainIsolatedPair") return ControllerKind::domain_isolated_pair;
    if (name == "E2EHeuristic") return ControllerKind::e2e_heuristic;
    if (name == "ExactOracle") return ControllerKind::exact_oracle;
    if (name == "AgentDriven") return ControllerKind::agent_driven;
    return std::nullopt;
}

namespace {

struct UserPlan {
    std::size_t index = 0;  // into state.users
    double snr = 0;
    int needed = ran::kNoPrbCount;  // PRBs for the slice rate floor
    double chain_compute = 0;
};

std::vector<UserPlan> build_plans(const NetworkState& state) {
    std::vector<UserPlan> plans;
    plans.reserve(state.users.size());
    for (std::size_t i = 0; i < state.users.size(); ++i) {
        const auto& u = state.users[i];
        const auto& spec = state.slice_of(u);
        UserPlan p;
        p.index = i;
        p.snr = slicing::user_snr(state, u);
        if (p.snr > 0) {
            p.needed = ran::prbs_needed(spec.rate_floor_bps, p.snr,
                                        state.cell(u.serving_cell).prb_bandwidth_hz);
        }
        for (const auto& vnf : state.sfc_templates.at(u.id).chain) {
            p.chain_compute += vnf.compute_demand;
        }
        plans.push_back(p);
    }
    return plans;
}

bool under_admission_cap(const NetworkState& state) {
    return !state.policy.admission_cap || state.admitted_count() < *state.policy.admission_cap;
}

RejectReason reason_from(cn::EmbedFailure failure) {
    switch (failure) {
        case cn::EmbedFailure::compute: return RejectReason::cn_compute;
        case cn::EmbedFailure::bandwidth: return RejectReason::cn_bandwidth;
        case cn::EmbedFailure::latency: return RejectReason::latency;
        case cn::EmbedFailure::none: break;
    }
    return RejectReason::cn_compute;
}

void reject(NetworkState& state, const std::string& user_id, RejectReason reason) {
    auto& d = state.decision(user_id);
    d.admitted = false;
    d.assigned_prbs = 0;
    d.embedding_request.reset();
    d.reject_reason = reason;
}

void admit(NetworkState& state, const std::string& user_id, int prbs,
           const std::string& request_id) {
    auto& d = state.decision(user_id);
    d.admitted = true;
    d.assigned_prbs = prbs;
    d.embedding_request = request_id;
    d.reject_reason.reset();
    state.user(user_id).assigned_prbs = prbs;
}

void require_fresh(const NetworkState& state, const char* controller) {
    if (state.admitted_count() != 0 || !state.topology.embeddings.empty()) {
        throw IntegrityError(std::string(controller) + " requires a fresh scenario");
    }
}

AllocationResult finish_result(NetworkState& state,
                               std::chrono::steady_clock::time_point started) {
    AllocationResult result;
    result.decisions = state.decisions;
    result.satisfied_total = slicing::sla_report(state).satisfied_total;
    result.runtime_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    return result;
}

// Try to admit one user end to end: PRBs by exact need, chain by first-fit.
// Returns the reject reason on failure; state unchanged then.
std::optional<RejectReason> try_admit_joint(NetworkState& state, const UserPlan& plan) {
    const auto& u = state.users[plan.index];
    if (!under_admission_cap(state)) return RejectReason::policy;
    if (plan.needed == ran::kNoPrbCount) return RejectReason::ran_capacity;
    const auto& cell = state.cell(u.serving_cell);
    if (plan.needed > slicing::available_prbs_for(state, cell, u.slice_id)) {
        return RejectReason::ran_capacity;
    }
    const auto embed = cn::embed_sfc(state.topology, state.sfc_templates.at(u.id));
    if (!embed.embedding) return reason_from(embed.failure);
    admit(state, u.id, plan.needed, embed.embedding->request_id);
    return std::nullopt;
}

}  // namespace

AllocationResult run_round_robin(NetworkState& state) {
    const auto started = std::chrono::steady_clock::now();
    require_fresh(state, "RoundRobin");

    std::map<std::string, int> attached;
    for (const auto& u : state.users) attached[u.serving_cell] += 1;
    std::map<std::string, int> share;
    std::map<std::string, int> free_prbs;
    for (const auto& cell : state.cells) {
        const int n = attached.count(cell.id) ? attached.at(cell.id) : 0;
        share[cell.id] = n > 0 ? std::max(1, cell.total_prbs / n) : cell.total_prbs;
        free_prbs[cell.id] = cell.total_prbs;
    }

    for (const auto& u : state.users) {  // id order
        if (!under_admission_cap(state)) {
            reject(state, u.id, RejectReason::policy);
            continue;
        }
        const int s = share.at(u.serving_cell);
        if (free_prbs.at(u.serving_cell) < s) {
            reject(state, u.id, RejectReason::ran_capacity);
            continue;
        }
        const auto embed = cn::embed_sfc(state.topology, state.sfc_templates.at(u.id));
        if (!embed.embedding) {
            reject(state, u.id, reason_from(embed.failure));
            continue;  // the refused share is not redistributed
        }
        free_prbs.at(u.serving_cell) -= s;
        admit(state, u.id, s, embed.embedding->request_id);
    }
    return finish_result(state, started);
}

namespace {

std::vector<const UserPlan*> ran_order(const NetworkState& state,
                                       const std::vector<UserPlan>& plans) {
    std::vector<const UserPlan*> order;
    for (const auto& p : plans) order.push_back(&p);
    std::sort(order.begin(), order.end(), [&state](const UserPlan* a, const UserPlan* b) {
        const int na = a->needed == ran::kNoPrbCount ? std::numeric_limits<int>::max() : a->needed;
        const int nb = b->needed == ran::kNoPrbCount ? std::numeric_limits<int>::max() : b->needed;
        if (na != nb) return na < nb;
        return state.users[a->index].id < state.users[b->index].id;
    });
    return order;
}

// RAN-greedy PRB booking by ascending need, CN ignored entirely. Returns the
// users that received PRBs, in admission order.
std::vector<const UserPlan*> ran_greedy_prbs(NetworkState& state,
                                             const std::vector<const UserPlan*>& order) {
    std::vector<const UserPlan*> admitted;
    for (const UserPlan* p : order) {
        const auto& u = state.users[p->index];
        if (!under_admission_cap(state)) {
            reject(state, u.id, RejectReason::policy);
            continue;
        }
        if (p->needed == ran::kNoPrbCount ||
            p->needed > slicing::available_prbs_for(state, state.cell(u.serving_cell), u.slice_id)) {
            reject(state, u.id, RejectReason::ran_capacity);
            continue;
        }
        auto& d = state.decision(u.id);
        d.admitted = true;
        d.assigned_prbs = p->needed;
        d.reject_reason.reset();
        state.user(u.id).assigned_prbs = p->needed;
        admitted.push_back(p);
    }
    return admitted;
}

}  // namespace

AllocationResult run_ran_only(NetworkState& state) {
    const auto started = std::chrono::steady_clock::now();
    require_fresh(state, "RanOnly");
    auto plans = build_plans(state);
    const auto admitted = ran_greedy_prbs(state, ran_order(state, plans));

    // Embedding as an afterthought, in admission order.
    for (const UserPlan* p : admitted) {
        const auto& u = state.users[p->index];
        const auto embed = cn::embed_sfc(state.topology, state.sfc_templates.at(u.id));
        if (embed.embedding) {
            state.decision(u.id).embedding_request = embed.embedding->request_id;
        } else {
            state.user(u.id).assigned_prbs = 0;
            reject(state, u.id, reason_from(embed.failure));
        }
    }
    return finish_result(state, started);
}

namespace {

std::vector<const UserPlan*> cn_order(const NetworkState& state,
                                      const std::vector<UserPlan>& plans) {
    std::vector<const UserPlan*> order;
    for (const auto& p : plans) order.push_back(&p);
    std::sort(order.begin(), order.end(), [&state](const UserPlan* a, const UserPlan* b) {
        if (a->chain_compute != b->chain_compute) return a->chain_compute < b->chain_compute;
        return state.users[a->index].id < state.users[b->index].id;
    });
    return order;
}

}  // namespace

AllocationResult run_cn_only(NetworkState& state) {
    const auto started = std::chrono::steady_clock::now();
    require_fresh(state, "CnOnly");
    auto plans = build_plans(state);
    const auto order = cn_order(state, plans);

    // Phase 1: embed greedily by ascending chain compute.
    std::vector<const UserPlan*> embedded;
    for (const UserPlan* p : order) {
        const auto& u = state.users[p->index];
        const auto embed = cn::embed_sfc(state.topology, state.sfc_templates.at(u.id));
        if (embed.embedding) {
            embedded.push_back(p);
        } else {
            reject(state, u.id, reason_from(embed.failure));
        }
    }

    // Phase 2: PRBs as an afterthought, in embedding order.
    for (const UserPlan* p : embedded) {
        const auto& u = state.users[p->index];
        const std::string request_id = state.sfc_templates.at(u.id).request_id;
        if (!under_admission_cap(state)) {
            cn::release_embedding(state.topology, request_id);
            reject(state, u.id, RejectReason::policy);
            continue;
        }
        if (p->needed == ran::kNoPrbCount ||
            p->needed > slicing::available_prbs_for(state, state.cell(u.serving_cell), u.slice_id)) {
            cn::release_embedding(state.topology, request_id);
            reject(state, u.id, RejectReason::ran_capacity);
            continue;
        }
        admit(state, u.id, p->needed, request_id);
    }
    return finish_result(state, started);
}

AllocationResult run_domain_isolated_pair(NetworkState& state) {
    const auto started = std::chrono::steady_clock::now();
    require_fresh(state, "DomainIsolatedPair");

    // Each domain plans on its own copy, unaware of the other.
    auto plans = build_plans(state);
    NetworkState ran_view = state;
    ran_greedy_prbs(ran_view, ran_order(ran_view, plans));
    NetworkState cn_view = state;
    const auto order = cn_order(state, plans);
    std::vector<const UserPlan*> cn_chosen;
    std::map<std::string, RejectReason> cn_reason;
    for (const UserPlan* p : order) {
        const auto& u = state.users[p->index];
        const auto embed = cn::embed_sfc(cn_view.topology, cn_view.sfc_templates.at(u.id));
        if (embed.embedding) {
            cn_chosen.push_back(p);
        } else {
            cn_reason[u.id] = reason_from(embed.failure);
        }
    }

    // Replay the CN plan on the live state so placements (and the wasted
    // capacity of users the RAN never admitted) match the isolated run.
    for (const UserPlan* p : cn_chosen) {
        const auto& u = state.users[p->index];
        cn::embed_sfc(state.topology, state.sfc_templates.at(u.id));
    }

    // A user is served only when both domains picked it.
    for (const auto& u : state.users) {
        const auto& ran_decision = ran_view.decision(u.id);
        const bool ran_has_prbs = ran_view.user(u.id).assigned_prbs > 0;
        const bool cn_has_chain =
            state.topology.embeddings.count(state.sfc_templates.at(u.id).request_id) > 0;
        if (ran_has_prbs && cn_has_chain && under_admission_cap(state)) {
            admit(state, u.id, ran_view.user(u.id).assigned_prbs,
                  state.sfc_templates.at(u.id).request_id);
        } else if (!ran_has_prbs) {
            reject(state, u.id,
                   ran_decision.reject_reason.value_or(RejectReason::ran_capacity));
        } else if (!cn_has_chain) {
            reject(state, u.id,
                   cn_reason.count(u.id) ? cn_reason.at(u.id) : RejectReason::cn_compute);
        } else {
            reject(state, u.id, RejectReason::policy);
        }
    }

    // Drop chains of users that were never admitted end to end; recorded
    // latencies of the admitted set keep the values from the contended run.
    for (const auto& u : state.users) {
        const std::string request_id = state.sfc_templates.at(u.id).request_id;
        if (!state.decision(u.id).admitted && state.topology.embeddings.count(request_id)) {
            cn::release_embedding(state.topology, request_id);
        }
    }
    return finish_result(state, started);
}

namespace {

double footprint_score(const NetworkState& state, const UserPlan& plan) {
    if (plan.needed == ran::kNoPrbCount) return std::numeric_limits<double>::infinity();
    const auto& u = state.users[plan.index];
    const double ran_part = static_cast<double>(plan.needed) /
                            static_cast<double>(state.cell(u.serving_cell).total_prbs);
    const double cn_part = plan.chain_compute / state.topology.total_server_compute();
    return ran_part + cn_part;
}

}  // namespace

AllocationResult run_e2e_heuristic(NetworkState& state) {
    const auto started = std::chrono::steady_clock::now();
    require_fresh(state, "E2EHeuristic");
    auto plans = build_plans(state);

    std::vector<const UserPlan*> order;
    for (const auto& p : plans) order.push_back(&p);
    std::sort(order.begin(), order.end(), [&state](const UserPlan* a, const UserPlan* b) {
        const double fa = footprint_score(state, *a);
        const double fb = footprint_score(state, *b);
        if (fa != fb) return fa < fb;
        return state.users[a->index].id < state.users[b->index].id;
    });

    auto greedy_fill = [&state](const std::vector<const UserPlan*>& candidates) {
        for (const UserPlan* p : candidates) {
            const auto& u = state.users[p->index];
            if (state.decision(u.id).admitted) continue;
            if (const auto failure = try_admit_joint(state, *p)) {
                reject(state, u.id, *failure);
            }
        }
    };
    greedy_fill(order);

    // One local-search pass: swap each rejected user against the
    // largest-footprint admitted one and greedily refill; keep improvements.
    auto admitted_total = [&state]() { return state.admitted_count(); };
    for (const UserPlan* candidate : order) {
        const auto& cu = state.users[candidate->index];
        if (state.decision(cu.id).admitted) continue;

        const UserPlan* largest = nullptr;
        double largest_score = -1;
        for (const UserPlan* p : order) {
            if (!state.decision(state.users[p->index].id).admitted) continue;
            const double score = footprint_score(state, *p);
            if (score > largest_score) {
                largest_score = score;
                largest = p;
            }
        }
        if (!largest) continue;

        const NetworkState snapshot = state;
        const int before = admitted_total();

        const auto& vu = state.users[largest->index];
        cn::release_embedding(state.topology, *state.decision(vu.id).embedding_request);
        state.user(vu.id).assigned_prbs = 0;
        reject(state, vu.id, RejectReason::policy);

        if (const auto failure = try_admit_joint(state, *candidate)) {
            reject(state, cu.id, *failure);
        }
        greedy_fill(order);

        if (admitted_total() <= before) {
            state = snapshot;  // swap did not help
        }
    }
    return finish_result(state, started);
}

AllocationResult run_exact_oracle(NetworkState& state, int cap) {
    const auto started = std::chrono::steady_clock::now();
    require_fresh(state, "ExactOracle");
    const int n = static_cast<int>(state.users.size());
    if (n > cap) {
        throw ConfigError("ExactOracle refuses " + std::to_string(n) + " users (cap " +
                          std::to_string(cap) + ")");
    }
    auto plans = build_plans(state);

    // Admitting exactly this subset: PRBs by need, chains first-fit in user-id
    // order. Succeeds only if every member ends up SLA-satisfied.
    auto evaluate_subset = [&](const std::vector<int>& subset, NetworkState& scratch) {
        for (int idx : subset) {
            const auto& plan = plans[static_cast<std::size_t>(idx)];
            const auto& u = scratch.users[plan.index];
            if (plan.needed == ran::kNoPrbCount) return false;
            if (plan.needed >
                slicing::available_prbs_for(scratch, scratch.cell(u.serving_cell), u.slice_id)) {
                return false;
            }
            scratch.user(u.id).assigned_prbs = plan.needed;
        }
        for (int idx : subset) {
            const auto& plan = plans[static_cast<std::size_t>(idx)];
            const auto& u = scratch.users[plan.index];
            const auto embed = cn::embed_sfc(scratch.topology, scratch.sfc_templates.at(u.id));
            if (!embed.embedding) return false;
        }
        return true;
    };

    // Cheap relaxations for pruning: per-cell PRB sums are exact, the CN
    // total-compute sum is necessary but not sufficient.
    const double total_compute = state.topology.total_server_compute();
    std::map<std::string, int> cell_capacity;
    for (const auto& cell : state.cells) cell_capacity[cell.id] = cell.total_prbs;

    std::vector<int> chosen;
    std::vector<int> best;
    bool found = false;

    std::function<void(int, int, std::map<std::string, int>&, double)> dfs =
        [&](int start, int want, std::map<std::string, int>& prb_left, double compute_left) {
            if (found) return;
            if (want == 0) {
                NetworkState scratch = state;
                if (evaluate_subset(chosen, scratch)) {
                    best = chosen;
                    found = true;
                }
                return;
            }
            if (n - start < want) return;  // not enough users left
            for (int idx = start; idx <= n - want && !found; ++idx) {
                const auto& plan = plans[static_cast<std::size_t>(idx)];
                if (plan.needed == ran::kNoPrbCount) continue;
                const auto& u = state.users[plan.index];
                auto& left = prb_left.at(u.serving_cell);
                if (plan.needed > left || plan.chain_compute > compute_left) continue;
                left -= plan.needed;
                chosen.push_back(idx);
                dfs(idx + 1, want - 1, prb_left, compute_left - plan.chain_compute);
                chosen.pop_back();
                left += plan.needed;
            }
        };

    for (int m = n; m >= 1 && !found; --m) {
        auto prb_left = cell_capacity;
        dfs(0, m, prb_left, total_compute);
    }

    for (int idx : best) {
        const auto& plan = plans[static_cast<std::size_t>(idx)];
        const auto& u = state.users[plan.index];
        state.user(u.id).assigned_prbs = plan.needed;
    }
    for (int idx : best) {
        const auto& plan = plans[static_cast<std::size_t>(idx)];
        const auto& u = state.users[plan.index];
        const auto embed = cn::embed_sfc(state.topology, state.sfc_templates.at(u.id));
        admit(state, u.id, plan.needed, embed.embedding->request_id);
    }
    for (const auto& u : state.users) {
        if (!state.decision(u.id).admitted) reject(state, u.id, RejectReason::policy);
    }
    return finish_result(state, started);
}

AllocationResult run_controller(ControllerKind kind, NetworkState& state, int oracle_cap) {
    switch (kind) {
        case ControllerKind::round_robin: return run_round_robin(state);
        case ControllerKind::ran_only: return run_ran_only(state);
        case ControllerKind::cn_only: return run_cn_only(state);
        case ControllerKind::domain_isolated_pair: return run_domain_isolated_pair(state);
        case ControllerKind::e2e_heuristic: return run_e2e_heuristic(state);
        case ControllerKind::exact_oracle: return run_exact_oracle(state, oracle_cap);
        case ControllerKind::agent_driven:
            throw ConfigError("AgentDriven needs run_agent_driven with a reasoner");
    }
    throw ConfigError("unknown controller kind");
}

void register_standard_tools(agent::ToolRegistry& registry, const monitor::MonitoringDb& db,
                             policy::Orchestrator& orchestrator) {
    registry.register_tool(
        agent::ToolDescriptor{
            "db.query", agent::ToolKind::perception,
            "GET <metric> [WHERE k=v [AND k=v]] [RANGE t0 t1] [AGG last|mean|max|min|sum]",
            "Query the monitoring DB"},
        [&db](const std::string& payload) {
            agent::ToolResult result;
            const auto parsed = monitor::parse_query(payload);
            const auto query_result = db.run(parsed);
            result.observation = monitor::render_result(query_result);

            if (query_result.is_aggregate) {
                std::string agg = monitor::print_query(parsed);
                const auto pos = agg.rfind(" AGG ");
                std::string key = parsed.metric;
                if (!parsed.label_filter.empty()) {
                    key += '{' + monitor::encode_labels(parsed.label_filter) + '}';
                }
                key += ' ' + agg.substr(pos + 5);
                result.kpis[key] = query_result.aggregate
                                       ? format_double(*query_result.aggregate)
                                       : "(empty)";
            } else {
                // Latest value per label set.
                std::map<std::string, std::string> latest;
                for (const auto& row : query_result.rows) {
                    latest[parsed.metric + '{' + monitor::encode_labels(row.labels) + '}'] =
                        format_double(row.value);
                }
                if (latest.empty()) {
                    result.kpis[parsed.metric] = "(no rows)";
                } else {
                    result.kpis = std::move(latest);
                }
            }
            return result;
        });

    registry.register_tool(
        agent::ToolDescriptor{"policy.apply", agent::ToolKind::control,
                              "ApplyPolicy[<param>[.<label>=<value>] <op> <number> <unit>]",
                              "Validate and dispatch a policy directive"},
        [&orchestrator](const std::string& payload) {
            agent::ToolResult result;
            const auto outcome = orchestrator.submit(payload);
            result.observation = outcome.message;
            if (outcome.accepted) result.accepted_directive_id = outcome.directive_id;
            return result;
        });
}

AgentRunOutcome run_agent_driven(NetworkState& state, monitor::MonitoringDb& db,
                                 policy::Orchestrator& orchestrator,
                                 agent::ExperienceStore& experiences,
                                 const agent::ReasonerFn& reasoner,
                                 const AgentRunOptions& options) {
    AgentRunOutcome outcome;

    run_e2e_heuristic(state);
    outcome.before = slicing::sla_report(state);
    db.ingest_snapshot(state);

    agent::ToolRegistry registry;
    register_standard_tools(registry, db, orchestrator);
    orchestrator.begin_episode();

    agent::ShortTermMemory short_term(options.short_term_window);
    agent::EpisodeOptions episode;
    episode.episode_id = options.episode_id;
    episode.objective = options.objective;
    episode.budget = options.episode_budget;
    episode.context_char_limit = options.context_char_limit;
    episode.retrieve_top_k = options.retrieve_top_k;
    episode.state_digest = [&state]() {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(slicing::state_digest(state)));
        return std::string(buf);
    };
    outcome.trace = agent::run_episode(reasoner, registry, short_term, experiences, episode);
    outcome.episode_aborted = outcome.trace.outcome == agent::EpisodeOutcome::aborted;

    // Directives take effect at the next control tick; an aborted episode
    // keeps the pre-episode allocation.
    if (!outcome.episode_aborted && !outcome.trace.final_directives.empty()) {
        state.tick += 1;
        slicing::reset_allocations(state);
        run_e2e_heuristic(state);
        db.ingest_snapshot(state);
        outcome.reallocated = true;
    }
    outcome.after = slicing::sla_report(state);

    AllocationResult result;
    result.decisions = state.decisions;
    result.satisfied_total = outcome.after.satisfied_total;
    outcome.result = std::move(result);

    // Long-term memory: remember what this scenario looked like and how the
    // episode went.
    agent::ExperienceEntry entry;
    std::map<std::string, int> by_slice;
    for (const auto& u : state.users) by_slice[u.slice_id] += 1;
    entry.fingerprint.push_back("load=" + std::to_string(state.users.size()));
    for (const auto& [slice_id, count] : by_slice) {
        entry.fingerprint.push_back(slice_id + "=" + std::to_string(count));
    }
    std::map<std::string, int> reasons;
    for (const auto& v : outcome.after.violations) reasons[v.reason] += 1;
    std::string top_reason;
    int top_count = -1;
    for (const auto& [reason, count] : reasons) {
        if (count > top_count) {
            top_count = count;
            top_reason = reason;
        }
    }
    if (!top_reason.empty()) entry.fingerprint.push_back("bottleneck=" + top_reason);
    std::ostringstream summary;
    summary << outcome.trace.final_directives.size() << " directive(s)";
    for (const auto& id : outcome.trace.final_directives) summary << ' ' << id;
    entry.decision_summary = summary.str();
    char digest[32];
    std::snprintf(digest, sizeof(digest), "satisfied=%d/%zu", outcome.after.satisfied_total,
                  state.users.size());
    entry.outcome_digest = digest;
    experiences.add(std::move(entry));

    return outcome;
}

}  // namespace rancn::control
