#include "rancn/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rancn/digest.hpp"
#include "rancn/errors.hpp"
#include "rancn/rng.hpp"
#include "rancn/strutil.hpp"

namespace rancn::slicing {

std::string to_string(SliceKind kind) {
    return kind == SliceKind::embb ? "eMBB" : "URLLC";
}

std::string to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::ran_capacity: return "ran_capacity";
        case RejectReason::cn_compute: return "cn_compute";
        case RejectReason::cn_bandwidth: return "cn_bandwidth";
        case RejectReason::latency: return "latency";
        case RejectReason::policy: return "policy";
    }
    return "?";
}

void SliceSpec::validate() const {
    if (rate_floor_bps <= 0) throw ConfigError("slice " + slice_id + ": rate_floor must be > 0");
    if (latency_budget_ms <= 0) {
        throw ConfigError("slice " + slice_id + ": latency_budget must be > 0");
    }
    if (flow_bandwidth_bps <= 0) {
        throw ConfigError("slice " + slice_id + ": flow_bandwidth must be > 0");
    }
    const int lo = kind == SliceKind::embb ? 4 : 2;
    const int hi = kind == SliceKind::embb ? 6 : 3;
    if (chain_min > chain_max || chain_min < lo || chain_max > hi) {
        throw ConfigError("slice " + slice_id + ": chain length range [" +
                          std::to_string(chain_min) + "," + std::to_string(chain_max) +
                          "] outside [" + std::to_string(lo) + "," + std::to_string(hi) + "] for " +
                          to_string(kind));
    }
}

std::string sla_report_jsonl(const SlaReport& r) {
    std::ostringstream out;
    out << "{\"tick\":" << r.tick << ",\"satisfied_total\":" << r.satisfied_total
        << ",\"satisfied_by_slice\":{";
    bool first = true;
    for (const auto& [slice, count] : r.satisfied_by_slice) {
        if (!first) out << ',';
        first = false;
        out << '"' << slice << "\":" << count;
    }
    out << "},\"ratio\":" << format_double(r.satisfaction_ratio) << ",\"violations\":[";
    first = true;
    for (const auto& v : r.violations) {
        if (!first) out << ',';
        first = false;
        out << "{\"user\":\"" << v.user_id << "\",\"reason\":\"" << v.reason << "\"}";
    }
    out << "]}";
    return out.str();
}

const ran::UserTerminal& NetworkState::user(const std::string& id) const {
    for (const auto& u : users) {
        if (u.id == id) return u;
    }
    throw NotFoundError("unknown user " + id);
}

ran::UserTerminal& NetworkState::user(const std::string& id) {
    return const_cast<ran::UserTerminal&>(static_cast<const NetworkState&>(*this).user(id));
}

const ran::Cell& NetworkState::cell(const std::string& id) const {
    for (const auto& c : cells) {
        if (c.id == id) return c;
    }
    throw NotFoundError("unknown cell " + id);
}

ran::Cell& NetworkState::cell(const std::string& id) {
    return const_cast<ran::Cell&>(static_cast<const NetworkState&>(*this).cell(id));
}

const AdmissionDecision& NetworkState::decision(const std::string& user_id) const {
    for (const auto& d : decisions) {
        if (d.user_id == user_id) return d;
    }
    throw NotFoundError("no decision slot for user " + user_id);
}

AdmissionDecision& NetworkState::decision(const std::string& user_id) {
    return const_cast<AdmissionDecision&>(
        static_cast<const NetworkState&>(*this).decision(user_id));
}

const SliceSpec& NetworkState::slice_of(const ran::UserTerminal& u) const {
    auto it = slices.find(u.slice_id);
    if (it == slices.end()) throw NotFoundError("unknown slice " + u.slice_id);
    return it->second;
}

int NetworkState::admitted_count() const {
    int n = 0;
    for (const auto& d : decisions) n += d.admitted ? 1 : 0;
    return n;
}

ScenarioConfig default_scenario_config() { return ScenarioConfig{}; }

NetworkState generate_scenario(int n_users, const std::map<std::string, int>& slice_mix,
                               std::uint64_t seed, const ScenarioConfig& config) {
    int mix_total = 0;
    for (const auto& [slice_id, count] : slice_mix) {
        if (!config.slices.count(slice_id)) {
            throw ConfigError("slice_mix references unknown slice " + slice_id);
        }
        if (count < 0) throw ConfigError("slice_mix count for " + slice_id + " must be >= 0");
        mix_total += count;
    }
    if (mix_total != n_users) {
        throw ConfigError("slice_mix totals " + std::to_string(mix_total) + " but n_users is " +
                          std::to_string(n_users));
    }
    for (const auto& [id, spec] : config.slices) spec.validate();

    NetworkState state;
    state.tick = 0;
    state.scenario_seed = seed;
    state.region = config.region;
    state.pathloss = config.pathloss;
    state.radio = config.radio;

    for (std::size_t c = 0; c < config.region.cell_positions.size(); ++c) {
        char id[16];
        std::snprintf(id, sizeof(id), "c%02zu", c);
        ran::Cell cell;
        cell.id = id;
        cell.position = config.region.cell_positions[c];
        cell.tx_power_dbm = config.cell_tx_power_dbm;
        cell.total_prbs = config.cell_total_prbs;
        cell.prb_bandwidth_hz = config.prb_bandwidth_hz;
        state.cells.push_back(std::move(cell));
    }

    state.slices = config.slices;

    int effective_users = n_users;
    if (config.poisson_user_count) {
        effective_users = ran::poisson_user_count(static_cast<double>(n_users), seed);
    }
    state.users = ran::place_users(effective_users, config.region, seed);

    // Slice assignment: round-robin over slice ids (map order = sorted) until
    // each count is exhausted, keeping id order unbiased across slices. In
    // Poisson mode the requested mix is rescaled by largest remainder.
    std::vector<std::string> ids;
    std::vector<int> remaining;
    for (const auto& [slice_id, count] : slice_mix) {
        ids.push_back(slice_id);
        remaining.push_back(count);
    }
    if (effective_users != n_users && n_users > 0) {
        std::vector<double> exact(ids.size());
        int floored_total = 0;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            exact[i] = static_cast<double>(slice_mix.at(ids[i])) * effective_users / n_users;
            remaining[i] = static_cast<int>(std::floor(exact[i]));
            floored_total += remaining[i];
        }
        std::vector<std::size_t> order(ids.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&exact, &remaining](std::size_t a, std::size_t b) {
            return exact[a] - remaining[a] > exact[b] - remaining[b];
        });
        for (std::size_t i = 0; floored_total < effective_users; ++i, ++floored_total) {
            remaining[order[i % order.size()]] += 1;
        }
    }
    std::size_t cursor = 0;
    for (auto& u : state.users) {
        for (std::size_t step = 0; step < ids.size(); ++step) {
            const std::size_t j = (cursor + step) % ids.size();
            if (remaining[j] > 0) {
                u.slice_id = ids[j];
                remaining[j] -= 1;
                cursor = j + 1;
                break;
            }
        }
    }

    Rng chain_rng(derive_seed(seed, "cn.chains"));
    for (const auto& u : state.users) {
        const SliceSpec& spec = state.slices.at(u.slice_id);
        cn::SfcRequest req;
        req.request_id = "sfc-" + u.id;
        req.owner_user = u.id;
        const int len = static_cast<int>(chain_rng.uniform_int(spec.chain_min, spec.chain_max));
        for (int v = 0; v < len; ++v) {
            cn::VnfDemand vnf;
            vnf.compute_demand = static_cast<double>(
                chain_rng.uniform_int(config.vnf_compute_min, config.vnf_compute_max));
            vnf.processing_delay_ms = config.vnf_processing_ms;
            req.chain.push_back(vnf);
        }
        req.flow_bandwidth_bps = spec.flow_bandwidth_bps;
        req.latency_budget_ms = spec.latency_budget_ms;
        state.sfc_templates[u.id] = std::move(req);
    }

    state.topology = cn::build_fat_tree(config.fat_tree);

    state.decisions.reserve(state.users.size());
    for (const auto& u : state.users) {
        AdmissionDecision d;
        d.user_id = u.id;
        d.admitted = false;
        d.reject_reason = RejectReason::policy;  // nothing admitted yet
        state.decisions.push_back(std::move(d));
    }
    return state;
}

double user_snr(const NetworkState& state, const ran::UserTerminal& u) {
    const auto& cell = state.cell(u.serving_cell);
    const std::uint64_t shadow_seed = derive_seed(state.scenario_seed, "ran.shadow." + u.id);
    return ran::snr_linear(u, cell, state.pathloss, state.radio, 1, shadow_seed);
}

int available_prbs_for(const NetworkState& state, const ran::Cell& cell,
                       const std::string& slice_id) {
    int assigned_total = 0;
    std::map<std::string, int> used_by_slice;
    for (const auto& u : state.users) {
        if (u.serving_cell != cell.id) continue;
        assigned_total += u.assigned_prbs;
        used_by_slice[u.slice_id] += u.assigned_prbs;
    }
    int held_for_others = 0;
    for (const auto& [other, fraction] : cell.prb_reservation) {
        if (other == slice_id) continue;
        const int guaranteed = static_cast<int>(std::floor(fraction * cell.total_prbs + 1e-9));
        held_for_others += std::max(0, guaranteed - used_by_slice[other]);
    }
    return std::max(0, cell.total_prbs - assigned_total - held_for_others);
}

SlaEvaluation evaluate_user_sla(const NetworkState& state, const std::string& user_id) {
    const auto& u = state.user(user_id);
    const auto& d = state.decision(user_id);
    if (!d.admitted) return {false, "policy"};

    const auto& spec = state.slice_of(u);
    const double rate =
        ran::achievable_rate_bps(u.assigned_prbs, state.cell(u.serving_cell).prb_bandwidth_hz,
                                 user_snr(state, u));
    if (rate < spec.rate_floor_bps) return {false, "rate_floor"};

    if (!d.embedding_request || !state.topology.embeddings.count(*d.embedding_request)) {
        return {false, "no_embedding"};
    }
    const auto& emb = state.topology.embeddings.at(*d.embedding_request);
    if (emb.total_latency_ms > spec.latency_budget_ms) return {false, "latency_budget"};
    return {true, ""};
}

SlaReport sla_report(const NetworkState& state) {
    SlaReport report;
    report.tick = state.tick;
    for (const auto& [slice_id, spec] : state.slices) report.satisfied_by_slice[slice_id] = 0;
    for (const auto& u : state.users) {
        const auto eval = evaluate_user_sla(state, u.id);
        if (eval.satisfied) {
            report.satisfied_total += 1;
            report.satisfied_by_slice[u.slice_id] += 1;
        } else {
            report.violations.push_back({u.id, eval.reason});
        }
    }
    report.satisfaction_ratio =
        state.users.empty() ? 1.0
                            : static_cast<double>(report.satisfied_total) /
                                  static_cast<double>(state.users.size());
    return report;
}

Feasibility feasibility_check(const NetworkState& state, const std::string& user_id) {
    const auto& u = state.user(user_id);
    const auto& spec = state.slice_of(u);
    const auto& cell = state.cell(u.serving_cell);

    Feasibility result;
    const double snr = user_snr(state, u);
    if (snr > 0) {
        const int needed = ran::prbs_needed(spec.rate_floor_bps, snr, cell.prb_bandwidth_hz);
        result.ran_feasible =
            needed != ran::kNoPrbCount && needed <= available_prbs_for(state, cell, u.slice_id);
    }

    cn::FatTreeTopology scratch = state.topology;  // dry run, state untouched
    result.cn_feasible =
        cn::embed_sfc(scratch, state.sfc_templates.at(u.id)).embedding.has_value();

    result.joint_feasible = result.ran_feasible && result.cn_feasible;
    return result;
}

void reset_allocations(NetworkState& state) {
    std::vector<std::string> live;
    live.reserve(state.topology.embeddings.size());
    for (const auto& [req_id, emb] : state.topology.embeddings) live.push_back(req_id);
    for (const auto& req_id : live) cn::release_embedding(state.topology, req_id);
    for (auto& u : state.users) u.assigned_prbs = 0;
    for (auto& d : state.decisions) {
        d.admitted = false;
        d.assigned_prbs = 0;
        d.embedding_request.reset();
        d.reject_reason = RejectReason::policy;
    }
}

std::uint64_t state_digest(const NetworkState& state) {
    Digest d;
    d.feed_int(state.tick);
    d.feed_int(static_cast<long long>(state.scenario_seed));
    for (const auto& c : state.cells) {
        d.feed(c.id);
        d.feed_double(c.position.x);
        d.feed_double(c.position.y);
        d.feed_double(c.tx_power_dbm);
        d.feed_int(c.total_prbs);
        d.feed_double(c.prb_bandwidth_hz);
        for (const auto& [slice, fraction] : c.prb_reservation) {
            d.feed(slice);
            d.feed_double(fraction);
        }
    }
    for (const auto& u : state.users) {
        d.feed(u.id);
        d.feed_double(u.position.x);
        d.feed_double(u.position.y);
        d.feed(u.slice_id);
        d.feed(u.serving_cell);
        d.feed_int(u.assigned_prbs);
    }
    for (const auto& n : state.topology.nodes) {
        d.feed(n.id);
        d.feed_double(n.compute_capacity);
        d.feed_double(n.compute_used);
    }
    for (const auto& l : state.topology.links) {
        d.feed(l.id);
        d.feed_double(l.bandwidth_capacity_bps);
        d.feed_double(l.bandwidth_used_bps);
        d.feed_double(l.propagation_delay_ms);
    }
    for (const auto& [req_id, emb] : state.topology.embeddings) {
        d.feed(req_id);
        d.feed_double(emb.total_latency_ms);
        for (const auto& [v, server] : emb.placements) {
            d.feed_int(v);
            d.feed(server);
        }
    }
    for (const auto& dec : state.decisions) {
        d.feed(dec.user_id);
        d.feed_int(dec.admitted ? 1 : 0);
        d.feed_int(dec.assigned_prbs);
        if (dec.embedding_request) d.feed(*dec.embedding_request);
        if (dec.reject_reason) d.feed(to_string(*dec.reject_reason));
    }
    if (state.policy.admission_cap) d.feed_int(*state.policy.admission_cap);
    return d.value();
}

}  // namespace rancn::slicing
