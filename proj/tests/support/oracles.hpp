#pragma once

// Independent oracles used by the test suites. Everything here recomputes
// results from first principles, staying off the implementation paths it
// checks.

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rancn/cn.hpp"
#include "rancn/monitoring.hpp"
#include "rancn/slicing.hpp"

namespace oracles {

// Log-distance path loss recomputed in extended precision.
inline long double path_loss_ld(long double pl_d0, long double d0, long double n,
                                long double distance) {
    return pl_d0 + 10.0L * n * std::log10(distance / d0);
}

// Link budget recomputed entirely in the dB domain.
inline long double snr_db_oracle(long double tx_dbm, long double pl_db, long double noise_density,
                                 long double noise_figure, long double bandwidth_hz) {
    const long double noise_dbm = noise_density + 10.0L * std::log10(bandwidth_hz) + noise_figure;
    return (tx_dbm - pl_db) - noise_dbm;
}

// Breadth-first hop count over the raw link list (ignores the topology's
// adjacency cache).
inline int bfs_hops(const rancn::cn::FatTreeTopology& topo, const std::string& a,
                    const std::string& b) {
    if (a == b) return 0;
    std::map<std::string, std::vector<std::string>> neighbors;
    for (const auto& l : topo.links) {
        neighbors[l.endpoint_a].push_back(l.endpoint_b);
        neighbors[l.endpoint_b].push_back(l.endpoint_a);
    }
    std::map<std::string, int> dist{{a, 0}};
    std::deque<std::string> queue{a};
    while (!queue.empty()) {
        const std::string cur = queue.front();
        queue.pop_front();
        for (const auto& nbr : neighbors[cur]) {
            if (dist.count(nbr)) continue;
            dist[nbr] = dist[cur] + 1;
            if (nbr == b) return dist[nbr];
            queue.push_back(nbr);
        }
    }
    return -1;
}

// Re-applies every live embedding's recorded reservations onto zeroed
// usage counters and returns them keyed by element id.
struct ReplayUsage {
    std::map<std::string, double> node_compute;
    std::map<std::string, double> link_bandwidth;
};

inline ReplayUsage replay_usage(const rancn::cn::FatTreeTopology& topo) {
    ReplayUsage usage;
    for (const auto& n : topo.nodes) usage.node_compute[n.id] = 0;
    for (const auto& l : topo.links) usage.link_bandwidth[l.id] = 0;
    for (const auto& [req_id, emb] : topo.embeddings) {
        for (std::size_t v = 0; v < emb.placements.size(); ++v) {
            usage.node_compute[emb.placements[v].second] += emb.vnf_compute[v];
        }
        for (const auto& segment : emb.path_segments) {
            for (const auto& link_id : segment) {
                usage.link_bandwidth[link_id] += emb.flow_bandwidth_bps;
            }
        }
    }
    return usage;
}

// Tolerance is relative to the element's capacity: the incremental counters
// and the oracle's fresh re-sum accumulate rounding in different orders.
inline bool usage_matches(const rancn::cn::FatTreeTopology& topo, double rel_tol = 1e-9) {
    const auto usage = replay_usage(topo);
    for (const auto& n : topo.nodes) {
        if (std::abs(usage.node_compute.at(n.id) - n.compute_used) >
            rel_tol * std::max(1.0, n.compute_capacity)) {
            return false;
        }
    }
    for (const auto& l : topo.links) {
        if (std::abs(usage.link_bandwidth.at(l.id) - l.bandwidth_used_bps) >
            rel_tol * std::max(1.0, l.bandwidth_capacity_bps)) {
            return false;
        }
    }
    return true;
}

// Naive filter-and-fold over the raw record list.
inline rancn::monitor::QueryResult full_scan(const std::vector<rancn::monitor::MetricRecord>& records,
                                             const rancn::monitor::Query& q) {
    rancn::monitor::QueryResult result;
    for (const auto& rec : records) {
        if (rec.metric != q.metric) continue;
        if (q.range_begin && rec.timestamp < *q.range_begin) continue;
        if (q.range_end && rec.timestamp > *q.range_end) continue;
        bool ok = true;
        for (const auto& [k, v] : q.label_filter) {
            auto it = rec.labels.find(k);
            if (it == rec.labels.end() || it->second != v) {
                ok = false;
                break;
            }
        }
        if (ok) result.rows.push_back(rec);
    }
    std::stable_sort(result.rows.begin(), result.rows.end(),
                     [](const rancn::monitor::MetricRecord& x,
                        const rancn::monitor::MetricRecord& y) {
                         if (x.timestamp != y.timestamp) return x.timestamp < y.timestamp;
                         return rancn::monitor::encode_labels(x.labels) <
                                rancn::monitor::encode_labels(y.labels);
                     });
    if (q.agg == rancn::monitor::Aggregate::none) return result;
    result.is_aggregate = true;
    if (result.rows.empty()) {
        result.rows.clear();
        return result;
    }
    double v = 0;
    using rancn::monitor::Aggregate;
    switch (q.agg) {
        case Aggregate::last: v = result.rows.back().value; break;
        case Aggregate::sum:
            for (const auto& r : result.rows) v += r.value;
            break;
        case Aggregate::mean: {
            for (const auto& r : result.rows) v += r.value;
            v /= static_cast<double>(result.rows.size());
            break;
        }
        case Aggregate::max: {
            v = result.rows.front().value;
            for (const auto& r : result.rows) v = std::max(v, r.value);
            break;
        }
        case Aggregate::min: {
            v = result.rows.front().value;
            for (const auto& r : result.rows) v = std::min(v, r.value);
            break;
        }
        case Aggregate::none: break;
    }
    result.aggregate = v;
    result.rows.clear();
    return result;
}

// From-scratch SLA recheck: recomputes rate from position/PRBs and latency
// by re-walking the embedding, without evaluate_user_sla.
inline bool sla_recheck(const rancn::slicing::NetworkState& state, const std::string& user_id) {
    const auto& u = state.user(user_id);
    const auto& d = state.decision(user_id);
    if (!d.admitted) return false;
    const auto& spec = state.slices.at(u.slice_id);
    const auto& cell = state.cell(u.serving_cell);

    const double snr = rancn::slicing::user_snr(state, u);
    const double rate = u.assigned_prbs * cell.prb_bandwidth_hz * std::log2(1.0 + snr);
    if (rate < spec.rate_floor_bps) return false;

    if (!d.embedding_request) return false;
    auto it = state.topology.embeddings.find(*d.embedding_request);
    if (it == state.topology.embeddings.end()) return false;

    double latency = 0;
    for (const auto& segment : it->second.path_segments) {
        for (const auto& link_id : segment) {
            const auto& link = state.topology.link(link_id);
            latency += link.propagation_delay_ms +
                       state.topology.packet_size_bytes * 8.0 / link.bandwidth_capacity_bps * 1e3;
        }
    }
    for (double p : it->second.vnf_processing_ms) latency += p;
    return latency <= spec.latency_budget_ms;
}

// Unpruned exhaustive admission search sharing only the public model ops:
// returns the best satisfied count over every subset, evaluated by booking
// PRBs and first-fit embedding in user-id order.
inline int naive_best_subset(const rancn::slicing::NetworkState& fresh) {
    const int n = static_cast<int>(fresh.users.size());
    int best = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        rancn::slicing::NetworkState scratch = fresh;
        bool feasible = true;
        for (int i = 0; i < n && feasible; ++i) {
            if (!(mask & (1u << i))) continue;
            auto& u = scratch.users[static_cast<std::size_t>(i)];
            const auto& spec = scratch.slices.at(u.slice_id);
            const auto& cell = scratch.cell(u.serving_cell);
            const double snr = rancn::slicing::user_snr(scratch, u);
            if (snr <= 0) {
                feasible = false;
                break;
            }
            const int needed = rancn::ran::prbs_needed(spec.rate_floor_bps, snr,
                                                       cell.prb_bandwidth_hz);
            if (needed == rancn::ran::kNoPrbCount ||
                needed > rancn::slicing::available_prbs_for(scratch, cell, u.slice_id)) {
                feasible = false;
                break;
            }
            u.assigned_prbs = needed;
        }
        for (int i = 0; i < n && feasible; ++i) {
            if (!(mask & (1u << i))) continue;
            const auto& u = scratch.users[static_cast<std::size_t>(i)];
            const auto embed =
                rancn::cn::embed_sfc(scratch.topology, scratch.sfc_templates.at(u.id));
            if (!embed.embedding) feasible = false;
        }
        if (feasible) best = std::max(best, __builtin_popcount(mask));
    }
    return best;
}

}  // namespace oracles
