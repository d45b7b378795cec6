#include "rancn/cn.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <sstream>

#include "rancn/errors.hpp"
#include "rancn/strutil.hpp"

namespace rancn::cn {

std::string to_string(NodeTier tier) {
    switch (tier) {
        case NodeTier::core: return "core";
        case NodeTier::aggregation: return "aggregation";
        case NodeTier::edge: return "edge";
        case NodeTier::server: return "server";
    }
    return "?";
}

std::string to_string(LinkTier tier) {
    switch (tier) {
        case LinkTier::core: return "core";
        case LinkTier::aggregation: return "aggregation";
        case LinkTier::edge: return "edge";
    }
    return "?";
}

std::optional<LinkTier> link_tier_from_string(const std::string& name) {
    if (name == "core") return LinkTier::core;
    if (name == "aggregation") return LinkTier::aggregation;
    if (name == "edge") return LinkTier::edge;
    return std::nullopt;
}

std::string to_string(EmbedFailure f) {
    switch (f) {
        case EmbedFailure::none: return "none";
        case EmbedFailure::compute: return "compute";
        case EmbedFailure::bandwidth: return "bandwidth";
        case EmbedFailure::latency: return "latency";
    }
    return "?";
}

void FatTreeTopology::finalize() {
    node_index.clear();
    link_index.clear();
    for (std::size_t i = 0; i < nodes.size(); ++i) node_index[nodes[i].id] = static_cast<int>(i);
    for (std::size_t i = 0; i < links.size(); ++i) link_index[links[i].id] = static_cast<int>(i);

    adjacency.assign(nodes.size(), {});
    for (std::size_t i = 0; i < links.size(); ++i) {
        const auto a = node_index.find(links[i].endpoint_a);
        const auto b = node_index.find(links[i].endpoint_b);
        if (a == node_index.end() || b == node_index.end()) {
            throw IntegrityError("link " + links[i].id + " references unknown node");
        }
        adjacency[a->second].emplace_back(b->second, static_cast<int>(i));
        adjacency[b->second].emplace_back(a->second, static_cast<int>(i));
    }
    for (auto& nbrs : adjacency) {
        std::sort(nbrs.begin(), nbrs.end(), [this](const auto& lhs, const auto& rhs) {
            return nodes[lhs.first].id < nodes[rhs.first].id;
        });
    }

    server_order.clear();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].tier == NodeTier::server) server_order.push_back(static_cast<int>(i));
    }
    std::sort(server_order.begin(), server_order.end(),
              [this](int a, int b) { return nodes[a].id < nodes[b].id; });
}

const VirtualNode& FatTreeTopology::node(const std::string& id) const {
    auto it = node_index.find(id);
    if (it == node_index.end()) throw NotFoundError("unknown node " + id);
    return nodes[static_cast<std::size_t>(it->second)];
}

VirtualNode& FatTreeTopology::node(const std::string& id) {
    return const_cast<VirtualNode&>(static_cast<const FatTreeTopology&>(*this).node(id));
}

const VirtualLink& FatTreeTopology::link(const std::string& id) const {
    auto it = link_index.find(id);
    if (it == link_index.end()) throw NotFoundError("unknown link " + id);
    return links[static_cast<std::size_t>(it->second)];
}

VirtualLink& FatTreeTopology::link(const std::string& id) {
    return const_cast<VirtualLink&>(static_cast<const FatTreeTopology&>(*this).link(id));
}

double FatTreeTopology::total_server_compute() const {
    double total = 0;
    for (const auto& n : nodes) {
        if (n.tier == NodeTier::server) total += n.compute_capacity;
    }
    return total;
}

namespace {

std::string link_id_for(const std::string& a, const std::string& b) {
    return a < b ? a + "~" + b : b + "~" + a;
}

}  // namespace

FatTreeTopology build_fat_tree(const FatTreeParams& params) {
    const int k = params.k;
    if (k < 2 || k % 2 != 0) {
        throw ConfigError("fat tree arity k must be even and >= 2, got " + std::to_string(k));
    }
    const int half = k / 2;

    FatTreeTopology topo;
    topo.k = k;
    topo.packet_size_bytes = params.packet_size_bytes;

    auto add_node = [&topo](std::string id, NodeTier tier, double compute) {
        topo.nodes.push_back(VirtualNode{std::move(id), tier, compute, 0});
    };
    auto add_link = [&topo](const std::string& a, const std::string& b, LinkTier tier,
                            double bps, double delay) {
        topo.links.push_back(VirtualLink{link_id_for(a, b), a, b, tier, bps, 0, delay});
    };

    char buf[32];
    for (int c = 0; c < half * half; ++c) {
        std::snprintf(buf, sizeof(buf), "core%02d", c);
        add_node(buf, NodeTier::core, 0);
    }
    for (int p = 0; p < k; ++p) {
        for (int a = 0; a < half; ++a) {
            std::snprintf(buf, sizeof(buf), "pod%02d-agg%02d", p, a);
            add_node(buf, NodeTier::aggregation, 0);
        }
        for (int e = 0; e < half; ++e) {
            std::snprintf(buf, sizeof(buf), "pod%02d-edge%02d", p, e);
            add_node(buf, NodeTier::edge, 0);
        }
        for (int s = 0; s < half * half; ++s) {
            std::snprintf(buf, sizeof(buf), "pod%02d-srv%03d", p, s);
            add_node(buf, NodeTier::server, params.server_compute_units);
        }
    }

    char a_id[32], b_id[32];
    for (int p = 0; p < k; ++p) {
        // edge <-> servers: edge e hosts servers [e*half, (e+1)*half)
        for (int e = 0; e < half; ++e) {
            std::snprintf(a_id, sizeof(a_id), "pod%02d-edge%02d", p, e);
            for (int s = 0; s < half; ++s) {
                std::snprintf(b_id, sizeof(b_id), "pod%02d-srv%03d", p, e * half + s);
                add_link(a_id, b_id, LinkTier::edge, params.edge_link_bps, params.link_delay_ms);
            }
        }
        // edge <-> aggregation: full bipartite within the pod
        for (int e = 0; e < half; ++e) {
            std::snprintf(a_id, sizeof(a_id), "pod%02d-edge%02d", p, e);
            for (int a = 0; a < half; ++a) {
                std::snprintf(b_id, sizeof(b_id), "pod%02d-agg%02d", p, a);
                add_link(a_id, b_id, LinkTier::aggregation, params.agg_link_bps,
                         params.link_delay_ms);
            }
        }
        // aggregation a <-> cores [a*half, (a+1)*half)
        for (int a = 0; a < half; ++a) {
            std::snprintf(a_id, sizeof(a_id), "pod%02d-agg%02d", p, a);
            for (int c = 0; c < half; ++c) {
                std::snprintf(b_id, sizeof(b_id), "core%02d", a * half + c);
                add_link(a_id, b_id, LinkTier::core, params.core_link_bps, params.link_delay_ms);
            }
        }
    }

    topo.ingress_node = "pod00-edge00";
    topo.finalize();
    return topo;
}

std::vector<std::string> shortest_path(const FatTreeTopology& topo, const std::string& a,
                                       const std::string& b) {
    const auto sa = topo.node_index.find(a);
    const auto sb = topo.node_index.find(b);
    if (sa == topo.node_index.end()) throw NotFoundError("unknown node " + a);
    if (sb == topo.node_index.end()) throw NotFoundError("unknown node " + b);
    if (sa->second == sb->second) return {};

    // BFS with id-sorted adjacency: first discovery is the minimum-hop path
    // whose node-id sequence is lexicographically smallest.
    std::vector<int> parent_node(topo.nodes.size(), -1);
    std::vector<int> parent_link(topo.nodes.size(), -1);
    std::vector<char> seen(topo.nodes.size(), 0);
    std::deque<int> queue;
    seen[static_cast<std::size_t>(sa->second)] = 1;
    queue.push_back(sa->second);
    while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop_front();
        if (cur == sb->second) break;
        for (const auto& [nbr, link] : topo.adjacency[static_cast<std::size_t>(cur)]) {
            if (seen[static_cast<std::size_t>(nbr)]) continue;
            seen[static_cast<std::size_t>(nbr)] = 1;
            parent_node[static_cast<std::size_t>(nbr)] = cur;
            parent_link[static_cast<std::size_t>(nbr)] = link;
            queue.push_back(nbr);
        }
    }
    if (!seen[static_cast<std::size_t>(sb->second)]) {
        throw IntegrityError("no path between " + a + " and " + b);
    }

    std::vector<std::string> path;
    for (int cur = sb->second; cur != sa->second;
         cur = parent_node[static_cast<std::size_t>(cur)]) {
        path.push_back(topo.links[static_cast<std::size_t>(parent_link[static_cast<std::size_t>(cur)])].id);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

namespace {

double link_latency_ms(const FatTreeTopology& topo, const VirtualLink& link) {
    const double transmission_ms =
        (topo.packet_size_bytes * 8.0) / link.bandwidth_capacity_bps * 1000.0;
    return link.propagation_delay_ms + transmission_ms;
}

}  // namespace

EmbedResult embed_sfc(FatTreeTopology& topo, const SfcRequest& request) {
    if (topo.embeddings.count(request.request_id)) {
        throw DuplicateError("request " + request.request_id + " already embedded");
    }
    if (request.chain.empty()) {
        throw DomainError("request " + request.request_id + " has an empty chain");
    }
    if (request.flow_bandwidth_bps <= 0) {
        throw DomainError("request " + request.request_id + " needs flow_bandwidth > 0");
    }

    // Tentative deltas; nothing is committed until every constraint holds.
    std::map<int, double> extra_compute;   // node index -> units
    std::map<int, double> extra_bandwidth; // link index -> bps

    SfcEmbedding emb;
    emb.request_id = request.request_id;
    emb.flow_bandwidth_bps = request.flow_bandwidth_bps;

    for (std::size_t v = 0; v < request.chain.size(); ++v) {
        const auto& vnf = request.chain[v];
        int placed = -1;
        for (int idx : topo.server_order) {
            const auto& node = topo.nodes[static_cast<std::size_t>(idx)];
            const double used = node.compute_used + extra_compute[idx];
            if (node.compute_capacity - used >= vnf.compute_demand) {
                placed = idx;
                break;
            }
        }
        if (placed < 0) {
            return {std::nullopt, EmbedFailure::compute,
                    "no server fits VNF " + std::to_string(v) + " (demand " +
                        format_double(vnf.compute_demand) + ")"};
        }
        extra_compute[placed] += vnf.compute_demand;
        emb.placements.emplace_back(static_cast<int>(v), topo.nodes[static_cast<std::size_t>(placed)].id);
        emb.vnf_processing_ms.push_back(vnf.processing_delay_ms);
        emb.vnf_compute.push_back(vnf.compute_demand);
    }

    std::string prev = topo.ingress_node;
    for (const auto& [vnf_idx, server_id] : emb.placements) {
        auto segment = shortest_path(topo, prev, server_id);
        for (const auto& link_id : segment) {
            const int li = topo.link_index.at(link_id);
            const auto& link = topo.links[static_cast<std::size_t>(li)];
            extra_bandwidth[li] += request.flow_bandwidth_bps;
            if (link.bandwidth_used_bps + extra_bandwidth[li] > link.bandwidth_capacity_bps) {
                return {std::nullopt, EmbedFailure::bandwidth,
                        "link " + link_id + " lacks " + format_double(request.flow_bandwidth_bps) +
                            " bps"};
            }
        }
        emb.path_segments.push_back(std::move(segment));
        prev = server_id;
    }

    double latency = 0;
    for (const auto& segment : emb.path_segments) {
        for (const auto& link_id : segment) latency += link_latency_ms(topo, topo.link(link_id));
    }
    for (double p : emb.vnf_processing_ms) latency += p;
    if (latency > request.latency_budget_ms) {
        return {std::nullopt, EmbedFailure::latency,
                "latency " + format_double(latency) + " ms exceeds budget " +
                    format_double(request.latency_budget_ms) + " ms"};
    }
    emb.total_latency_ms = latency;

    for (const auto& [idx, units] : extra_compute) {
        topo.nodes[static_cast<std::size_t>(idx)].compute_used += units;
    }
    for (const auto& [idx, bps] : extra_bandwidth) {
        topo.links[static_cast<std::size_t>(idx)].bandwidth_used_bps += bps;
    }
    topo.embeddings[request.request_id] = emb;
    return {std::move(emb), EmbedFailure::none, ""};
}

double sfc_latency(const FatTreeTopology& topo, const SfcEmbedding& embedding) {
    double latency = 0;
    for (const auto& segment : embedding.path_segments) {
        for (const auto& link_id : segment) {
            latency += link_latency_ms(topo, topo.link(link_id));  // throws on dangling ids
        }
    }
    for (const auto& [vnf_idx, server_id] : embedding.placements) {
        topo.node(server_id);  // integrity check
    }
    for (double p : embedding.vnf_processing_ms) latency += p;
    return latency;
}

ReleaseSummary release_embedding(FatTreeTopology& topo, const std::string& request_id) {
    auto it = topo.embeddings.find(request_id);
    if (it == topo.embeddings.end()) {
        throw NotFoundError("no embedding for request " + request_id);
    }
    const SfcEmbedding& emb = it->second;

    ReleaseSummary summary;
    for (std::size_t v = 0; v < emb.placements.size(); ++v) {
        auto& node = topo.node(emb.placements[v].second);
        node.compute_used -= emb.vnf_compute[v];
        if (std::abs(node.compute_used) < 1e-9) node.compute_used = 0;  // fp residue
        summary.compute_released += emb.vnf_compute[v];
    }
    for (const auto& segment : emb.path_segments) {
        for (const auto& link_id : segment) {
            auto& link = topo.link(link_id);
            link.bandwidth_used_bps -= emb.flow_bandwidth_bps;
            if (std::abs(link.bandwidth_used_bps) < 1e-3) link.bandwidth_used_bps = 0;
            summary.bandwidth_released += emb.flow_bandwidth_bps;
        }
    }
    topo.embeddings.erase(it);
    return summary;
}

std::optional<std::string> adjust_link_capacity(FatTreeTopology& topo, LinkTier tier,
                                                CapacityOp op, double value_bps) {
    std::vector<std::pair<VirtualLink*, double>> planned;
    for (auto& link : topo.links) {
        if (link.tier != tier) continue;
        double next = link.bandwidth_capacity_bps;
        switch (op) {
            case CapacityOp::add: next += value_bps; break;
            case CapacityOp::subtract: next -= value_bps; break;
            case CapacityOp::set: next = value_bps; break;
        }
        if (next < link.bandwidth_used_bps) {
            return "link " + link.id + " capacity " + format_double(next) +
                   " bps would fall below usage " + format_double(link.bandwidth_used_bps);
        }
        if (next < 0) return "link " + link.id + " capacity would be negative";
        planned.emplace_back(&link, next);
    }
    for (auto& [link, next] : planned) link->bandwidth_capacity_bps = next;
    return std::nullopt;
}

std::optional<std::string> adjust_node_capacity(FatTreeTopology& topo, CapacityOp op,
                                                double value_units) {
    std::vector<std::pair<VirtualNode*, double>> planned;
    for (auto& node : topo.nodes) {
        if (node.tier != NodeTier::server) continue;
        double next = node.compute_capacity;
        switch (op) {
            case CapacityOp::add: next += value_units; break;
            case CapacityOp::subtract: next -= value_units; break;
            case CapacityOp::set: next = value_units; break;
        }
        if (next < node.compute_used) {
            return "node " + node.id + " capacity " + format_double(next) +
                   " would fall below usage " + format_double(node.compute_used);
        }
        if (next < 0) return "node " + node.id + " capacity would be negative";
        planned.emplace_back(&node, next);
    }
    for (auto& [node, next] : planned) node->compute_capacity = next;
    return std::nullopt;
}

std::string to_adjacency_text(const FatTreeTopology& topo) {
    std::ostringstream out;
    for (const auto& n : topo.nodes) {
        out << "node " << n.id << ' ' << to_string(n.tier) << ' ' << format_double(n.compute_capacity)
            << '\n';
    }
    for (const auto& l : topo.links) {
        out << "link " << l.endpoint_a << ' ' << l.endpoint_b << ' '
            << format_double(l.bandwidth_capacity_bps) << ' ' << format_double(l.propagation_delay_ms)
            << '\n';
    }
    return out.str();
}

}  // namespace rancn::cn
