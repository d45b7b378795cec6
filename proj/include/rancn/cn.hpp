#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rancn::cn {

enum class NodeTier { core, aggregation, edge, server };
enum class LinkTier { core, aggregation, edge };  // agg-core, edge-agg, server-edge

std::string to_string(NodeTier tier);
std::string to_string(LinkTier tier);
std::optional<LinkTier> link_tier_from_string(const std::string& name);

struct VirtualNode {
    std::string id;
    NodeTier tier = NodeTier::server;
    double compute_capacity = 0;  // only server tier hosts VNFs
    double compute_used = 0;
};

struct VirtualLink {
    std::string id;
    std::string endpoint_a;
    std::string endpoint_b;
    LinkTier tier = LinkTier::edge;
    double bandwidth_capacity_bps = 0;
    double bandwidth_used_bps = 0;
    double propagation_delay_ms = 0;
};

struct VnfDemand {
    double compute_demand = 0;      // > 0
    double processing_delay_ms = 0;  // >= 0
};

struct SfcRequest {
    std::string request_id;
    std::string owner_user;
    std::vector<VnfDemand> chain;
    double flow_bandwidth_bps = 0;
    double latency_budget_ms = 0;
};

struct SfcEmbedding {
    std::string request_id;
    double flow_bandwidth_bps = 0;
    // vnf index -> hosting server id, in chain order
    std::vector<std::pair<int, std::string>> placements;
    // link-id lists for ingress->vnf1, vnf1->vnf2, ...; empty when co-located
    std::vector<std::vector<std::string>> path_segments;
    std::vector<double> vnf_processing_ms;  // per placed VNF, chain order
    std::vector<double> vnf_compute;        // per placed VNF, for exact release
    double total_latency_ms = 0;
};

struct FatTreeParams {
    int k = 4;
    double server_compute_units = 50;
    double core_link_bps = 10e9;
    double agg_link_bps = 5e9;
    double edge_link_bps = 1e9;
    double link_delay_ms = 0.1;
    double packet_size_bytes = 1500;  // drives the per-link transmission term
};

struct FatTreeTopology {
    int k = 0;
    double packet_size_bytes = 1500;
    std::vector<VirtualNode> nodes;
    std::vector<VirtualLink> links;
    std::string ingress_node;  // edge switch where RAN traffic enters
    std::map<std::string, SfcEmbedding> embeddings;  // live, keyed by request id

    // Derived lookups, rebuilt by finalize(); indices are stable under copy.
    std::unordered_map<std::string, int> node_index;
    std::unordered_map<std::string, int> link_index;
    std::vector<std::vector<std::pair<int, int>>> adjacency;  // (neighbor node, link), id-sorted
    std::vector<int> server_order;                            // server indices by ascending id

    void finalize();
    const VirtualNode& node(const std::string& id) const;
    VirtualNode& node(const std::string& id);
    const VirtualLink& link(const std::string& id) const;
    VirtualLink& link(const std::string& id);
    double total_server_compute() const;
};

// Canonical k-ary fat tree: k pods of k/2 edge + k/2 aggregation switches
// and (k/2)^2 servers, (k/2)^2 core switches, standard wiring. The
// lexicographically first edge switch is the ingress.
FatTreeTopology build_fat_tree(const FatTreeParams& params);

// Minimum-hop path a -> b as an ordered list of link ids; ties resolved to
// the smallest lexicographic node-id sequence. a == b gives an empty path.
std::vector<std::string> shortest_path(const FatTreeTopology& topo, const std::string& a,
                                       const std::string& b);

enum class EmbedFailure { none, compute, bandwidth, latency };
std::string to_string(EmbedFailure f);

struct EmbedResult {
    std::optional<SfcEmbedding> embedding;  // set on success
    EmbedFailure failure = EmbedFailure::none;
    std::string detail;
};

// Greedy first-fit: walk servers in ascending id, place each VNF on the
// first with remaining compute, route ingress->vnf1->...->vnfK over shortest
// paths reserving flow bandwidth per traversal. All-or-nothing: an
// infeasible request names the binding constraint and mutates nothing.
EmbedResult embed_sfc(FatTreeTopology& topo, const SfcRequest& request);

// Propagation + transmission per traversed link, plus per-VNF processing.
double sfc_latency(const FatTreeTopology& topo, const SfcEmbedding& embedding);

struct ReleaseSummary {
    double compute_released = 0;
    double bandwidth_released = 0;  // summed over link traversals
};

ReleaseSummary release_embedding(FatTreeTopology& topo, const std::string& request_id);

enum class CapacityOp { add, subtract, set };

// Adjusts bandwidth_capacity on every link of the tier. Returns an error
// message (and mutates nothing) if any link would end below current usage.
std::optional<std::string> adjust_link_capacity(FatTreeTopology& topo, LinkTier tier,
                                                CapacityOp op, double value_bps);

// Same contract for server compute capacity.
std::optional<std::string> adjust_node_capacity(FatTreeTopology& topo, CapacityOp op,
                                                double value_units);

// Plain-text adjacency document for debugging. One node per line
// ("node <id> <tier> <capacity>"), then one link per line
// ("link <a> <b> <capacity_bps> <delay_ms>").
std::string to_adjacency_text(const FatTreeTopology& topo);

}  // namespace rancn::cn
