#include <doctest.h>

#include <set>

#include "rancn/cn.hpp"
#include "rancn/errors.hpp"
#include "rancn/rng.hpp"
#include "support/oracles.hpp"

using namespace rancn;

namespace {

cn::FatTreeParams params_for(int k) {
    cn::FatTreeParams p;
    p.k = k;
    return p;
}

cn::SfcRequest request(const std::string& id, std::vector<double> demands, double flow_bps = 1e6,
                       double budget_ms = 100, double processing_ms = 0.5) {
    cn::SfcRequest req;
    req.request_id = id;
    req.owner_user = "u-" + id;
    for (double d : demands) req.chain.push_back({d, processing_ms});
    req.flow_bandwidth_bps = flow_bps;
    req.latency_budget_ms = budget_ms;
    return req;
}

}  // namespace

TEST_CASE("build_fat_tree: closed-form node counts for k=4") {
    const auto topo = cn::build_fat_tree(params_for(4));
    int servers = 0, edges = 0, aggs = 0, cores = 0;
    for (const auto& n : topo.nodes) {
        switch (n.tier) {
            case cn::NodeTier::server: ++servers; break;
            case cn::NodeTier::edge: ++edges; break;
            case cn::NodeTier::aggregation: ++aggs; break;
            case cn::NodeTier::core: ++cores; break;
        }
    }
    CHECK(servers == 16);
    CHECK(edges == 8);
    CHECK(aggs == 8);
    CHECK(cores == 4);
    CHECK(topo.links.size() == 48);  // 3k^3/4
    CHECK(topo.ingress_node == "pod00-edge00");
}

TEST_CASE("build_fat_tree: closed-form node counts for k=2") {
    const auto topo = cn::build_fat_tree(params_for(2));
    int servers = 0, edges = 0, aggs = 0, cores = 0;
    for (const auto& n : topo.nodes) {
        switch (n.tier) {
            case cn::NodeTier::server: ++servers; break;
            case cn::NodeTier::edge: ++edges; break;
            case cn::NodeTier::aggregation: ++aggs; break;
            case cn::NodeTier::core: ++cores; break;
        }
    }
    CHECK(servers == 2);
    CHECK(edges == 2);
    CHECK(aggs == 2);
    CHECK(cores == 1);
}

TEST_CASE("build_fat_tree: formulas hold for all even k in [2,8]") {
    for (int k = 2; k <= 8; k += 2) {
        const auto topo = cn::build_fat_tree(params_for(k));
        std::map<cn::NodeTier, int> counts;
        for (const auto& n : topo.nodes) counts[n.tier] += 1;
        CHECK(counts[cn::NodeTier::server] == k * k * k / 4);
        CHECK(counts[cn::NodeTier::edge] == k * k / 2);
        CHECK(counts[cn::NodeTier::aggregation] == k * k / 2);
        CHECK(counts[cn::NodeTier::core] == k * k / 4);
        CHECK(static_cast<int>(topo.links.size()) == 3 * k * k * k / 4);
    }
}

TEST_CASE("build_fat_tree: odd and non-positive arity rejected") {
    CHECK_THROWS_AS(cn::build_fat_tree(params_for(3)), ConfigError);
    CHECK_THROWS_AS(cn::build_fat_tree(params_for(0)), ConfigError);
    CHECK_THROWS_AS(cn::build_fat_tree(params_for(-2)), ConfigError);
}

TEST_CASE("build_fat_tree: all server pairs connected within 6 hops (k=4)") {
    const auto topo = cn::build_fat_tree(params_for(4));
    std::vector<std::string> servers;
    for (const auto& n : topo.nodes) {
        if (n.tier == cn::NodeTier::server) servers.push_back(n.id);
    }
    for (const auto& a : servers) {
        for (const auto& b : servers) {
            const int hops = oracles::bfs_hops(topo, a, b);
            CHECK(hops >= 0);
            CHECK(hops <= 6);
        }
    }
}

TEST_CASE("shortest_path: trivial and same-edge cases") {
    const auto topo = cn::build_fat_tree(params_for(4));
    CHECK(cn::shortest_path(topo, "pod00-srv000", "pod00-srv000").empty());
    // Two servers under the same edge switch: exactly 2 links.
    CHECK(cn::shortest_path(topo, "pod00-srv000", "pod00-srv001").size() == 2);
}

TEST_CASE("shortest_path: hop counts match the BFS oracle on random pairs") {
    const auto topo = cn::build_fat_tree(params_for(4));
    std::vector<std::string> ids;
    for (const auto& n : topo.nodes) ids.push_back(n.id);
    Rng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const auto& a = ids[static_cast<std::size_t>(rng.uniform_int(0, ids.size() - 1))];
        const auto& b = ids[static_cast<std::size_t>(rng.uniform_int(0, ids.size() - 1))];
        CHECK(static_cast<int>(cn::shortest_path(topo, a, b).size()) ==
              oracles::bfs_hops(topo, a, b));
    }
}

TEST_CASE("shortest_path: deterministic lexicographic tie-break") {
    const auto topo = cn::build_fat_tree(params_for(4));
    const auto p1 = cn::shortest_path(topo, "pod00-srv000", "pod01-srv000");
    const auto p2 = cn::shortest_path(topo, "pod00-srv000", "pod01-srv000");
    CHECK(p1 == p2);
    // The path through pod00-agg00 and core00 is the lexicographically
    // smallest among the four equal-hop choices.
    REQUIRE(p1.size() == 6);
    bool uses_agg0 = false, uses_core0 = false;
    for (const auto& link : p1) {
        if (link.find("pod00-agg00") != std::string::npos) uses_agg0 = true;
        if (link.find("core00") != std::string::npos) uses_core0 = true;
    }
    CHECK(uses_agg0);
    CHECK(uses_core0);
}

TEST_CASE("embed_sfc: unconstrained first-fit lands on the lowest server") {
    auto topo = cn::build_fat_tree(params_for(4));
    const auto result = cn::embed_sfc(topo, request("r1", {10, 10}));
    REQUIRE(result.embedding.has_value());
    REQUIRE(result.embedding->placements.size() == 2);
    CHECK(result.embedding->placements[0].second == "pod00-srv000");
    CHECK(result.embedding->placements[1].second == "pod00-srv000");  // co-located
    CHECK(result.embedding->path_segments[1].empty());
    // ingress -> srv000 is one link; latency = 1 link + 2 x 0.5 ms processing
    CHECK(result.embedding->path_segments[0].size() == 1);
    const double link_ms = 0.1 + 1500 * 8.0 / 1e9 * 1e3;
    CHECK(result.embedding->total_latency_ms == doctest::Approx(link_ms + 1.0));
}

TEST_CASE("embed_sfc: oversized VNF is infeasible(compute), nothing mutated") {
    auto topo = cn::build_fat_tree(params_for(4));
    const auto before = oracles::replay_usage(topo);
    const auto result = cn::embed_sfc(topo, request("big", {1e9}));
    CHECK(!result.embedding.has_value());
    CHECK(result.failure == cn::EmbedFailure::compute);
    CHECK(topo.embeddings.empty());
    CHECK(oracles::usage_matches(topo));
    for (const auto& n : topo.nodes) CHECK(n.compute_used == 0.0);
}

TEST_CASE("embed_sfc: duplicate request id rejected") {
    auto topo = cn::build_fat_tree(params_for(4));
    REQUIRE(cn::embed_sfc(topo, request("dup", {5})).embedding.has_value());
    CHECK_THROWS_AS(cn::embed_sfc(topo, request("dup", {5})), DuplicateError);
}

TEST_CASE("embed_sfc: bandwidth exhaustion is all-or-nothing") {
    auto params = params_for(2);
    params.edge_link_bps = 10e6;  // tiny server links
    auto topo = cn::build_fat_tree(params);
    REQUIRE(cn::embed_sfc(topo, request("a", {10}, 6e6)).embedding.has_value());
    // Second flow cannot fit on srv000's edge link; first-fit puts its VNF on
    // srv000 (compute is free) so the route is bandwidth-blocked.
    const auto snapshot = oracles::replay_usage(topo);
    const auto result = cn::embed_sfc(topo, request("b", {10}, 6e6));
    CHECK(!result.embedding.has_value());
    CHECK(oracles::replay_usage(topo).link_bandwidth == snapshot.link_bandwidth);
}

TEST_CASE("embed_sfc: latency budget violation names the constraint") {
    auto params = params_for(2);
    params.link_delay_ms = 10;
    auto topo = cn::build_fat_tree(params);
    const auto result = cn::embed_sfc(topo, request("slow", {5}, 1e6, /*budget=*/5));
    CHECK(!result.embedding.has_value());
    CHECK(result.failure == cn::EmbedFailure::latency);
    CHECK(topo.embeddings.empty());
}

TEST_CASE("embed_sfc: batch utilization equals the replay oracle") {
    auto topo = cn::build_fat_tree(params_for(4));
    Rng rng(31);
    int accepted = 0;
    for (int i = 0; i < 60; ++i) {
        std::vector<double> chain;
        const int len = static_cast<int>(rng.uniform_int(2, 6));
        for (int v = 0; v < len; ++v) chain.push_back(static_cast<double>(rng.uniform_int(5, 15)));
        const auto result =
            cn::embed_sfc(topo, request("r" + std::to_string(i), chain, rng.uniform(1e6, 60e6)));
        accepted += result.embedding ? 1 : 0;
    }
    CHECK(accepted > 10);
    CHECK(oracles::usage_matches(topo));
}

TEST_CASE("sfc_latency: zero chain on zero-hop path") {
    const auto topo = cn::build_fat_tree(params_for(2));
    cn::SfcEmbedding empty;
    CHECK(cn::sfc_latency(topo, empty) == 0.0);
}

TEST_CASE("sfc_latency: forced sum 2x1ms processing + 4x0.5ms links") {
    auto params = params_for(2);
    params.link_delay_ms = 0.5;
    params.core_link_bps = params.agg_link_bps = params.edge_link_bps = 1e18;  // negligible tx
    auto topo = cn::build_fat_tree(params);

    cn::SfcEmbedding emb;
    emb.request_id = "x";
    emb.flow_bandwidth_bps = 1e6;
    emb.placements = {{0, "pod00-srv000"}, {1, "pod01-srv000"}};
    emb.vnf_processing_ms = {1.0, 1.0};
    emb.vnf_compute = {1, 1};
    emb.path_segments = {
        cn::shortest_path(topo, topo.ingress_node, "pod00-srv000"),        // 1 link
        {cn::shortest_path(topo, "pod00-srv000", "pod00-edge00").front(),  // 3 more links
         cn::shortest_path(topo, "pod00-edge00", "pod00-agg00").front(),
         cn::shortest_path(topo, "pod00-agg00", "core00").front()},
    };
    CHECK(cn::sfc_latency(topo, emb) == doctest::Approx(4.0));
}

TEST_CASE("sfc_latency: equals hand re-summation on a random embedding") {
    auto topo = cn::build_fat_tree(params_for(4));
    const auto result = cn::embed_sfc(topo, request("r", {12, 9, 7}, 5e6));
    REQUIRE(result.embedding.has_value());
    double expected = 0;
    for (const auto& segment : result.embedding->path_segments) {
        for (const auto& link_id : segment) {
            const auto& link = topo.link(link_id);
            expected += link.propagation_delay_ms +
                        topo.packet_size_bytes * 8.0 / link.bandwidth_capacity_bps * 1e3;
        }
    }
    for (double p : result.embedding->vnf_processing_ms) expected += p;
    CHECK(cn::sfc_latency(topo, *result.embedding) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(result.embedding->total_latency_ms == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("sfc_latency: dangling link reference is an integrity error") {
    const auto topo = cn::build_fat_tree(params_for(2));
    cn::SfcEmbedding emb;
    emb.path_segments = {{"no-such~link"}};
    CHECK_THROWS_AS(cn::sfc_latency(topo, emb), NotFoundError);
}

TEST_CASE("release_embedding: exact inverse of embed") {
    auto topo = cn::build_fat_tree(params_for(4));
    const auto before_nodes = topo.nodes;
    const auto before_links = topo.links;
    REQUIRE(cn::embed_sfc(topo, request("r", {10, 12}, 3e6)).embedding.has_value());
    const auto summary = cn::release_embedding(topo, "r");
    CHECK(summary.compute_released == doctest::Approx(22.0));
    for (std::size_t i = 0; i < topo.nodes.size(); ++i) {
        CHECK(topo.nodes[i].compute_used == before_nodes[i].compute_used);
    }
    for (std::size_t i = 0; i < topo.links.size(); ++i) {
        CHECK(topo.links[i].bandwidth_used_bps == before_links[i].bandwidth_used_bps);
    }
}

TEST_CASE("release_embedding: releasing twice errors") {
    auto topo = cn::build_fat_tree(params_for(4));
    REQUIRE(cn::embed_sfc(topo, request("r", {10})).embedding.has_value());
    cn::release_embedding(topo, "r");
    CHECK_THROWS_AS(cn::release_embedding(topo, "r"), NotFoundError);
}

TEST_CASE("embed/release interleavings always match the replay oracle") {
    auto topo = cn::build_fat_tree(params_for(4));
    Rng rng(77);
    std::vector<std::string> live;
    int counter = 0;
    for (int op = 0; op < 400; ++op) {
        const bool do_embed = live.empty() || rng.uniform01() < 0.6;
        if (do_embed) {
            std::vector<double> chain;
            const int len = static_cast<int>(rng.uniform_int(2, 6));
            for (int v = 0; v < len; ++v) {
                chain.push_back(static_cast<double>(rng.uniform_int(5, 15)));
            }
            const std::string id = "r" + std::to_string(counter++);
            if (cn::embed_sfc(topo, request(id, chain, rng.uniform(1e6, 40e6))).embedding) {
                live.push_back(id);
            }
        } else {
            const auto pick = static_cast<std::size_t>(rng.uniform_int(0, live.size() - 1));
            cn::release_embedding(topo, live[pick]);
            live.erase(live.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        REQUIRE(oracles::usage_matches(topo));
    }
}

TEST_CASE("adjust_link_capacity: += 0 is a no-op, += 1 Gbps is exact") {
    auto topo = cn::build_fat_tree(params_for(4));
    const auto before = topo.links;
    CHECK(!cn::adjust_link_capacity(topo, cn::LinkTier::core, cn::CapacityOp::add, 0));
    for (std::size_t i = 0; i < topo.links.size(); ++i) {
        CHECK(topo.links[i].bandwidth_capacity_bps == before[i].bandwidth_capacity_bps);
    }

    CHECK(!cn::adjust_link_capacity(topo, cn::LinkTier::core, cn::CapacityOp::add, 1e9));
    for (std::size_t i = 0; i < topo.links.size(); ++i) {
        const double expected = before[i].bandwidth_capacity_bps +
                                (topo.links[i].tier == cn::LinkTier::core ? 1e9 : 0.0);
        CHECK(topo.links[i].bandwidth_capacity_bps == expected);
    }
}

TEST_CASE("adjust_link_capacity: decrease below usage rejected without mutation") {
    auto params = params_for(2);
    params.edge_link_bps = 10e6;
    auto topo = cn::build_fat_tree(params);
    REQUIRE(cn::embed_sfc(topo, request("r", {10}, 8e6)).embedding.has_value());
    const auto before = topo.links;
    const auto err = cn::adjust_link_capacity(topo, cn::LinkTier::edge, cn::CapacityOp::subtract,
                                              5e6);
    REQUIRE(err.has_value());
    for (std::size_t i = 0; i < topo.links.size(); ++i) {
        CHECK(topo.links[i].bandwidth_capacity_bps == before[i].bandwidth_capacity_bps);
    }
}

TEST_CASE("adjust_node_capacity: same contract as links") {
    auto topo = cn::build_fat_tree(params_for(2));
    REQUIRE(cn::embed_sfc(topo, request("r", {30})).embedding.has_value());
    CHECK(cn::adjust_node_capacity(topo, cn::CapacityOp::set, 20).has_value());  // below usage
    CHECK(!cn::adjust_node_capacity(topo, cn::CapacityOp::add, 10));
    for (const auto& n : topo.nodes) {
        if (n.tier == cn::NodeTier::server) CHECK(n.compute_capacity == doctest::Approx(60.0));
    }
}

TEST_CASE("to_adjacency_text: one line per node and link") {
    const auto topo = cn::build_fat_tree(params_for(2));
    const std::string text = cn::to_adjacency_text(topo);
    std::size_t lines = 0;
    for (char c : text) lines += c == '\n' ? 1 : 0;
    CHECK(lines == topo.nodes.size() + topo.links.size());
    CHECK(text.find("node core00 core") != std::string::npos);
    CHECK(text.find("node pod00-srv000 server 50") != std::string::npos);
}
