#include "netsight/community.hpp"
#include "netsight/graph.hpp"

#include "../support/oracles.hpp"
#include "../support/test_paths.hpp"

#include <doctest.h>
#include <json.hpp>

#include <map>

using namespace netsight;

namespace {

std::vector<std::vector<NodeId>> canonical(const CommunityAssignment& asg) {
    auto m = asg.members();
    for (auto& c : m) std::sort(c.begin(), c.end());
    std::sort(m.begin(), m.end());
    return m;
}

// Community that the smallest community should fold into, by direct edge count.
std::uint32_t expected_merge_target(const Graph& g, const CommunityAssignment& asg, std::uint32_t* smallest_out) {
    const auto sizes = asg.sizes();
    std::uint32_t smallest = 0;
    for (std::uint32_t c = 1; c < sizes.size(); ++c)
        if (sizes[c] < sizes[smallest]) smallest = c;
    std::vector<std::size_t> links(sizes.size(), 0);
    for (auto [u, v] : g.edges()) {
        const auto a = asg.membership[u], b = asg.membership[v];
        if (a == smallest && b != smallest) ++links[b];
        if (b == smallest && a != smallest) ++links[a];
    }
    std::optional<std::uint32_t> best;
    for (std::uint32_t c = 0; c < sizes.size(); ++c) {
        if (c == smallest || links[c] == 0) continue;
        if (!best || links[c] > links[*best] || (links[c] == links[*best] && sizes[c] > sizes[*best])) best = c;
    }
    if (!best) {
        for (std::uint32_t c = 0; c < sizes.size(); ++c) {
            if (c == smallest) continue;
            if (!best || sizes[c] < sizes[*best]) best = c;
        }
    }
    *smallest_out = smallest;
    return *best;
}

}  // namespace

TEST_CASE("two bridged triangles split into the triangles") {
    auto g = Graph::from_edges(6, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
    auto asg = detect_communities(g);
    CHECK(asg.community_count == 2);
    CHECK(canonical(asg) == std::vector<std::vector<NodeId>>{{0, 1, 2}, {3, 4, 5}});

    double best = -1.0;
    oracle::for_each_partition(6, [&](const std::vector<std::uint32_t>& label) {
        best = std::max(best, oracle::modularity(g, label));
    });
    CHECK(modularity(g, asg) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("complete graph stays whole") {
    std::vector<Edge> e;
    for (NodeId u = 0; u < 5; ++u)
        for (NodeId v = u + 1; v < 5; ++v) e.push_back({u, v});
    auto asg = detect_communities(Graph::from_edges(5, e));
    CHECK(asg.community_count == 1);
}

TEST_CASE("detection returns a valid partition whose modularity matches the oracle") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 30; ++i) {
        auto g = oracle::random_graph(12, 30, rng, 0.25);
        auto asg = detect_communities(g);
        CHECK_NOTHROW(asg.validate(g.node_count()));
        CHECK(modularity(g, asg) == doctest::Approx(oracle::modularity(g, asg.membership)).epsilon(1e-12));
        CHECK(modularity(g, asg) >= -1e-12);
    }
    auto karate = load_edge_list_file(test_paths::network("karate"));
    auto k = detect_communities(karate);
    CHECK(k.community_count == 3);
    CHECK(modularity(karate, k) == doctest::Approx(0.3807).epsilon(1e-3));
}

TEST_CASE("merge example: singleton joins the community it shares most edges with") {
    auto g = Graph::from_edges(6, std::vector<Edge>{{0, 1}, {0, 3}, {0, 4}, {1, 2}, {3, 4}, {4, 5}});
    auto asg = CommunityAssignment::from_labels({0, 1, 1, 2, 2, 2});
    auto merged = merge_communities(g, asg, 2);
    CHECK(merged.community_count == 2);
    CHECK(canonical(merged) == std::vector<std::vector<NodeId>>{{0, 3, 4, 5}, {1, 2}});
}

TEST_CASE("merge to the current count is a no-op") {
    auto g = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {2, 3}});
    auto asg = CommunityAssignment::from_labels({0, 0, 1, 1});
    auto same = merge_communities(g, asg, 2);
    CHECK(same.membership == asg.membership);
    CHECK_THROWS_AS((void)merge_communities(g, asg, 3), DomainError);
    CHECK_THROWS_AS((void)merge_communities(g, asg, 0), DomainError);
}

TEST_CASE("merge tie rules") {
    SUBCASE("edge-count ties go to the larger community") {
        // {0} links once to {1,2} and once to {3,4,5}.
        auto g = Graph::from_edges(6, std::vector<Edge>{{0, 1}, {0, 3}, {1, 2}, {3, 4}, {4, 5}});
        auto merged = merge_communities(g, CommunityAssignment::from_labels({0, 1, 1, 2, 2, 2}), 2);
        CHECK(canonical(merged) == std::vector<std::vector<NodeId>>{{0, 3, 4, 5}, {1, 2}});
    }
    SUBCASE("smallest-size ties go to the lower index") {
        // {0} and {1} are both singletons; {0} is folded first, into {2,3}.
        auto g = Graph::from_edges(4, std::vector<Edge>{{0, 2}, {1, 3}, {2, 3}});
        auto merged = merge_communities(g, CommunityAssignment::from_labels({0, 1, 2, 2}), 2);
        CHECK(canonical(merged) == std::vector<std::vector<NodeId>>{{0, 2, 3}, {1}});
    }
    SUBCASE("isolated smallest community joins the smallest other community") {
        auto g = Graph::from_edges(6, std::vector<Edge>{{1, 2}, {3, 4}, {4, 5}, {3, 5}});
        auto merged = merge_communities(g, CommunityAssignment::from_labels({0, 1, 1, 2, 2, 2}), 2);
        CHECK(canonical(merged) == std::vector<std::vector<NodeId>>{{0, 1, 2}, {3, 4, 5}});
    }
}

TEST_CASE("merging reaches exactly the target on random graphs") {
    std::mt19937_64 rng(6);
    int checked = 0;
    for (int i = 0; checked < 50 && i < 500; ++i) {
        auto g = oracle::random_graph(40, 70, rng, 0.08);
        auto asg = detect_communities(g);
        if (asg.community_count < 3) continue;
        const std::size_t target = 1 + rng() % (asg.community_count - 1);
        auto merged = merge_communities(g, asg, target);
        CHECK(merged.community_count == target);
        CHECK_NOTHROW(merged.validate(g.node_count()));
        // Merging only unions communities.
        std::map<std::uint32_t, std::uint32_t> image;
        for (NodeId v = 0; v < g.node_count(); ++v) {
            auto [it, fresh] = image.emplace(asg.membership[v], merged.membership[v]);
            CHECK(it->second == merged.membership[v]);
        }
        ++checked;
    }
    CHECK(checked == 50);
}

TEST_CASE("single merge step matches the link-count oracle on a 10-node instance") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = oracle::random_graph(10, 20, rng, 0.3);
        std::vector<std::uint32_t> labels(10);
        for (auto& l : labels) l = static_cast<std::uint32_t>(rng() % 3);
        labels[0] = 0;
        labels[1] = 1;
        labels[2] = 2;
        auto asg = CommunityAssignment::from_labels(labels);
        REQUIRE(asg.community_count == 3);

        std::uint32_t smallest = 0;
        const auto target = expected_merge_target(g, asg, &smallest);
        auto merged = merge_communities(g, asg, 2);
        REQUIRE(merged.community_count == 2);
        for (NodeId u = 0; u < 10; ++u)
            for (NodeId v = 0; v < 10; ++v) {
                const bool together = merged.membership[u] == merged.membership[v];
                auto fold = [&](std::uint32_t c) { return c == smallest ? target : c; };
                CHECK(together == (fold(asg.membership[u]) == fold(asg.membership[v])));
            }
    }
}

TEST_CASE("assignment validation and json") {
    CommunityAssignment bad{{0, 2}, 3};
    CHECK_THROWS_AS(bad.validate(2), DomainError);
    CommunityAssignment short_asg{{0}, 1};
    CHECK_THROWS_AS(short_asg.validate(2), DomainError);

    auto g = parse_edge_list("4 5\n");
    auto j = nlohmann::json::parse(to_json(g, CommunityAssignment::from_labels({0, 0})));
    CHECK_FALSE(j.empty());
}
