#include "netsight/layout.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace netsight;

namespace {

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Graph empty_graph(std::size_t n) { return Graph::from_edges(n, std::span<const Edge>{}); }

}  // namespace

TEST_CASE("fr layout is deterministic per seed") {
    std::mt19937_64 rng(8);
    auto g = oracle::random_graph(15, 30, rng);
    auto a = fr_layout(g, 42);
    auto b = fr_layout(g, 42);
    CHECK(a.positions == b.positions);
    auto c = fr_layout(g, 43);
    CHECK(a.positions != c.positions);
}

TEST_CASE("fr layout on a single edge gives two distinct finite points") {
    auto g = Graph::from_edges(2, std::vector<Edge>{{0, 1}});
    auto l = fr_layout(g, 1);
    REQUIRE(l.positions.size() == 2);
    for (auto p : l.positions) CHECK((std::isfinite(p.x) && std::isfinite(p.y)));
    CHECK(dist(l.positions[0], l.positions[1]) > 0.0);
}

TEST_CASE("fr layout of a triangle is near equilateral") {
    auto g = Graph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto p = fr_layout(g, seed).positions;
        const double a = dist(p[0], p[1]), b = dist(p[1], p[2]), c = dist(p[0], p[2]);
        const double mean = (a + b + c) / 3.0;
        for (double s : {a, b, c}) CHECK(std::abs(s - mean) / mean < 0.05);
    }
}

TEST_CASE("circle layout closed form") {
    const auto p = circle_layout(empty_graph(4)).positions;
    const Point want[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int i = 0; i < 4; ++i) {
        CHECK(p[i].x == doctest::Approx(want[i].x).epsilon(1e-12));
        CHECK(p[i].y == doctest::Approx(want[i].y).epsilon(1e-12));
    }
    CHECK(circle_layout(empty_graph(1)).positions[0] == Point{1, 0});
    for (auto q : circle_layout(empty_graph(13)).positions) CHECK(std::hypot(q.x, q.y) == doctest::Approx(1.0));
}

TEST_CASE("grid layout closed form") {
    CHECK(grid_layout(empty_graph(4)).positions == std::vector<Point>{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    const auto five = grid_layout(empty_graph(5)).positions;
    CHECK(five[2] == Point{2, 0});
    CHECK(five[3] == Point{0, 1});
}

TEST_CASE("layout names round-trip") {
    for (auto k : {LayoutKind::fruchterman_reingold, LayoutKind::circle, LayoutKind::grid})
        CHECK(layout_from_string(to_string(k)) == k);
    CHECK_THROWS_AS((void)layout_from_string("spring"), DomainError);
}

TEST_CASE("centroids are member means") {
    LayoutResult l;
    l.positions = {{0, 0}, {2, 0}, {5, 7}};
    auto asg = CommunityAssignment::from_labels({0, 0, 1});
    const auto c = centroids(asg, l);
    CHECK(c[0] == Point{1, 0});
    CHECK(c[1] == Point{5, 7});
}

TEST_CASE("adjustment pulls non-pinned nodes toward the centroid") {
    // Path 0-1-2: node 1 has the highest degree and is pinned with top_n = 1.
    auto g = Graph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 2}});
    LayoutResult l;
    l.positions = {{2, 0}, {0, 0}, {-2, 0}};
    auto asg = CommunityAssignment::from_labels({0, 0, 0});
    auto out = adjust_positions(g, l, asg, {0.5, 1});
    CHECK(out.positions[0] == Point{1, 0});
    CHECK(out.positions[1] == Point{0, 0});
    CHECK(out.positions[2] == Point{-1, 0});
}

TEST_CASE("adjustment near d = 1 barely moves anything") {
    std::mt19937_64 rng(9);
    auto g = oracle::random_graph(10, 20, rng);
    auto l = fr_layout(g, 3);
    auto asg = detect_communities(g);
    auto out = adjust_positions(g, l, asg, {0.999, 0});
    for (std::size_t v = 0; v < l.positions.size(); ++v) CHECK(dist(out.positions[v], l.positions[v]) < 1e-2);
}

TEST_CASE("top_n per community are pinned on an 8-node graph") {
    // Two stars: hub 0 with leaves 1-3, hub 4 with leaves 5-7.
    auto g = Graph::from_edges(8, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {4, 5}, {4, 6}, {4, 7}, {3, 5}});
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-5, 5);
    LayoutResult l;
    for (int i = 0; i < 8; ++i) l.positions.push_back({u(rng), u(rng)});
    auto asg = CommunityAssignment::from_labels({0, 0, 0, 0, 1, 1, 1, 1});
    auto out = adjust_positions(g, l, asg, {0.7, 1});
    CHECK(out.positions[0] == l.positions[0]);
    CHECK(out.positions[4] == l.positions[4]);
    auto out2 = adjust_positions(g, l, asg, {0.7, 2});
    CHECK(out2.positions[3] == l.positions[3]);
    CHECK(out2.positions[5] == l.positions[5]);
    CHECK(out2.positions[1] != l.positions[1]);
    // Leaves 1 and 2 tie on degree; the lower id is pinned.
    auto out3 = adjust_positions(g, l, asg, {0.7, 3});
    CHECK(out3.positions[1] == l.positions[1]);
    CHECK(out3.positions[2] != l.positions[2]);
}

TEST_CASE("adjustment contracts distance to the centroid by exactly d") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-100.0, 100.0);
    std::uniform_real_distribution<double> dd(0.01, 0.99);
    // Two-node community: node 0 pinned (higher degree), node 1 free.
    auto g = Graph::from_edges(3, std::vector<Edge>{{0, 1}, {0, 2}});
    auto asg = CommunityAssignment::from_labels({0, 0, 1});
    for (int i = 0; i < 1000; ++i) {
        LayoutResult l;
        l.positions = {{coord(rng), coord(rng)}, {coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
        const double d = dd(rng);
        const Point c = centroids(asg, l)[0];
        auto out = adjust_positions(g, l, asg, {d, 1});
        CHECK(out.positions[0] == l.positions[0]);
        const double before = dist(l.positions[1], c);
        const double after = dist(out.positions[1], c);
        CHECK(std::abs(after - d * before) <= 1e-12 * d * before);
    }
}

TEST_CASE("adjustment parameters are validated") {
    auto g = Graph::from_edges(2, std::vector<Edge>{{0, 1}});
    LayoutResult l;
    l.positions = {{0, 0}, {1, 1}};
    auto asg = CommunityAssignment::from_labels({0, 0});
    CHECK_THROWS_AS((void)adjust_positions(g, l, asg, {0.0, 1}), DomainError);
    CHECK_THROWS_AS((void)adjust_positions(g, l, asg, {1.5, 1}), DomainError);
}
