#include "netsight/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

namespace netsight {

std::string_view to_string(LayoutKind kind) {
    switch (kind) {
        case LayoutKind::fruchterman_reingold: return "fruchterman_reingold";
        case LayoutKind::circle: return "circle";
        case LayoutKind::grid: return "grid";
    }
    return "unknown";
}

LayoutKind layout_from_string(std::string_view name) {
    if (name == "fruchterman_reingold" || name == "fr") return LayoutKind::fruchterman_reingold;
    if (name == "circle") return LayoutKind::circle;
    if (name == "grid") return LayoutKind::grid;
    throw DomainError("unknown layout '" + std::string(name) + "'");
}

LayoutResult fr_layout(const Graph& g, std::uint64_t rng_seed, std::size_t iterations) {
    const std::size_t n = g.node_count();
    LayoutResult out{std::vector<Point>(n), LayoutKind::fruchterman_reingold, rng_seed};
    if (n == 0) return out;

    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& p : out.positions) {
        p.x = unit(rng);
        p.y = unit(rng);
    }
    if (n == 1) return out;

    const double k = std::sqrt(1.0 / static_cast<double>(n));
    double temperature = 0.1;
    const double cooling = temperature / static_cast<double>(iterations + 1);
    constexpr double min_dist = 0.01;
    std::vector<Point> disp(n);

    for (std::size_t it = 0; it < iterations; ++it) {
        std::fill(disp.begin(), disp.end(), Point{});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dx = out.positions[i].x - out.positions[j].x;
                const double dy = out.positions[i].y - out.positions[j].y;
                const double dist = std::max(std::hypot(dx, dy), min_dist);
                const double f = k * k / (dist * dist);
                disp[i].x += dx * f;
                disp[i].y += dy * f;
                disp[j].x -= dx * f;
                disp[j].y -= dy * f;
            }
        }
        for (auto [u, v] : g.edges()) {
            const double dx = out.positions[u].x - out.positions[v].x;
            const double dy = out.positions[u].y - out.positions[v].y;
            const double dist = std::max(std::hypot(dx, dy), min_dist);
            const double f = dist / k;
            disp[u].x -= dx * f;
            disp[u].y -= dy * f;
            disp[v].x += dx * f;
            disp[v].y += dy * f;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double len = std::max(std::hypot(disp[i].x, disp[i].y), min_dist);
            const double step = std::min(len, temperature) / len;
            out.positions[i].x += disp[i].x * step;
            out.positions[i].y += disp[i].y * step;
        }
        temperature -= cooling;
    }
    return out;
}

LayoutResult circle_layout(const Graph& g) {
    const std::size_t n = g.node_count();
    LayoutResult out{std::vector<Point>(n), LayoutKind::circle, 0};
    for (std::size_t i = 0; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        out.positions[i] = {std::cos(angle), std::sin(angle)};
    }
    return out;
}

LayoutResult grid_layout(const Graph& g) {
    const std::size_t n = g.node_count();
    LayoutResult out{std::vector<Point>(n), LayoutKind::grid, 0};
    std::size_t width = 1;
    while (width * width < n) ++width;
    for (std::size_t i = 0; i < n; ++i)
        out.positions[i] = {static_cast<double>(i % width), static_cast<double>(i / width)};
    return out;
}

LayoutResult compute_layout(const Graph& g, LayoutKind kind, std::uint64_t rng_seed, std::size_t iterations) {
    switch (kind) {
        case LayoutKind::fruchterman_reingold: return fr_layout(g, rng_seed, iterations);
        case LayoutKind::circle: return circle_layout(g);
        case LayoutKind::grid: return grid_layout(g);
    }
    throw DomainError("unknown layout");
}

std::vector<Point> centroids(const CommunityAssignment& asg, const LayoutResult& layout) {
    if (layout.positions.size() != asg.membership.size()) throw DomainError("layout does not cover every node");
    std::vector<Point> sum(asg.community_count);
    std::vector<std::size_t> count(asg.community_count, 0);
    for (std::size_t v = 0; v < asg.membership.size(); ++v) {
        auto c = asg.membership[v];
        sum.at(c).x += layout.positions[v].x;
        sum[c].y += layout.positions[v].y;
        ++count[c];
    }
    for (std::size_t c = 0; c < sum.size(); ++c) {
        if (count[c] == 0) continue;
        sum[c].x /= static_cast<double>(count[c]);
        sum[c].y /= static_cast<double>(count[c]);
    }
    return sum;
}

void AdjustmentParams::validate() const {
    if (!(d > 0.0 && d < 1.0)) throw DomainError("adjustment d must lie in (0, 1)");
}

LayoutResult adjust_positions(const Graph& g, const LayoutResult& layout, const CommunityAssignment& asg,
                              const AdjustmentParams& params) {
    params.validate();
    asg.validate(g.node_count());
    const auto centers = centroids(asg, layout);

    std::vector<char> pinned(g.node_count(), 0);
    for (auto& group : asg.members()) {
        std::stable_sort(group.begin(), group.end(), [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
        for (std::size_t i = 0; i < std::min(params.top_n, group.size()); ++i) pinned[group[i]] = 1;
    }

    LayoutResult out = layout;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        if (pinned[v]) continue;
        const Point& c = centers[asg.membership[v]];
        out.positions[v].x = layout.positions[v].x * params.d + c.x * (1.0 - params.d);
        out.positions[v].y = layout.positions[v].y * params.d + c.y * (1.0 - params.d);
    }
    return out;
}

std::string to_json(const Graph& g, const LayoutResult& layout) {
    nlohmann::ordered_json j;
    j["kind"] = std::string(to_string(layout.kind));
    j["rng_seed"] = layout.rng_seed;
    auto& pos = j["positions"] = nlohmann::ordered_json::object();
    for (std::size_t v = 0; v < layout.positions.size(); ++v)
        pos[std::to_string(g.original_id(static_cast<NodeId>(v)))] = {layout.positions[v].x, layout.positions[v].y};
    return j.dump();
}

}  // namespace netsight
