#pragma once

#include "netsight/community.hpp"
#include "netsight/graph.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace netsight {

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

enum class LayoutKind { fruchterman_reingold, circle, grid };

std::string_view to_string(LayoutKind kind);
LayoutKind layout_from_string(std::string_view name);

struct LayoutResult {
    std::vector<Point> positions;
    LayoutKind kind = LayoutKind::fruchterman_reingold;
    std::uint64_t rng_seed = 0;
};

/// Force-directed placement: every pair repels with k^2/d, every edge pulls
/// with d^2/k, and per-step displacement is capped by a linearly cooling
/// temperature. Starts from uniform random positions in the unit square.
LayoutResult fr_layout(const Graph& g, std::uint64_t rng_seed, std::size_t iterations = 500);

/// Node i at angle 2*pi*i/n on the unit circle.
LayoutResult circle_layout(const Graph& g);

/// Row-major on an integer grid ceil(sqrt(n)) columns wide.
LayoutResult grid_layout(const Graph& g);

LayoutResult compute_layout(const Graph& g, LayoutKind kind, std::uint64_t rng_seed, std::size_t iterations = 500);

/// Mean member position per community.
std::vector<Point> centroids(const CommunityAssignment& asg, const LayoutResult& layout);

struct AdjustmentParams {
    double d = 0.7;
    std::size_t top_n = 5;
    void validate() const;
};

/// Pulls every node except the top_n highest-degree members of its community
/// toward the community centroid: p' = d*p + (1-d)*c. Centroids are taken
/// from the input layout before anything moves. Degree ties go to the lower id.
LayoutResult adjust_positions(const Graph& g, const LayoutResult& layout, const CommunityAssignment& asg,
                              const AdjustmentParams& params);

std::string to_json(const Graph& g, const LayoutResult& layout);

}  // namespace netsight
