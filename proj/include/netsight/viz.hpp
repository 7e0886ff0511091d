#pragma once

#include "netsight/community.hpp"
#include "netsight/layout.hpp"
#include "netsight/render.hpp"

#include <cstdint>

namespace netsight {

struct VizOptions {
    std::size_t target_communities = 0;  // 0 keeps the detected partition
    LayoutKind layout = LayoutKind::fruchterman_reingold;
    std::size_t fr_iterations = 500;
    bool adjust = true;
    AdjustmentParams adjustment;
    RenderSpec render;
    std::uint64_t rng_seed = 0;
};

struct VizResult {
    CommunityAssignment detected;
    CommunityAssignment communities;  // after merging
    LayoutResult layout;              // after adjustment
    ImageArtifact image;
};

/// detect -> merge -> layout -> adjust -> render.
VizResult visualize(const Graph& g, const VizOptions& options);

}  // namespace netsight
