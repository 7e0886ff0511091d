#include "netsight/viz.hpp"

namespace netsight {

VizResult visualize(const Graph& g, const VizOptions& options) {
    if (g.empty()) throw DomainError("cannot draw an empty graph");
    options.render.validate();
    if (options.adjust) options.adjustment.validate();

    VizResult out;
    out.detected = detect_communities(g, options.rng_seed);
    out.communities = out.detected;
    if (options.target_communities > 0 && options.target_communities < out.detected.community_count)
        out.communities = merge_communities(g, out.detected, options.target_communities);
    out.layout = compute_layout(g, options.layout, options.rng_seed, options.fr_iterations);
    if (options.adjust) out.layout = adjust_positions(g, out.layout, out.communities, options.adjustment);
    out.image = render(g, out.layout, &out.communities, options.render);
    return out;
}

}  // namespace netsight
