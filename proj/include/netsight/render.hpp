#pragma once

#include "netsight/community.hpp"
#include "netsight/graph.hpp"
#include "netsight/layout.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace netsight {

struct Color {
    std::uint8_t r = 0, g = 0, b = 0;
    std::string hex() const;
    static Color from_hex(std::string_view hex);
    friend bool operator==(const Color&, const Color&) = default;
};

enum class LabelMode { full, partial };

std::string_view to_string(LabelMode mode);
LabelMode label_mode_from_string(std::string_view name);

struct LabelPolicy {
    LabelMode mode = LabelMode::full;
    double top_fraction = 0.01;  // partial only
    std::size_t min_labels = 20;  // partial only
};

/// 20 distinct fills; the alternative palette is used for color-variant runs.
std::vector<Color> default_palette();
std::vector<Color> alternative_palette();

struct RenderSpec {
    int width = 2048;
    int height = 2048;
    double node_radius = 6.0;
    double font_px = 14.0;
    double edge_width = 1.0;
    std::vector<Color> palette = default_palette();
    LabelPolicy labels;
    Color label_color{0, 0, 0};
    Color background{255, 255, 255};
    Color edge_color{170, 170, 170};
    Color uniform_fill{31, 119, 180};

    void validate() const;
    static RenderSpec full_label();
    static RenderSpec partial_label(double top_fraction = 0.01, std::size_t min_labels = 20);
};

struct ImageArtifact {
    std::string svg;
    std::vector<std::uint8_t> png;
    std::string content_hash;
    std::vector<NodeId> labeled_nodes;  // ascending
    std::vector<std::string> warnings;
    int width = 0;
    int height = 0;
};

class RenderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Number of labels a partial policy produces for n nodes.
std::size_t partial_label_count(const LabelPolicy& policy, std::size_t n);

/// Node ids to label under the policy: all nodes, or the top nodes by degree
/// with ties to the lower id.
std::vector<NodeId> select_labeled_nodes(const Graph& g, const LabelPolicy& policy);

/// SVG node-link drawing: edges first, then one circle per node, then labels
/// showing original node ids, placed above-right of their node. Positions
/// are scaled uniformly into the canvas with a 5% margin.
ImageArtifact render(const Graph& g, const LayoutResult& layout, const CommunityAssignment* asg,
                     const RenderSpec& spec);

/// Rasterizes an SVG produced by render() into an 8-bit RGBA PNG of
/// (width*scale, height*scale) pixels.
ImageArtifact rasterize(const ImageArtifact& img, double scale = 1.0);

}  // namespace netsight
