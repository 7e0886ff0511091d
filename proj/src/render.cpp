#include "netsight/render.hpp"

#include "netsight/digest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace netsight {

std::string Color::hex() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

Color Color::from_hex(std::string_view hex) {
    if (hex.size() != 7 || hex[0] != '#') throw RenderError("bad color '" + std::string(hex) + "'");
    auto byte = [&](std::size_t i) {
        unsigned v = 0;
        for (std::size_t k = i; k < i + 2; ++k) {
            char c = hex[k];
            v <<= 4;
            if (c >= '0' && c <= '9') v |= static_cast<unsigned>(c - '0');
            else if (c >= 'a' && c <= 'f') v |= static_cast<unsigned>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') v |= static_cast<unsigned>(c - 'A' + 10);
            else throw RenderError("bad color '" + std::string(hex) + "'");
        }
        return static_cast<std::uint8_t>(v);
    };
    return {byte(1), byte(3), byte(5)};
}

std::string_view to_string(LabelMode mode) { return mode == LabelMode::full ? "full" : "partial"; }

LabelMode label_mode_from_string(std::string_view name) {
    if (name == "full") return LabelMode::full;
    if (name == "partial") return LabelMode::partial;
    throw DomainError("unknown label mode '" + std::string(name) + "'");
}

std::vector<Color> default_palette() {
    static const char* hexes[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
                                  "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896",
                                  "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5"};
    std::vector<Color> out;
    for (auto* h : hexes) out.push_back(Color::from_hex(h));
    return out;
}

std::vector<Color> alternative_palette() {
    static const char* hexes[] = {"#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4", "#46f0f0",
                                  "#f032e6", "#bcf60c", "#fabebe", "#008080", "#e6beff", "#9a6324", "#fffac8",
                                  "#800000", "#aaffc3", "#808000", "#ffd8b1", "#000075", "#808080"};
    std::vector<Color> out;
    for (auto* h : hexes) out.push_back(Color::from_hex(h));
    return out;
}

namespace {

double luminance(const Color& c) { return 0.2126 * c.r + 0.7152 * c.g + 0.0722 * c.b; }

}  // namespace

void RenderSpec::validate() const {
    if (width < 256 || height < 256) throw DomainError("canvas must be at least 256x256");
    if (palette.size() < 12) throw DomainError("palette needs at least 12 colors");
    if (labels.mode == LabelMode::partial && !(labels.top_fraction > 0.0 && labels.top_fraction <= 1.0))
        throw DomainError("top_fraction must lie in (0, 1]");
    if (std::abs(luminance(label_color) - luminance(background)) < 100.0)
        throw DomainError("label color does not contrast with background");
}

RenderSpec RenderSpec::full_label() { return RenderSpec{}; }

RenderSpec RenderSpec::partial_label(double top_fraction, std::size_t min_labels) {
    RenderSpec s;
    s.node_radius = 3.0;
    s.labels = {LabelMode::partial, top_fraction, min_labels};
    return s;
}

std::size_t partial_label_count(const LabelPolicy& policy, std::size_t n) {
    // The epsilon keeps 0.1 * 30 from rounding up to 4.
    auto wanted = static_cast<std::size_t>(std::ceil(policy.top_fraction * static_cast<double>(n) - 1e-9));
    return std::min(n, std::max(wanted, policy.min_labels));
}

std::vector<NodeId> select_labeled_nodes(const Graph& g, const LabelPolicy& policy) {
    std::vector<NodeId> order(g.node_count());
    for (NodeId v = 0; v < order.size(); ++v) order[v] = v;
    if (policy.mode == LabelMode::full) return order;
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
    order.resize(partial_label_count(policy, g.node_count()));
    std::sort(order.begin(), order.end());
    return order;
}

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

ImageArtifact render(const Graph& g, const LayoutResult& layout, const CommunityAssignment* asg,
                     const RenderSpec& spec) {
    spec.validate();
    if (layout.positions.size() != g.node_count()) throw DomainError("layout does not cover every node");
    if (asg) asg->validate(g.node_count());

    ImageArtifact out;
    out.width = spec.width;
    out.height = spec.height;

    // Uniform scale into the canvas minus a 5% margin on every side.
    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x, min_y = min_x, max_y = -min_x;
    for (auto& p : layout.positions) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double mx = 0.05 * spec.width, my = 0.05 * spec.height;
    const double span_x = max_x - min_x, span_y = max_y - min_y;
    double scale = 1.0;
    if (span_x > 0 || span_y > 0) {
        const double sx = span_x > 0 ? (spec.width - 2 * mx) / span_x : std::numeric_limits<double>::infinity();
        const double sy = span_y > 0 ? (spec.height - 2 * my) / span_y : std::numeric_limits<double>::infinity();
        scale = std::min(sx, sy);
    }
    const double cx = spec.width / 2.0, cy = spec.height / 2.0;
    const double mid_x = (min_x + max_x) / 2.0, mid_y = (min_y + max_y) / 2.0;
    auto to_canvas = [&](const Point& p) {
        // SVG y grows downward; flip so the layout's +y points up.
        return Point{cx + (p.x - mid_x) * scale, cy - (p.y - mid_y) * scale};
    };
    std::vector<Point> px(g.node_count());
    for (std::size_t v = 0; v < px.size(); ++v) px[v] = to_canvas(layout.positions[v]);

    if (asg && asg->community_count > spec.palette.size())
        out.warnings.push_back("palette has " + std::to_string(spec.palette.size()) + " colors for " +
                               std::to_string(asg->community_count) + " communities; colors cycle");

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height << "\" fill=\""
        << spec.background.hex() << "\"/>\n";

    svg << "<g class=\"edges\" stroke=\"" << spec.edge_color.hex() << "\" stroke-width=\"" << fmt2(spec.edge_width)
        << "\">\n";
    for (auto [u, v] : g.edges())
        svg << "<line x1=\"" << fmt2(px[u].x) << "\" y1=\"" << fmt2(px[u].y) << "\" x2=\"" << fmt2(px[v].x)
            << "\" y2=\"" << fmt2(px[v].y) << "\"/>\n";
    svg << "</g>\n";

    svg << "<g class=\"nodes\" stroke=\"#333333\" stroke-width=\"0.50\">\n";
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const Color fill = asg ? spec.palette[asg->membership[v] % spec.palette.size()] : spec.uniform_fill;
        svg << "<circle cx=\"" << fmt2(px[v].x) << "\" cy=\"" << fmt2(px[v].y) << "\" r=\""
            << fmt2(spec.node_radius) << "\" fill=\"" << fill.hex() << "\" data-node=\"" << g.original_id(v)
            << "\"/>\n";
    }
    svg << "</g>\n";

    out.labeled_nodes = select_labeled_nodes(g, spec.labels);
    svg << "<g class=\"labels\" font-family=\"DejaVu Sans, Arial, sans-serif\" font-size=\"" << fmt2(spec.font_px)
        << "\" fill=\"" << spec.label_color.hex() << "\">\n";
    const double offset = spec.node_radius + 1.0;
    for (NodeId v : out.labeled_nodes)
        svg << "<text x=\"" << fmt2(px[v].x + offset) << "\" y=\"" << fmt2(px[v].y - offset) << "\">"
            << g.original_id(v) << "</text>\n";
    svg << "</g>\n</svg>\n";

    out.svg = svg.str();
    out.content_hash = sha256_hex(out.svg);
    return out;
}

namespace {

using boost::property_tree::ptree;

struct Style {
    std::string fill = "#000000";
    std::string stroke = "none";
    double stroke_width = 1.0;
    double font_size = 14.0;
};

cv::Scalar to_bgra(const std::string& hex) {
    Color c = Color::from_hex(hex);
    return {static_cast<double>(c.b), static_cast<double>(c.g), static_cast<double>(c.r), 255.0};
}

double attr_num(const ptree& node, const char* name) {
    auto v = node.get_optional<std::string>(std::string("<xmlattr>.") + name);
    if (!v) throw RenderError(std::string("missing attribute ") + name);
    try {
        return std::stod(*v);
    } catch (const std::exception&) {
        throw RenderError(std::string("non-numeric attribute ") + name);
    }
}

Style inherit(const ptree& node, Style style) {
    if (auto v = node.get_optional<std::string>("<xmlattr>.fill")) style.fill = *v;
    if (auto v = node.get_optional<std::string>("<xmlattr>.stroke")) style.stroke = *v;
    if (auto v = node.get_optional<double>("<xmlattr>.stroke-width")) style.stroke_width = *v;
    if (auto v = node.get_optional<double>("<xmlattr>.font-size")) style.font_size = *v;
    return style;
}

cv::Point at(double x, double y, double scale) {
    return {static_cast<int>(std::lround(x * scale)), static_cast<int>(std::lround(y * scale))};
}

void draw(cv::Mat& canvas, const std::string& tag, const ptree& node, const Style& parent, double scale) {
    if (tag == "<xmlattr>" || tag == "<xmlcomment>") return;
    const Style style = inherit(node, parent);
    if (tag == "g") {
        for (auto& [child_tag, child] : node) draw(canvas, child_tag, child, style, scale);
    } else if (tag == "rect") {
        const double x = attr_num(node, "x"), y = attr_num(node, "y");
        const double w = attr_num(node, "width"), h = attr_num(node, "height");
        cv::rectangle(canvas, at(x, y, scale), at(x + w, y + h, scale), to_bgra(style.fill), cv::FILLED);
    } else if (tag == "line") {
        if (style.stroke == "none") return;
        const int thickness = std::max(1, static_cast<int>(std::lround(style.stroke_width * scale)));
        cv::line(canvas, at(attr_num(node, "x1"), attr_num(node, "y1"), scale),
                 at(attr_num(node, "x2"), attr_num(node, "y2"), scale), to_bgra(style.stroke), thickness,
                 cv::LINE_AA);
    } else if (tag == "circle") {
        const auto center = at(attr_num(node, "cx"), attr_num(node, "cy"), scale);
        const int radius = std::max(1, static_cast<int>(std::lround(attr_num(node, "r") * scale)));
        cv::circle(canvas, center, radius, to_bgra(style.fill), cv::FILLED, cv::LINE_AA);
        if (style.stroke != "none") cv::circle(canvas, center, radius, to_bgra(style.stroke), 1, cv::LINE_AA);
    } else if (tag == "text") {
        const std::string text = node.get_value<std::string>();
        // Hershey simplex glyphs are about 22 px tall at font scale 1.
        const double font_scale = style.font_size * scale / 22.0;
        const int thickness = std::max(1, static_cast<int>(std::lround(font_scale * 1.5)));
        cv::putText(canvas, text, at(attr_num(node, "x"), attr_num(node, "y"), scale), cv::FONT_HERSHEY_SIMPLEX,
                    font_scale, to_bgra(style.fill), thickness, cv::LINE_AA);
    } else {
        throw RenderError("unsupported svg element <" + tag + ">");
    }
}

}  // namespace

ImageArtifact rasterize(const ImageArtifact& img, double scale) {
    if (!(scale > 0.0)) throw DomainError("raster scale must be positive");
    ptree doc;
    try {
        std::istringstream in(img.svg);
        boost::property_tree::read_xml(in, doc);
    } catch (const boost::property_tree::xml_parser_error& e) {
        throw RenderError(std::string("malformed svg: ") + e.what());
    }
    auto root = doc.get_child_optional("svg");
    if (!root) throw RenderError("malformed svg: no <svg> root");

    const double width = attr_num(*root, "width"), height = attr_num(*root, "height");
    const int pw = static_cast<int>(std::lround(width * scale)), ph = static_cast<int>(std::lround(height * scale));
    if (pw <= 0 || ph <= 0) throw RenderError("malformed svg: empty canvas");

    cv::Mat canvas(ph, pw, CV_8UC4, cv::Scalar(0, 0, 0, 0));
    const Style style = inherit(*root, Style{});
    for (auto& [tag, child] : *root) draw(canvas, tag, child, style, scale);

    ImageArtifact out = img;
    out.png.clear();
    if (!cv::imencode(".png", canvas, out.png)) throw RenderError("png encoding failed");
    return out;
}

}  // namespace netsight
