#include "netsight/graph.hpp"

#include "netsight/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace netsight {

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges,
                        std::vector<OriginalId> original_ids) {
    Graph g;
    if (original_ids.empty()) {
        original_ids.resize(node_count);
        for (std::size_t i = 0; i < node_count; ++i) original_ids[i] = static_cast<OriginalId>(i);
    }
    if (original_ids.size() != node_count)
        throw DomainError("original id table does not match node count");

    g.edges_.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u >= node_count || v >= node_count) throw DomainError("edge endpoint out of range");
        if (u == v) continue;
        g.edges_.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(g.edges_.begin(), g.edges_.end());
    g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

    std::vector<std::size_t> deg(node_count, 0);
    for (auto [u, v] : g.edges_) {
        ++deg[u];
        ++deg[v];
    }
    g.offsets_.assign(node_count + 1, 0);
    for (std::size_t v = 0; v < node_count; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
    g.adjacency_.resize(g.offsets_.back());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : g.edges_) {
        g.adjacency_[fill[u]++] = v;
        g.adjacency_[fill[v]++] = u;
    }
    for (std::size_t v = 0; v < node_count; ++v)
        std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
                  g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));

    g.original_ids_ = std::move(original_ids);
    g.index_.reserve(node_count);
    for (std::size_t v = 0; v < node_count; ++v) {
        if (!g.index_.emplace(g.original_ids_[v], static_cast<NodeId>(v)).second)
            throw DomainError("duplicate original id " + std::to_string(g.original_ids_[v]));
    }
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    if (!contains(u) || !contains(v)) return false;
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<NodeId> Graph::find_original(OriginalId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Graph Graph::induced_subgraph(std::span<const char> keep) const {
    if (keep.size() != node_count()) throw DomainError("keep mask size mismatch");
    constexpr NodeId dropped = static_cast<NodeId>(-1);
    std::vector<NodeId> remap(node_count(), dropped);
    std::vector<OriginalId> ids;
    for (std::size_t v = 0; v < node_count(); ++v) {
        if (keep[v]) {
            remap[v] = static_cast<NodeId>(ids.size());
            ids.push_back(original_ids_[v]);
        }
    }
    std::vector<Edge> sub;
    for (auto [u, v] : edges_)
        if (remap[u] != dropped && remap[v] != dropped) sub.emplace_back(remap[u], remap[v]);
    const std::size_t n = ids.size();
    return from_edges(n, sub, std::move(ids));
}

Graph Graph::without_nodes(std::span<const NodeId> removed) const {
    std::vector<char> keep(node_count(), 1);
    for (NodeId v : removed) {
        if (!contains(v)) throw DomainError("unknown node " + std::to_string(v));
        keep[v] = 0;
    }
    return induced_subgraph(keep);
}

namespace {

bool parse_token(std::string_view tok, OriginalId& out) {
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

}  // namespace

Graph load_edge_list(std::istream& in, const LoadOptions& options) {
    std::vector<std::pair<OriginalId, OriginalId>> raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv(line);
        auto first = sv.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || sv[first] == '#') continue;

        std::istringstream fields(line);
        std::string a, b;
        fields >> a >> b;
        if (b.empty()) throw ParseError(lineno, "expected two node tokens");
        // A third column (edge weight) is tolerated and ignored.
        OriginalId u = 0, v = 0;
        if (!parse_token(a, u) || !parse_token(b, v))
            throw ParseError(lineno, "node tokens must be integers: '" + line + "'");
        raw.emplace_back(u, v);
    }

    std::map<OriginalId, NodeId> ids;
    for (auto [u, v] : raw) {
        if (u == v) continue;
        ids.emplace(u, 0);
        ids.emplace(v, 0);
    }
    if (ids.empty()) throw DomainError("edge list contains no edges");

    std::vector<OriginalId> labels;
    labels.reserve(ids.size());
    for (auto& [orig, internal] : ids) {
        internal = static_cast<NodeId>(labels.size());
        labels.push_back(orig);
    }
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (auto [u, v] : raw)
        if (u != v) edges.emplace_back(ids[u], ids[v]);

    const std::size_t n = labels.size();
    Graph g = Graph::from_edges(n, edges, std::move(labels));
    if (!options.keep_lcc) return g;

    auto comps = connected_components(g);
    if (comps.count() <= 1) return g;
    // Ties go to the component containing the lowest node id.
    auto largest = static_cast<std::uint32_t>(
        std::max_element(comps.sizes.begin(), comps.sizes.end()) - comps.sizes.begin());
    std::vector<char> keep(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v) keep[v] = comps.label[v] == largest;
    return g.induced_subgraph(keep);
}

Graph parse_edge_list(std::string_view text, const LoadOptions& options) {
    std::istringstream in{std::string(text)};
    return load_edge_list(in, options);
}

Graph load_edge_list_file(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return load_edge_list(in, options);
}

std::string id_map_json(const Graph& g) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t v = 0; v < g.node_count(); ++v)
        j[std::to_string(g.original_id(static_cast<NodeId>(v)))] = v;
    return j.dump();
}

std::size_t degree(const Graph& g, NodeId v) {
    if (!g.contains(v)) throw DomainError("unknown node " + std::to_string(v));
    return g.degree(v);
}

}  // namespace netsight
