#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace netsight {

using NodeId = std::uint32_t;
using OriginalId = std::int64_t;
using Edge = std::pair<NodeId, NodeId>;

/// Raised for unknown node ids and out-of-range parameters.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Immutable simple undirected graph in CSR form.
///
/// Internal ids are contiguous 0..n-1. Each internal id keeps the label it
/// had in the source file (the "original id"); graphs built from edge lists
/// number nodes in ascending original-id order, so "lowest node id" tie
/// breaks agree between the two numberings.
class Graph {
public:
    Graph() = default;

    /// Self-loops are dropped and duplicate (u,v)/(v,u) pairs collapsed.
    /// `original_ids` defaults to the identity labelling.
    static Graph from_edges(std::size_t node_count, std::span<const Edge> edges,
                            std::vector<OriginalId> original_ids = {});

    std::size_t node_count() const noexcept { return original_ids_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return original_ids_.empty(); }

    /// Neighbors in ascending id order.
    std::span<const NodeId> neighbors(NodeId v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    bool contains(NodeId v) const noexcept { return v < node_count(); }
    bool has_edge(NodeId u, NodeId v) const;

    /// Edges as (u, v) with u < v, sorted lexicographically.
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    OriginalId original_id(NodeId v) const { return original_ids_.at(v); }
    const std::vector<OriginalId>& original_ids() const noexcept { return original_ids_; }
    std::optional<NodeId> find_original(OriginalId id) const;

    /// Subgraph on the nodes with keep[v] true. Relative order of surviving
    /// nodes is preserved and original ids carry over.
    Graph induced_subgraph(std::span<const char> keep) const;
    Graph without_nodes(std::span<const NodeId> removed) const;

private:
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> adjacency_;
    std::vector<Edge> edges_;
    std::vector<OriginalId> original_ids_;
    std::unordered_map<OriginalId, NodeId> index_;
};

struct LoadOptions {
    bool keep_lcc = true;
};

/// Reads a whitespace-separated edge list; `#` lines and blank lines are
/// skipped. Throws ParseError on malformed lines and DomainError when no
/// edge survives.
Graph load_edge_list(std::istream& in, const LoadOptions& options = {});
Graph parse_edge_list(std::string_view text, const LoadOptions& options = {});
Graph load_edge_list_file(const std::filesystem::path& path, const LoadOptions& options = {});

/// {"original_id": internal_id, ...} as a JSON object string.
std::string id_map_json(const Graph& g);

/// Checked degree lookup.
std::size_t degree(const Graph& g, NodeId v);

}  // namespace netsight
