#pragma once

#include "netsight/graph.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace netsight {

enum class Centrality { degree, betweenness, closeness, pagerank, collective_influence };

std::string_view to_string(Centrality c);
Centrality centrality_from_string(std::string_view name);

struct PageRankOptions {
    double alpha = 0.85;
    double tol = 1e-9;
    std::size_t max_iter = 200;
};

struct CentralityScores {
    Centrality method = Centrality::degree;
    std::vector<double> values;
    double alpha = 0.0;      // pagerank only
    std::size_t radius = 0;  // collective influence only
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> last)
        : std::runtime_error(what), last_iterate(std::move(last)) {}
    std::vector<double> last_iterate;
};

CentralityScores degree_scores(const Graph& g);

/// Unnormalized Brandes betweenness; each unordered (s, t) pair counts once.
CentralityScores betweenness(const Graph& g);

/// 1 / sum of hop distances to reachable nodes; 0 for isolated nodes.
double closeness(const Graph& g, NodeId v);
CentralityScores closeness_scores(const Graph& g);

/// Power iteration on the undirected random walk. Mass on isolated nodes is
/// spread uniformly so the scores always sum to one.
CentralityScores pagerank(const Graph& g, const PageRankOptions& options = {});

double collective_influence(const Graph& g, NodeId v, std::size_t radius);
CentralityScores collective_influence_scores(const Graph& g, std::size_t radius);

struct ScoreParams {
    PageRankOptions pagerank;
    std::size_t ci_radius = 2;
};

CentralityScores compute_scores(const Graph& g, Centrality method, const ScoreParams& params = {});

/// Node ids sorted by descending score, ties broken by lower id.
std::vector<NodeId> rank_nodes(const std::vector<double>& scores);

struct Components {
    std::vector<std::uint32_t> label;  // component index per node, in discovery order
    std::vector<std::size_t> sizes;
    std::size_t count() const noexcept { return sizes.size(); }
};

Components connected_components(const Graph& g);
std::size_t largest_component_size(const Graph& g);

inline constexpr std::int64_t kUnreachable = -1;

/// Hop distances from `source`; kUnreachable for other components.
std::vector<std::int64_t> bfs_distances(const Graph& g, NodeId source);

/// nullopt when u and v lie in different components.
std::optional<std::size_t> shortest_distance(const Graph& g, NodeId u, NodeId v);

bool has_cycle(const Graph& g);

}  // namespace netsight
