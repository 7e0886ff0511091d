#include "netsight/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

namespace netsight {

std::string_view to_string(Centrality c) {
    switch (c) {
        case Centrality::degree: return "degree";
        case Centrality::betweenness: return "betweenness";
        case Centrality::closeness: return "closeness";
        case Centrality::pagerank: return "pagerank";
        case Centrality::collective_influence: return "collective_influence";
    }
    return "unknown";
}

Centrality centrality_from_string(std::string_view name) {
    if (name == "degree") return Centrality::degree;
    if (name == "betweenness") return Centrality::betweenness;
    if (name == "closeness") return Centrality::closeness;
    if (name == "pagerank") return Centrality::pagerank;
    if (name == "collective_influence" || name == "ci") return Centrality::collective_influence;
    throw DomainError("unknown centrality '" + std::string(name) + "'");
}

CentralityScores degree_scores(const Graph& g) {
    CentralityScores out{Centrality::degree, std::vector<double>(g.node_count())};
    for (NodeId v = 0; v < g.node_count(); ++v) out.values[v] = static_cast<double>(g.degree(v));
    return out;
}

CentralityScores betweenness(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> bc(n, 0.0);
    std::vector<double> sigma(n), delta(n);
    std::vector<std::int64_t> dist(n);
    std::vector<NodeId> order;
    order.reserve(n);
    std::vector<NodeId> queue(n);

    for (NodeId s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(dist.begin(), dist.end(), -1);
        order.clear();
        sigma[s] = 1.0;
        dist[s] = 0;
        std::size_t head = 0, tail = 0;
        queue[tail++] = s;
        while (head < tail) {
            NodeId v = queue[head++];
            order.push_back(v);
            for (NodeId w : g.neighbors(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue[tail++] = w;
                }
                if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            NodeId w = *it;
            for (NodeId v : g.neighbors(w))
                if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s) bc[w] += delta[w];
        }
    }
    // Every unordered pair was visited from both endpoints.
    for (double& x : bc) x /= 2.0;
    return {Centrality::betweenness, std::move(bc)};
}

std::vector<std::int64_t> bfs_distances(const Graph& g, NodeId source) {
    if (!g.contains(source)) throw DomainError("unknown node " + std::to_string(source));
    std::vector<std::int64_t> dist(g.node_count(), kUnreachable);
    std::vector<NodeId> queue;
    queue.reserve(g.node_count());
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        NodeId v = queue[head];
        for (NodeId w : g.neighbors(v)) {
            if (dist[w] == kUnreachable) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

double closeness(const Graph& g, NodeId v) {
    auto dist = bfs_distances(g, v);
    std::int64_t total = 0;
    for (auto d : dist)
        if (d > 0) total += d;
    return total == 0 ? 0.0 : 1.0 / static_cast<double>(total);
}

CentralityScores closeness_scores(const Graph& g) {
    CentralityScores out{Centrality::closeness, std::vector<double>(g.node_count())};
    for (NodeId v = 0; v < g.node_count(); ++v) out.values[v] = closeness(g, v);
    return out;
}

CentralityScores pagerank(const Graph& g, const PageRankOptions& options) {
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw DomainError("pagerank alpha must lie in (0, 1)");
    const std::size_t n = g.node_count();
    CentralityScores out{Centrality::pagerank, {}, options.alpha};
    if (n == 0) return out;

    const double nd = static_cast<double>(n);
    std::vector<double> pr(n, 1.0 / nd), next(n);
    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        double dangling = 0.0;
        for (NodeId v = 0; v < n; ++v)
            if (g.degree(v) == 0) dangling += pr[v];
        const double base = (1.0 - options.alpha) / nd + options.alpha * dangling / nd;
        for (NodeId v = 0; v < n; ++v) {
            double acc = 0.0;
            for (NodeId u : g.neighbors(v)) acc += pr[u] / static_cast<double>(g.degree(u));
            next[v] = base + options.alpha * acc;
        }
        double change = 0.0;
        for (NodeId v = 0; v < n; ++v) change += std::abs(next[v] - pr[v]);
        pr.swap(next);
        if (change < options.tol) {
            out.values = std::move(pr);
            return out;
        }
    }
    throw ConvergenceError("pagerank did not converge in " + std::to_string(options.max_iter) + " iterations",
                           std::move(pr));
}

double collective_influence(const Graph& g, NodeId v, std::size_t radius) {
    if (radius < 1) throw DomainError("collective influence radius must be >= 1");
    if (!g.contains(v)) throw DomainError("unknown node " + std::to_string(v));
    const std::size_t kv = g.degree(v);
    if (kv <= 1) return 0.0;

    // Truncated BFS: only the exact-radius frontier matters.
    std::vector<NodeId> frontier{v}, next;
    std::vector<char> seen(g.node_count(), 0);
    seen[v] = 1;
    for (std::size_t depth = 0; depth < radius && !frontier.empty(); ++depth) {
        next.clear();
        for (NodeId x : frontier)
            for (NodeId w : g.neighbors(x))
                if (!seen[w]) {
                    seen[w] = 1;
                    next.push_back(w);
                }
        frontier.swap(next);
    }
    double sum = 0.0;
    for (NodeId u : frontier) sum += static_cast<double>(g.degree(u)) - 1.0;
    return static_cast<double>(kv - 1) * sum;
}

CentralityScores collective_influence_scores(const Graph& g, std::size_t radius) {
    CentralityScores out{Centrality::collective_influence, std::vector<double>(g.node_count()), 0.0, radius};
    for (NodeId v = 0; v < g.node_count(); ++v) out.values[v] = collective_influence(g, v, radius);
    return out;
}

CentralityScores compute_scores(const Graph& g, Centrality method, const ScoreParams& params) {
    switch (method) {
        case Centrality::degree: return degree_scores(g);
        case Centrality::betweenness: return betweenness(g);
        case Centrality::closeness: return closeness_scores(g);
        case Centrality::pagerank: return pagerank(g, params.pagerank);
        case Centrality::collective_influence: return collective_influence_scores(g, params.ci_radius);
    }
    throw DomainError("unknown centrality");
}

std::vector<NodeId> rank_nodes(const std::vector<double>& scores) {
    std::vector<NodeId> order(scores.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return scores[a] > scores[b]; });
    return order;
}

Components connected_components(const Graph& g) {
    constexpr auto unset = static_cast<std::uint32_t>(-1);
    Components c{std::vector<std::uint32_t>(g.node_count(), unset), {}};
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        if (c.label[s] != unset) continue;
        const auto id = static_cast<std::uint32_t>(c.sizes.size());
        std::size_t size = 0;
        c.label[s] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            ++size;
            for (NodeId w : g.neighbors(v))
                if (c.label[w] == unset) {
                    c.label[w] = id;
                    stack.push_back(w);
                }
        }
        c.sizes.push_back(size);
    }
    return c;
}

std::size_t largest_component_size(const Graph& g) {
    auto c = connected_components(g);
    return c.sizes.empty() ? 0 : *std::max_element(c.sizes.begin(), c.sizes.end());
}

std::optional<std::size_t> shortest_distance(const Graph& g, NodeId u, NodeId v) {
    if (!g.contains(v)) throw DomainError("unknown node " + std::to_string(v));
    auto dist = bfs_distances(g, u);
    if (dist[v] == kUnreachable) return std::nullopt;
    return static_cast<std::size_t>(dist[v]);
}

bool has_cycle(const Graph& g) {
    // A forest has exactly n - c edges.
    return g.edge_count() + connected_components(g).count() > g.node_count();
}

}  // namespace netsight
