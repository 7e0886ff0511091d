// Brute-force reference implementations used only by tests. They favour
// obviousness over speed and share no code with the library.
#pragma once

#include "netsight/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using netsight::Edge;
using netsight::Graph;
using netsight::NodeId;

inline constexpr std::int64_t kInf = -1;

inline Graph random_graph(std::size_t n, std::size_t max_edges, std::mt19937_64& rng, double p = 0.35) {
    std::vector<Edge> pairs;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) pairs.push_back({u, v});
    std::shuffle(pairs.begin(), pairs.end(), rng);
    std::bernoulli_distribution keep(p);
    std::vector<Edge> edges;
    for (auto e : pairs)
        if (edges.size() < max_edges && keep(rng)) edges.push_back(e);
    return Graph::from_edges(n, edges);
}

inline std::vector<std::vector<bool>> adjacency(const Graph& g) {
    const auto n = g.node_count();
    std::vector<std::vector<bool>> a(n, std::vector<bool>(n, false));
    for (auto [u, v] : g.edges()) a[u][v] = a[v][u] = true;
    return a;
}

inline std::vector<std::vector<std::int64_t>> floyd_warshall(const Graph& g) {
    const auto n = g.node_count();
    const std::int64_t big = 1 << 29;
    std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, big));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (auto [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    for (auto& row : d)
        for (auto& x : row)
            if (x >= big) x = kInf;
    return d;
}

// All simple s-t paths of exactly `len` edges, by DFS.
inline std::vector<std::vector<NodeId>> paths_of_length(const Graph& g, NodeId s, NodeId t, std::int64_t len) {
    const auto a = adjacency(g);
    std::vector<std::vector<NodeId>> out;
    std::vector<NodeId> path{s};
    std::vector<bool> used(g.node_count(), false);
    used[s] = true;
    std::function<void(NodeId)> dfs = [&](NodeId v) {
        if (static_cast<std::int64_t>(path.size()) - 1 == len) {
            if (v == t) out.push_back(path);
            return;
        }
        for (NodeId w = 0; w < g.node_count(); ++w)
            if (a[v][w] && !used[w]) {
                used[w] = true;
                path.push_back(w);
                dfs(w);
                path.pop_back();
                used[w] = false;
            }
    };
    dfs(s);
    return out;
}

// Sum over unordered pairs {s,t} of the fraction of shortest paths through v.
inline std::vector<double> betweenness(const Graph& g) {
    const auto n = g.node_count();
    const auto d = floyd_warshall(g);
    std::vector<double> bc(n, 0.0);
    for (NodeId s = 0; s < n; ++s)
        for (NodeId t = s + 1; t < n; ++t) {
            if (d[s][t] == kInf || d[s][t] < 2) continue;
            const auto paths = paths_of_length(g, s, t, d[s][t]);
            std::vector<double> through(n, 0.0);
            for (const auto& p : paths)
                for (std::size_t i = 1; i + 1 < p.size(); ++i) through[p[i]] += 1.0;
            for (NodeId v = 0; v < n; ++v) bc[v] += through[v] / static_cast<double>(paths.size());
        }
    return bc;
}

inline std::vector<double> closeness(const Graph& g) {
    const auto d = floyd_warshall(g);
    std::vector<double> out(g.node_count(), 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        std::int64_t sum = 0;
        for (NodeId u = 0; u < g.node_count(); ++u)
            if (u != v && d[v][u] != kInf) sum += d[v][u];
        out[v] = sum == 0 ? 0.0 : 1.0 / static_cast<double>(sum);
    }
    return out;
}

inline std::vector<double> collective_influence(const Graph& g, std::int64_t l) {
    const auto d = floyd_warshall(g);
    const auto n = g.node_count();
    std::vector<double> out(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        double sum = 0.0;
        for (NodeId u = 0; u < n; ++u)
            if (d[v][u] == l) sum += static_cast<double>(g.degree(u)) - 1.0;
        const double kv = static_cast<double>(g.degree(v));
        out[v] = kv <= 1.0 ? 0.0 : (kv - 1.0) * sum;
    }
    return out;
}

// Dense power iteration on the Google matrix; dangling mass spread uniformly.
inline std::vector<double> pagerank(const Graph& g, double alpha, std::size_t iters = 5000) {
    const auto n = g.node_count();
    const auto a = adjacency(g);
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        const double deg = static_cast<double>(g.degree(static_cast<NodeId>(j)));
        for (std::size_t i = 0; i < n; ++i) {
            const double walk = deg == 0 ? 1.0 / static_cast<double>(n) : (a[j][i] ? 1.0 / deg : 0.0);
            m[i][j] = alpha * walk + (1.0 - alpha) / static_cast<double>(n);
        }
    }
    std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
    for (std::size_t it = 0; it < iters; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = 0.0;
            for (std::size_t j = 0; j < n; ++j) y[i] += m[i][j] * x[j];
        }
        x.swap(y);
    }
    return x;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Canonical partition: sorted list of sorted member lists.
inline std::vector<std::vector<NodeId>> components(const Graph& g) {
    UnionFind uf(g.node_count());
    for (auto [u, v] : g.edges()) uf.unite(u, v);
    std::vector<std::vector<NodeId>> by_root(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) by_root[uf.find(v)].push_back(v);
    std::vector<std::vector<NodeId>> out;
    for (auto& c : by_root)
        if (!c.empty()) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::size_t largest_component(const Graph& g) {
    std::size_t best = 0;
    for (const auto& c : components(g)) best = std::max(best, c.size());
    return best;
}

// Back-edge search in an undirected graph.
inline bool has_cycle(const Graph& g) {
    std::vector<int> state(g.node_count(), 0);
    std::function<bool(NodeId, NodeId)> dfs = [&](NodeId v, NodeId parent) {
        state[v] = 1;
        for (NodeId w : g.neighbors(v)) {
            if (w == parent) continue;
            if (state[w] == 1 || (state[w] == 0 && dfs(w, v))) return true;
        }
        state[v] = 2;
        return false;
    };
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (state[v] == 0 && dfs(v, static_cast<NodeId>(-1))) return true;
    return false;
}

// Exact IC spread: sum over all live-edge subsets of P(subset) * |reach(seeds)|.
inline double exact_ic_spread(const Graph& g, const std::vector<NodeId>& seeds, double p) {
    const auto& edges = g.edges();
    const std::size_t m = edges.size();
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        double prob = 1.0;
        UnionFind uf(g.node_count());
        for (std::size_t i = 0; i < m; ++i) {
            if (mask >> i & 1) {
                prob *= p;
                uf.unite(edges[i].first, edges[i].second);
            } else {
                prob *= 1.0 - p;
            }
        }
        if (prob == 0.0) continue;
        std::set<std::size_t> roots;
        for (NodeId s : seeds) roots.insert(uf.find(s));
        std::size_t reach = 0;
        for (NodeId v = 0; v < g.node_count(); ++v) reach += roots.contains(uf.find(v));
        total += prob * static_cast<double>(reach);
    }
    return total;
}

inline double modularity(const Graph& g, const std::vector<std::uint32_t>& label) {
    const double m2 = 2.0 * static_cast<double>(g.edge_count());
    if (m2 == 0.0) return 0.0;
    const auto a = adjacency(g);
    double q = 0.0;
    for (NodeId i = 0; i < g.node_count(); ++i)
        for (NodeId j = 0; j < g.node_count(); ++j)
            if (label[i] == label[j])
                q += (a[i][j] ? 1.0 : 0.0) - static_cast<double>(g.degree(i) * g.degree(j)) / m2;
    return q / m2;
}

// Every set partition of {0..n-1} as restricted-growth label strings.
inline void for_each_partition(std::size_t n, const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
    std::vector<std::uint32_t> label(n, 0);
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t used) {
        if (i == n) {
            fn(label);
            return;
        }
        for (std::uint32_t c = 0; c <= used; ++c) {
            label[i] = c;
            rec(i + 1, std::max(used, c + 1));
        }
    };
    if (n == 0) return;
    label[0] = 0;
    rec(1, 1);
}

}  // namespace oracle
