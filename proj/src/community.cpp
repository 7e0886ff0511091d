#include "netsight/community.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <optional>

#include <json.hpp>

namespace netsight {

std::vector<std::size_t> CommunityAssignment::sizes() const {
    std::vector<std::size_t> out(community_count, 0);
    for (auto c : membership) ++out.at(c);
    return out;
}

std::vector<std::vector<NodeId>> CommunityAssignment::members() const {
    std::vector<std::vector<NodeId>> out(community_count);
    for (std::size_t v = 0; v < membership.size(); ++v) out.at(membership[v]).push_back(static_cast<NodeId>(v));
    return out;
}

void CommunityAssignment::validate(std::size_t node_count) const {
    if (membership.size() != node_count) throw DomainError("community assignment does not cover every node");
    std::vector<char> used(community_count, 0);
    for (auto c : membership) {
        if (c >= community_count) throw DomainError("community index out of range");
        used[c] = 1;
    }
    if (std::find(used.begin(), used.end(), 0) != used.end()) throw DomainError("empty community");
}

CommunityAssignment CommunityAssignment::from_labels(const std::vector<std::uint32_t>& labels) {
    std::map<std::uint32_t, std::uint32_t> remap;
    CommunityAssignment out;
    out.membership.reserve(labels.size());
    for (auto l : labels) {
        auto [it, fresh] = remap.emplace(l, static_cast<std::uint32_t>(remap.size()));
        out.membership.push_back(it->second);
    }
    out.community_count = remap.size();
    return out;
}

double modularity(const Graph& g, const CommunityAssignment& asg) {
    asg.validate(g.node_count());
    const double m = static_cast<double>(g.edge_count());
    if (m == 0) return 0.0;
    std::vector<double> inner(asg.community_count, 0.0), deg(asg.community_count, 0.0);
    for (auto [u, v] : g.edges())
        if (asg.membership[u] == asg.membership[v]) inner[asg.membership[u]] += 1.0;
    for (NodeId v = 0; v < g.node_count(); ++v) deg[asg.membership[v]] += static_cast<double>(g.degree(v));
    double q = 0.0;
    for (std::size_t c = 0; c < asg.community_count; ++c) q += inner[c] / m - (deg[c] / (2 * m)) * (deg[c] / (2 * m));
    return q;
}

namespace {

// Modularity gains are kept as exact integers: gain(i, j) * 4m^2 / 2 = 2m*c_ij - d_i*d_j
// where c_ij counts edges between the two communities and d is the degree sum.
struct Cnm {
    std::int64_t two_m;
    std::vector<std::map<std::uint32_t, std::int64_t>> links;  // community -> neighbor -> edge count
    std::vector<std::int64_t> deg;
    std::vector<char> alive;
    struct Best {
        std::int64_t gain = std::numeric_limits<std::int64_t>::min();
        std::uint32_t partner = 0;
        bool valid = false;
    };
    std::vector<Best> best;

    std::int64_t gain(std::uint32_t i, std::uint32_t j, std::int64_t c) const { return two_m * c - deg[i] * deg[j]; }

    void refresh(std::uint32_t i) {
        Best b;
        for (auto [j, c] : links[i]) {
            auto gval = gain(i, j, c);
            if (!b.valid || gval > b.gain) b = {gval, j, true};
        }
        best[i] = b;
    }
};

}  // namespace

CommunityAssignment detect_communities(const Graph& g, std::uint64_t /*rng_seed*/) {
    const std::size_t n = g.node_count();
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    if (g.edge_count() == 0) return CommunityAssignment::from_labels(parent);

    Cnm st;
    st.two_m = 2 * static_cast<std::int64_t>(g.edge_count());
    st.links.resize(n);
    st.deg.resize(n);
    st.alive.assign(n, 1);
    st.best.resize(n);
    for (NodeId v = 0; v < n; ++v) st.deg[v] = static_cast<std::int64_t>(g.degree(v));
    for (auto [u, v] : g.edges()) {
        st.links[u][v] += 1;
        st.links[v][u] += 1;
    }
    for (std::uint32_t i = 0; i < n; ++i) st.refresh(i);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> merges;
    std::int64_t running = 0, best_total = 0;
    std::size_t best_level = 0;
    for (;;) {
        std::optional<std::pair<std::uint32_t, std::uint32_t>> pick;
        std::int64_t pick_gain = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (!st.alive[i] || !st.best[i].valid) continue;
            auto a = std::min(i, st.best[i].partner), b = std::max(i, st.best[i].partner);
            if (!pick || st.best[i].gain > pick_gain ||
                (st.best[i].gain == pick_gain && std::make_pair(a, b) < *pick)) {
                pick = {a, b};
                pick_gain = st.best[i].gain;
            }
        }
        if (!pick) break;
        auto [keep, gone] = *pick;

        // Fold `gone` into `keep`.
        for (auto [k, c] : st.links[gone]) {
            if (k == keep) continue;
            st.links[keep][k] += c;
            st.links[k][keep] += c;
            st.links[k].erase(gone);
        }
        st.links[keep].erase(gone);
        st.links[gone].clear();
        st.deg[keep] += st.deg[gone];
        st.alive[gone] = 0;
        st.best[gone] = {};
        st.refresh(keep);
        for (auto& [k, c] : st.links[keep]) st.refresh(k);

        merges.emplace_back(keep, gone);
        running += pick_gain;
        if (running > best_total) {
            best_total = running;
            best_level = merges.size();
        }
    }

    for (std::size_t i = 0; i < best_level; ++i) {
        auto [keep, gone] = merges[i];
        for (auto& p : parent)
            if (p == gone) p = keep;
    }
    return CommunityAssignment::from_labels(parent);
}

CommunityAssignment merge_communities(const Graph& g, const CommunityAssignment& asg, std::size_t target) {
    asg.validate(g.node_count());
    if (target < 1 || target > asg.community_count)
        throw DomainError("merge target must lie in [1, community_count]");

    CommunityAssignment cur = asg;
    while (cur.community_count > target) {
        const auto sizes = cur.sizes();
        const auto smallest = static_cast<std::uint32_t>(
            std::min_element(sizes.begin(), sizes.end()) - sizes.begin());

        std::vector<std::size_t> links(cur.community_count, 0);
        for (auto [u, v] : g.edges()) {
            auto cu = cur.membership[u], cv = cur.membership[v];
            if (cu == smallest && cv != smallest) ++links[cv];
            else if (cv == smallest && cu != smallest) ++links[cu];
        }

        std::optional<std::uint32_t> closest;
        for (std::uint32_t c = 0; c < cur.community_count; ++c) {
            if (c == smallest || links[c] == 0) continue;
            if (!closest || links[c] > links[*closest] ||
                (links[c] == links[*closest] && sizes[c] > sizes[*closest]))
                closest = c;
        }
        if (!closest) {
            for (std::uint32_t c = 0; c < cur.community_count; ++c) {
                if (c == smallest) continue;
                if (!closest || sizes[c] < sizes[*closest]) closest = c;
            }
        }

        // Reassign, then close the gap left by `smallest`.
        for (auto& m : cur.membership) {
            if (m == smallest) m = *closest;
            if (m > smallest) --m;
        }
        --cur.community_count;
    }
    return cur;
}

std::string to_json(const Graph& g, const CommunityAssignment& asg) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t v = 0; v < asg.membership.size(); ++v)
        j[std::to_string(g.original_id(static_cast<NodeId>(v)))] = asg.membership[v];
    return j.dump();
}

}  // namespace netsight
