#pragma once

#include "netsight/graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace netsight {

/// Node -> community index. Indices are contiguous and no community is empty.
struct CommunityAssignment {
    std::vector<std::uint32_t> membership;
    std::size_t community_count = 0;

    std::vector<std::size_t> sizes() const;
    std::vector<std::vector<NodeId>> members() const;
    /// Throws DomainError when the invariants do not hold.
    void validate(std::size_t node_count) const;
    /// Renumbers communities by first appearance in node order.
    static CommunityAssignment from_labels(const std::vector<std::uint32_t>& labels);
};

double modularity(const Graph& g, const CommunityAssignment& asg);

/// Agglomerative greedy modularity maximization (Clauset-Newman-Moore).
/// Adjacent communities are merged by largest modularity gain, ties to the
/// lexicographically smallest pair; the dendrogram level with maximal
/// modularity (earliest on ties) is returned. The algorithm is
/// deterministic; `rng_seed` is accepted so alternative detectors can share
/// the signature.
CommunityAssignment detect_communities(const Graph& g, std::uint64_t rng_seed = 0);

/// Repeatedly folds the smallest community into the neighbor community it
/// shares the most edges with until `target` communities remain.
///
/// Smallest-size ties go to the lower index. Edge-count ties go to the larger
/// community, then the lower index. A smallest community with no outside
/// edges joins the smallest other community.
CommunityAssignment merge_communities(const Graph& g, const CommunityAssignment& asg, std::size_t target);

std::string to_json(const Graph& g, const CommunityAssignment& asg);

}  // namespace netsight
