#pragma once

#include <cstdint>
#include <vector>

namespace mtqc {

struct WeightedEdge {
    int u = 0;
    int v = 0;
    std::int64_t weight = 0;
};

/// Maximum-weight matching on a general graph (Edmonds' blossom algorithm with
/// dual variables, O(n^3)). With `max_cardinality` the result is the
/// heaviest among the maximum-cardinality matchings. Integer weights keep all
/// dual updates exact. Returns mate[v], or -1 for unmatched vertices.
std::vector<int> max_weight_matching(int vertex_count, const std::vector<WeightedEdge>& edges,
                                     bool max_cardinality);

/// Minimum-cost perfect matching on a graph known to admit one. Throws
/// std::runtime_error if the returned matching is not perfect.
std::vector<int> min_weight_perfect_matching(int vertex_count, const std::vector<WeightedEdge>& edges);

}  // namespace mtqc
