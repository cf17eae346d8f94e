#ifndef SUBCRIT_GRAPH_HPP
#define SUBCRIT_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "subcrit/rng.hpp"
#include "subcrit/type_space.hpp"

namespace subcrit {

/// Sampled n-vertex graph: per-vertex atom indices and a simple edge list
/// (u < v, no self-loops, no duplicates).
struct TypedGraph {
    std::int64_t n = 0;
    std::vector<std::int32_t> type_of; // vertex -> atom index
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
};

struct ComponentStats {
    std::int64_t component_count = 0;
    std::vector<std::int64_t> sizes;  // ascending (multiset)
    std::vector<double> activities;   // ascending (multiset)
    std::int64_t c1 = 0;              // largest component size
    double max_activity = 0.0;        // largest component activity
};

enum class TypeAssignMode { iid, quota };

/// iid: each vertex type independent with law mu. quota: floor(n mu(k)) per
/// atom with largest-remainder completion, then a uniform shuffle of labels.
std::vector<std::int32_t> sample_types(const TypeSpace& space, std::int64_t n,
                                       TypeAssignMode mode, Rng& rng);

enum class EdgeSampleMethod { grouped, naive };

/// Edge probability min{c psi(x_i) psi(x_j) / n, 1} per unordered pair.
/// naive is the O(n^2) per-pair Bernoulli oracle; grouped draws a binomial
/// edge count per unordered pair of type classes and places the edges
/// uniformly without replacement, O(|S|^2 + m) expected.
TypedGraph sample_graph(const TypeSpace& space, double c,
                        std::vector<std::int32_t> types, EdgeSampleMethod method,
                        Rng& rng);

/// Connected components via disjoint-set union; sizes and per-component
/// activity sums are exact.
ComponentStats components(const TypedGraph& graph, const TypeSpace& space);

/// Edge-list text format: "n m" header then one "u v" line per edge.
void write_edge_list(std::ostream& os, const TypedGraph& graph);

} // namespace subcrit

#endif
