#ifndef MDAG_MARKOV_HPP
#define MDAG_MARKOV_HPP

#include <span>
#include <string>
#include <vector>

#include "mdag/mdag_graph.hpp"
#include "mdag/vertex_set.hpp"

namespace mdag {

/// A conditional independence statement: the variables of `a` are jointly
/// independent of those of `b` given those of `c`.
struct CiStatement {
    std::vector<std::string> a;
    std::vector<std::string> b;
    std::vector<std::string> c;

    /// Throws InvalidInput unless a, b, c are pairwise disjoint and a, b are
    /// non-empty.
    void validate() const;
    std::string to_string() const;
    bool operator==(const CiStatement& other) const = default;
};

/// Path-blocking criterion: every path between `a` and `b` has a non-collider
/// in `c` or a collider outside the ancestors of `c` (each vertex counts as
/// its own ancestor).  Implemented as reachability over (vertex, direction)
/// states rather than path enumeration.
bool d_separated(const Dag& d, Mask a, Mask b, Mask c);
bool d_separated(const Dag& d, std::span<const std::string> a, std::span<const std::string> b,
                 std::span<const std::string> c);

/// All conditional independences among the observed vertices that follow
/// from the graph: statements ({x},{y},C) with singleton endpoints and every
/// conditioning set C, tested in the canonical DAG.  Symmetric duplicates
/// (x,y)~(y,x) are emitted once.  Enumeration is exponential in the vertex
/// count, so graphs above `max_vertices` are rejected with a resource error.
std::vector<CiStatement> implied_ci(const MDag& g, int max_vertices = 6);

/// Partition into districts: maximal sets connected by two-element bidirected
/// faces.  Blocks and members come out in canonical order.
VertexPartition districts(const MDag& g);
std::vector<Mask> district_masks(const MDag& g);

/// A district subgraph: the induced graph over the district plus its parents,
/// with only the directed edges pointing into the district, faces inside the
/// district, and the outside parents marked as conditioning vertices.
struct DistrictGraph {
    MDag graph;
    std::vector<std::string> random_vertices;        // the district
    std::vector<std::string> conditioning_vertices;  // pa(D) \ D
};

/// Throws InvalidInput if `d` is not a district of `g`.
DistrictGraph district_subgraph(const MDag& g, std::span<const std::string> d);

}  // namespace mdag

#endif  // MDAG_MARKOV_HPP
