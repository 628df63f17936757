#ifndef MDAG_DAG_HPP
#define MDAG_DAG_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mdag/vertex_set.hpp"

namespace mdag {

/// A directed acyclic graph over named vertices.
///
/// Vertices are opaque strings; internally each graph assigns dense indices
/// in sorted-name order, so serialization and enumeration are reproducible.
/// Acyclicity (and the absence of self-loops) is validated at construction;
/// every operation downstream may assume it.  Instances are immutable and
/// safe to share across threads.
class Dag {
  public:
    Dag() = default;

    /// Builds a DAG from vertex names and (parent, child) pairs.  Throws
    /// InvalidInput on duplicate/empty names, unknown endpoints, self-loops,
    /// or a directed cycle.
    Dag(std::vector<std::string> vertices,
        const std::vector<std::pair<std::string, std::string>>& edges);

    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& vertex_names() const { return names_; }
    const std::string& name(int v) const { return names_[v]; }

    /// Dense index of a named vertex; throws InvalidInput if unknown.
    int index_of(const std::string& name) const;
    bool contains(const std::string& name) const;

    /// Mask of a list of vertex names (throws on unknown names).
    Mask mask_of(std::span<const std::string> names) const;
    std::vector<std::string> names_of(Mask m) const;
    Mask full_mask() const { return size() == 64 ? ~Mask{0} : (Mask{1} << size()) - 1; }

    Mask parents(int v) const { return parents_[v]; }
    Mask children(int v) const { return children_[v]; }
    Mask parents_of(Mask vs) const;
    Mask children_of(Mask vs) const;
    bool has_edge(int parent, int child) const { return has_bit(parents_[child], parent); }
    int edge_count() const;

    /// Edges as (parent, child) name pairs in lexicographic order.
    std::vector<std::pair<std::string, std::string>> edges() const;

    /// All vertices with a directed path (possibly empty) to some vertex of
    /// `a`; every vertex is an ancestor of itself, so the result contains `a`.
    Mask ancestors(Mask a) const;
    Mask descendants(Mask a) const;
    bool is_ancestral(Mask a) const { return ancestors(a) == a; }

    /// Restriction to `keep`: vertices in `keep`, edges with both endpoints
    /// in `keep`.
    Dag induced(Mask keep) const;

    /// Vertex indices in a topological order; among valid orders the
    /// lexicographically smallest (by dense index) one is returned.
    std::vector<int> topological_order() const;

    bool operator==(const Dag& other) const;

  private:
    std::vector<std::string> names_;   // sorted
    std::vector<Mask> parents_;
    std::vector<Mask> children_;
};

/// Dag with the same vertex set built from masks of an existing graph.
Dag make_dag(const std::vector<std::string>& names, const std::vector<std::pair<int, int>>& edges);

}  // namespace mdag

#endif  // MDAG_DAG_HPP
