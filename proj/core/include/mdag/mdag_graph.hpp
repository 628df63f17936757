#ifndef MDAG_MDAG_GRAPH_HPP
#define MDAG_MDAG_GRAPH_HPP

#include <string>
#include <vector>

#include "mdag/dag.hpp"
#include "mdag/simplicial.hpp"

namespace mdag {

/// A DAG together with a simplicial complex of bidirected faces over the same
/// vertex set.  Each non-trivial face stands for an exogenous latent variable
/// whose children are the face's members; a plain DAG is an MDag whose faces
/// are all singletons.
class MDag {
  public:
    MDag() = default;

    /// Throws InvalidInput unless `faces.ground()` equals the DAG vertex set.
    MDag(Dag dag, SimplicialComplex faces);

    /// DAG viewed as an mDAG with singleton faces only.
    static MDag from_dag(Dag dag);

    const Dag& dag() const { return dag_; }
    const SimplicialComplex& faces() const { return faces_; }
    int size() const { return dag_.size(); }
    const std::vector<std::string>& vertex_names() const { return dag_.vertex_names(); }
    bool is_plain_dag() const;
    bool has_directed_edges() const { return dag_.edge_count() > 0; }

    /// Restriction to `keep`: edges with both endpoints kept, faces entirely
    /// inside `keep`.
    MDag induced(Mask keep) const;
    MDag induced(std::span<const std::string> keep) const;

    /// Parents/children/ancestors are those of the underlying DAG.
    Mask ancestors(Mask a) const { return dag_.ancestors(a); }
    bool is_ancestral(Mask a) const { return dag_.is_ancestral(a); }

    bool operator==(const MDag& other) const {
        return dag_ == other.dag_ && faces_ == other.faces_;
    }

  private:
    Dag dag_;
    SimplicialComplex faces_;
};

/// Named-set convenience wrappers (validate inputs, throw InvalidInput).
Mask ancestors(const MDag& g, std::span<const std::string> a);
bool is_ancestral(const MDag& g, std::span<const std::string> a);
MDag induced_subgraph(const MDag& g, std::span<const std::string> a);

/// True iff the vertex, edge and face sets of `h` are all contained in those
/// of `g` (faces compare by name, so the graphs need not share a vertex set).
bool is_subgraph(const MDag& h, const MDag& g);

}  // namespace mdag

#endif  // MDAG_MDAG_GRAPH_HPP
