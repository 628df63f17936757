#include "mdag/mdag_graph.hpp"

#include <algorithm>

#include "mdag/error.hpp"

namespace mdag {

MDag::MDag(Dag dag, SimplicialComplex faces) : dag_(std::move(dag)), faces_(std::move(faces)) {
    if (dag_.vertex_names() != faces_.ground())
        throw_input("face complex ground set differs from the DAG vertex set");
}

MDag MDag::from_dag(Dag dag) {
    SimplicialComplex faces = SimplicialComplex::from_generators(dag.vertex_names(), {});
    return MDag(std::move(dag), std::move(faces));
}

bool MDag::is_plain_dag() const {
    return faces_.nontrivial_facets().empty();
}

MDag MDag::induced(Mask keep) const {
    return MDag(dag_.induced(keep), faces_.induced(keep));
}

MDag MDag::induced(std::span<const std::string> keep) const {
    return induced(dag_.mask_of(keep));
}

Mask ancestors(const MDag& g, std::span<const std::string> a) {
    return g.dag().ancestors(g.dag().mask_of(a));
}

bool is_ancestral(const MDag& g, std::span<const std::string> a) {
    return g.dag().is_ancestral(g.dag().mask_of(a));
}

MDag induced_subgraph(const MDag& g, std::span<const std::string> a) {
    return g.induced(a);
}

bool is_subgraph(const MDag& h, const MDag& g) {
    for (const auto& v : h.vertex_names())
        if (!g.dag().contains(v)) return false;
    for (const auto& [p, c] : h.dag().edges())
        if (!g.dag().has_edge(g.dag().index_of(p), g.dag().index_of(c))) return false;
    for (const auto& facet : h.faces().facet_names())
        if (!g.faces().contains(g.faces().mask_of(facet))) return false;
    return true;
}

}  // namespace mdag
