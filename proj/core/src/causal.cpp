#include "mdag/causal.hpp"

#include <algorithm>

#include "mdag/error.hpp"
#include "mdag/projection.hpp"

namespace mdag {

Dag mutilate_dag(const Dag& d, std::span<const std::string> a) {
    Mask am = d.mask_of(a);
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [p, c] : d.edges())
        if (!has_bit(am, d.index_of(c))) edges.emplace_back(p, c);
    return Dag(d.vertex_names(), edges);
}

MDag mutilate_mdag(const MDag& g, std::span<const std::string> a) {
    Mask am = g.dag().mask_of(a);
    Dag dag = mutilate_dag(g.dag(), a);
    SimplicialComplex faces = g.faces().remove_vertices(am);
    return MDag(std::move(dag), std::move(faces));
}

bool check_commutation(const Dag& d, std::span<const std::string> observed,
                       std::span<const std::string> a) {
    Mask om = d.mask_of(observed);
    Mask am = d.mask_of(a);
    if (!is_subset(am, om)) throw_input("interventions must target observed vertices");

    MDag as_mdag = MDag::from_dag(d);
    MDag project_then_cut = mutilate_mdag(latent_project(as_mdag, observed), a);
    MDag cut_then_project = latent_project(MDag::from_dag(mutilate_dag(d, a)), observed);
    return project_then_cut == cut_then_project;
}

std::optional<std::vector<std::string>> distinguishing_intervention(const MDag& g, const MDag& h) {
    if (g.vertex_names() != h.vertex_names()) throw_input("graphs must share a vertex set");
    for (const auto& [p, c] : g.dag().edges()) {
        if (!h.dag().has_edge(h.dag().index_of(p), h.dag().index_of(c))) {
            std::vector<std::string> a;
            for (const auto& v : g.vertex_names())
                if (v != c) a.push_back(v);
            return a;
        }
    }
    for (const auto& [p, c] : h.dag().edges()) {
        if (!g.dag().has_edge(g.dag().index_of(p), g.dag().index_of(c))) {
            std::vector<std::string> a;
            for (const auto& v : h.vertex_names())
                if (v != c) a.push_back(v);
            return a;
        }
    }
    return std::nullopt;
}

MDag delete_edges(const MDag& g, const std::vector<std::pair<std::string, std::string>>& edges) {
    for (const auto& [p, c] : edges)
        if (!g.dag().has_edge(g.dag().index_of(p), g.dag().index_of(c)))
            throw_input("edge " + p + "->" + c + " not present");
    std::vector<std::pair<std::string, std::string>> kept;
    for (const auto& e : g.dag().edges())
        if (std::find(edges.begin(), edges.end(), e) == edges.end()) kept.push_back(e);
    Dag dag(g.vertex_names(), kept);
    return MDag(std::move(dag), g.faces());
}

}  // namespace mdag
