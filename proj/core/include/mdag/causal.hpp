#ifndef MDAG_CAUSAL_HPP
#define MDAG_CAUSAL_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdag/mdag_graph.hpp"

namespace mdag {

/// Perfect intervention on `a`: removes every edge directed into a member of
/// `a`.  Vertices are retained.
Dag mutilate_dag(const Dag& d, std::span<const std::string> a);

/// Perfect intervention on `a` for mDAGs: edges into `a` removed, and `a` is
/// removed from every bidirected face (faces re-maximalized, vertices kept).
MDag mutilate_mdag(const MDag& g, std::span<const std::string> a);

/// Harness for the fact that mutilation commutes with latent projection:
/// returns whether intervening after projecting equals projecting after
/// intervening, for `a` inside the observed set.
bool check_commutation(const Dag& d, std::span<const std::string> observed,
                       std::span<const std::string> a);

/// If the underlying DAGs of `g` and `h` differ on some edge v->w, returns
/// the intervention set V \ {w}: both mutilated graphs are then DAGs whose
/// models disagree on the dependence of v and w.  When the underlying DAGs
/// agree, returns nullopt; that is a non-answer, not a claim that the graphs
/// are interventionally indistinguishable.
std::optional<std::vector<std::string>> distinguishing_intervention(const MDag& g, const MDag& h);

/// Experimental: deletes a chosen set of directed edges (edge-level
/// interventions).  No equivalence claims are attached to this operation.
MDag delete_edges(const MDag& g, const std::vector<std::pair<std::string, std::string>>& edges);

}  // namespace mdag

#endif  // MDAG_CAUSAL_HPP
