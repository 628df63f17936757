#ifndef MDAG_REDUCTION_HPP
#define MDAG_REDUCTION_HPP

#include <span>
#include <string>

#include "mdag/dag.hpp"

namespace mdag {

/// Rewrites `u` to be exogenous: joins every parent of `u` to every child of
/// `u` with a directed edge and deletes the edges into `u`.  A parentless `u`
/// leaves the graph unchanged.  Every added edge shortcuts an existing
/// directed path, so the result is again acyclic (asserted).
Dag exogenize(const Dag& d, const std::string& u);

/// Rewrites a DAG with latent vertices (everything outside `observed`) into
/// its reduced form without changing the marginal model: latents are made
/// exogenous, latents whose child set is contained in another latent's child
/// set are deleted, and latents with at most one child are deleted, until no
/// rule applies.  In the result every latent is exogenous with at least two
/// children and non-nested child sets.
///
/// Equal child sets are broken by deleting the lexicographically larger
/// latent name, so the output is deterministic.
Dag reduce_latents(const Dag& d, std::span<const std::string> observed);

/// True iff some bijection between the two latent vertex sets (vertices
/// outside `observed`) turns `d1` into `d2`.  The observed parts must match
/// exactly.  Exogenous latents are matched by their child sets; otherwise an
/// exhaustive matching over the (small) latent sets is used.
bool equal_up_to_latent_relabel(const Dag& d1, const Dag& d2, std::span<const std::string> observed);

}  // namespace mdag

#endif  // MDAG_REDUCTION_HPP
