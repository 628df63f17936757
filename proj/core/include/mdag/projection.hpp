#ifndef MDAG_PROJECTION_HPP
#define MDAG_PROJECTION_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdag/mdag_graph.hpp"

namespace mdag {

/// Vertex names generated for latent variables start with this prefix, which
/// the text format forbids in user vertex names.
inline constexpr char kLatentPrefix = '@';

/// Fresh vertex name for the latent replacing a facet: '@' followed by the
/// sorted facet members joined by commas.
std::string latent_name_for(const std::vector<std::string>& facet);

/// Evidence that a vertex set shares a hidden common cause: the face it stems
/// from, plus a directed path (from a face member, through dropped vertices)
/// to each target vertex.
struct HiddenCommonCause {
    std::vector<std::string> face;
    std::map<std::string, std::vector<std::string>> paths;  // target -> path
};

/// Searches for a face B inside `w` union `u` from which every vertex of `w`
/// is reachable by a directed path whose other vertices all lie in `u`.
/// Faces induced by larger facets are tried first; the first witness found is
/// returned, or nullopt when none exists.  `w` and `u` must be disjoint.
std::optional<HiddenCommonCause> hidden_common_cause(const MDag& g,
                                                     std::span<const std::string> w,
                                                     std::span<const std::string> u);

/// The latent projection of `g` onto `v`: directed edges for directed paths
/// whose interior vertices are all dropped, and bidirected faces for vertex
/// sets sharing a hidden common cause with respect to the dropped set.
///
/// Reachability through the dropped set is computed once and reused for both
/// the edge and the face construction; candidate faces are the reachable
/// covers of existing facets, so no subset enumeration is needed.
MDag latent_project(const MDag& g, std::span<const std::string> v);
MDag latent_project(const MDag& g, Mask v);

/// The DAG obtained by replacing every non-trivial facet with a fresh
/// exogenous vertex whose children are exactly the facet members.
struct LabelledCanonicalDag {
    Dag dag;
    std::map<std::string, std::vector<std::string>> facet_labels;  // fresh vertex -> facet

    std::vector<std::string> observed() const;
    std::vector<std::string> latents() const;
    /// The canonical DAG viewed as an mDAG with singleton faces.
    MDag as_mdag() const { return MDag::from_dag(dag); }
};

LabelledCanonicalDag canonical_dag(const MDag& g);

/// Self-check harness: projects the canonical DAG back onto the original
/// vertices and reports whether the input graph is recovered.
bool project_canonical_roundtrip(const MDag& g);

}  // namespace mdag

#endif  // MDAG_PROJECTION_HPP
