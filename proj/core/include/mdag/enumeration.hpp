#ifndef MDAG_ENUMERATION_HPP
#define MDAG_ENUMERATION_HPP

#include <functional>
#include <string>
#include <vector>

#include "mdag/mdag_graph.hpp"

namespace mdag {

/// Enumeration caps.  `labelled` bounds plain enumeration, `unlabelled` the
/// up-to-isomorphism variant (which canonicalizes every labelled graph).
/// Environment variables MDAG_ENUM_CAP and MDAG_ENUM_CAP_ISO override the
/// defaults.
struct EnumerationCaps {
    int labelled = 5;
    int unlabelled = 4;

    static EnumerationCaps from_environment();
};

/// All labelled DAGs on vertices "0".."n-1", in a fixed order.
std::vector<Dag> enumerate_dags(int n);

/// All simplicial complexes over "0".."n-1" (every family of facets), in a
/// fixed order.
std::vector<SimplicialComplex> enumerate_complexes(int n);

/// Streams every mDAG on n vertices (each DAG paired with each complex).
/// When `up_to_iso` is set only the first representative of each isomorphism
/// class is emitted.  Returns the number of graphs emitted.
std::size_t for_each_mdag(int n, bool up_to_iso, const std::function<void(const MDag&)>& fn,
                          const EnumerationCaps& caps = EnumerationCaps::from_environment());

/// Materialized variant of `for_each_mdag`.
std::vector<MDag> enumerate_mdags(int n, bool up_to_iso,
                                  const EnumerationCaps& caps = EnumerationCaps::from_environment());

/// Canonical labelling: relabels the vertices to "0".."n-1" by the
/// permutation minimizing the serialized form; two graphs are isomorphic iff
/// their canonical forms are equal.
struct CanonicalForm {
    MDag graph;
    std::vector<std::string> permutation;  // permutation[i] = original name at slot i
    std::string key;                       // serialized canonical graph
};

CanonicalForm canonical_iso_form(const MDag& g);

}  // namespace mdag

#endif  // MDAG_ENUMERATION_HPP
