#ifndef MDAG_EQUIVALENCE_HPP
#define MDAG_EQUIVALENCE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdag/mdag_graph.hpp"

namespace mdag {

/// Undirected co-occurrence structure: v - w whenever the two appear together
/// in a directed edge or some bidirected face.
struct Skeleton {
    std::vector<std::string> vertices;
    std::vector<std::pair<std::string, std::string>> edges;  // sorted pairs, sorted list

    bool operator==(const Skeleton& other) const = default;
};

Skeleton skeleton(const MDag& g);

/// The facet-splitting rewrite.  Requires `b` to be a facet, `c` a proper
/// non-empty subset with d = b \ c non-empty, and
///   (i)  every face meeting `c` lies inside `b`;
///   (ii) pa(d') contains pa(c) for every d' in d (pa(c) is the union of the
///        members' parent sets).
/// The result removes the facet `b`, adds faces `c` and `d`, and adds the
/// directed edges c' -> d'.  The rewrite preserves the induced model and the
/// skeleton.  Violated preconditions are rejected naming the failed
/// condition.
MDag facet_split(const MDag& g, std::span<const std::string> b, std::span<const std::string> c);

/// Tests the preconditions without applying; returns the failure message or
/// nullopt when the split is legal.
std::optional<std::string> facet_split_obstruction(const MDag& g, Mask b, Mask c);

/// A constructive witness that a graph's model contains every distribution:
/// vertices are generated along `order` by inverse-CDF sampling, with each
/// vertex's noise routed through the face named by `carrier` (or its private
/// error when absent), so that every vertex can reconstruct the values of all
/// its predecessors through parents and shared-face latents.
struct SaturationWitness {
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::string>> carrier;  // vertex -> face
};

/// Searches for a saturation witness; nullopt means none was found (which is
/// not a proof of non-saturation).
std::optional<SaturationWitness> saturating_order(const MDag& g);

/// A decision about one pair of input graphs.
struct SeparationCertificate {
    enum class Kind {
        Skeleton,       // different skeletons (discrete state spaces)
        Bidirected,     // both purely bidirected and different (any state space)
        CiSet,          // different implied independence sets (discrete)
        DagMarkov,      // both DAGs, different skeleton/immorality classes (discrete)
        Catalog,        // published three-vertex catalog fact
        Undecided,
    };
    Kind kind = Kind::Undecided;
    bool discrete_only = false;
    std::string detail;
};

const char* to_string(SeparationCertificate::Kind k);

/// Result of classifying a family of graphs.
struct EquivalenceReport {
    /// classes[i] lists input indices; classes are sorted by smallest member.
    std::vector<std::vector<int>> classes;
    /// For every pair of inputs in the same class: how the merge was proven
    /// (chain of facet splits / relabelings / DAG-equivalence hops).
    std::map<std::pair<int, int>, std::string> merge_certificates;
    /// For every pair of inputs in different classes: the separation found,
    /// possibly Undecided (undecided pairs are kept separate).
    std::map<std::pair<int, int>, SeparationCertificate> separations;

    int undecided_pairs() const;
};

/// Partitions `graphs` by the symmetric-transitive closure of facet splits,
/// optional isomorphism, and DAG Markov equivalence; pairs in different
/// classes carry the strongest separation certificate found.  All graphs must
/// share one vertex count.  Merges use only model-preserving rewrites and
/// separations only model-distinguishing invariants, so classes can be
/// trusted in both directions except where a pair is reported Undecided.
EquivalenceReport equivalence_classes(const std::vector<MDag>& graphs, bool up_to_iso,
                                      int threads = 1);

}  // namespace mdag

#endif  // MDAG_EQUIVALENCE_HPP
