#ifndef MDAG_FACTORIZATION_HPP
#define MDAG_FACTORIZATION_HPP

#include <memory>
#include <string>
#include <vector>

#include "mdag/markov.hpp"
#include "mdag/mdag_graph.hpp"

namespace mdag {

/// A node of the nested factorization recursion.  Each node carries a graph
/// whose vertices split into random and conditioning parts; `children` are
/// the district subgraphs of the random part, and `margins` the nodes
/// obtained by dropping one childless random vertex (these compose to every
/// ancestral margin).  Equal sub-problems are shared, so the structure is a
/// DAG of nodes rather than a tree.
struct FactorizationNode {
    MDag graph;
    std::vector<std::string> random_vertices;
    std::vector<std::string> conditioning_vertices;
    std::vector<std::shared_ptr<const FactorizationNode>> children;
    std::vector<std::pair<std::string, std::shared_ptr<const FactorizationNode>>> margins;

    bool is_leaf() const { return children.empty() && margins.empty(); }
};

/// Builds the factorization recursion for `g`: alternating district
/// decompositions and ancestral margins, stopping at single random vertices
/// with no further decomposition.  Graphs above `max_vertices` are rejected
/// (the recursion over margins is exponential).
std::shared_ptr<const FactorizationNode> nested_factorize(const MDag& g, int max_vertices = 7);

/// Human-readable rendering of the recursion, one node per line.
std::string format_factorization(const FactorizationNode& root);

/// One derivation step applied to a kernel computed from the observed joint.
struct KernelOp {
    enum class Kind { DistrictFactor, Marginalize };
    Kind kind = Kind::Marginalize;

    // DistrictFactor: replaces the kernel by the product over `district` of
    // the kernel conditionals q(x_v | x_before-v, x_conditioning), where
    // "before" refers to `random_order`.  Marginalize: sums out `summed`.
    std::vector<std::string> district;
    std::vector<std::string> random_order;
    std::vector<std::string> conditioning;
    std::vector<std::string> summed;

    std::string to_string() const;
};

/// An equality constraint on the observed joint that is not a conditional
/// independence of the graph itself: applying `steps` to the joint must give
/// a function that does not vary with `invariant_to`.
struct ConstraintDescriptor {
    std::vector<KernelOp> steps;
    std::vector<std::string> margin_vertices;  // random part of the final kernel
    std::vector<std::string> invariant_to;
    std::vector<std::string> support;          // what the functional can depend on
    CiStatement ci_form;                       // (margin, invariant_to, support minus both)

    std::string to_string() const;
};

/// Walks the factorization recursion and emits a descriptor for every
/// district-factor step whose resulting kernel is claimed not to depend on
/// some of its variables, skipping claims that are already conditional
/// independences of `g` (tested by d-separation in the canonical DAG) and
/// claims that hold for any distribution whatsoever (tracked symbolically).
/// Plain DAGs and purely bidirected graphs yield an empty list.
std::vector<ConstraintDescriptor> verma_constraints(const MDag& g, int max_vertices = 7);

}  // namespace mdag

#endif  // MDAG_FACTORIZATION_HPP
