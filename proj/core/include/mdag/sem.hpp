#ifndef MDAG_SEM_HPP
#define MDAG_SEM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mdag/dag.hpp"
#include "mdag/factorization.hpp"
#include "mdag/joint_table.hpp"
#include "mdag/markov.hpp"
#include "mdag/mdag_graph.hpp"

namespace mdag {

/// A finite-discrete structural equation model: one conditional probability
/// table per vertex, with rows indexed by parent configurations (parents in
/// sorted order, last parent fastest).  Every row is non-negative and sums to
/// one within 1e-12, validated on construction.
class DiscreteSem {
  public:
    DiscreteSem() = default;
    DiscreteSem(Dag dag, std::map<std::string, int> cardinalities,
                std::map<std::string, std::vector<std::vector<double>>> kernels);

    const Dag& dag() const { return dag_; }
    int card(int v) const { return cards_[v]; }
    const std::vector<std::vector<double>>& kernel(int v) const { return kernels_[v]; }

    /// Number of parent configurations of vertex v.
    std::size_t row_count(int v) const;

  private:
    Dag dag_;
    std::vector<int> cards_;
    std::vector<std::vector<std::vector<double>>> kernels_;  // [vertex][row][state]
};

/// CPT rows drawn from a symmetric Dirichlet(1), deterministically from the
/// seed (the generator and its mapping to the unit interval are pinned, so
/// results are identical across platforms).
DiscreteSem random_sem(const Dag& dag, const std::map<std::string, int>& cards, std::uint64_t seed);

/// The exact joint distribution of the observed vertices: multiplies all
/// kernels over the full product state space and sums out the rest.  The
/// result lists variables in sorted order.  Product spaces above `max_cells`
/// raise a resource error.
JointTable exact_joint(const DiscreteSem& sem, std::span<const std::string> observed,
                       std::size_t max_cells = std::size_t{1} << 24);
JointTable exact_joint_all(const DiscreteSem& sem, std::size_t max_cells = std::size_t{1} << 24);

/// Sup-norm conditional independence deviation:
/// max over states of |P(a,b|c) - P(a|c)P(b|c)| over cells with P(c) > 0.
double ci_gap(const JointTable& t, const CiStatement& s);

/// The reweighting functional on a four-variable table (variables taken in
/// the table's order x1..x4): q(x3,x4) = sum_x2 p(x2|x1) p(x4|x1,x2,x3),
/// computed per x1; returns the largest deviation across x1 values.  The
/// table must be strictly positive (degenerate error otherwise).
double verma_gap(const JointTable& t);

/// Evaluates a constraint descriptor on a joint: applies the derivation steps
/// and returns the deviation from the claimed invariance.
double constraint_gap(const JointTable& t, const ConstraintDescriptor& c);

/// Result of the heuristic agreement search.
struct AgreementSearchResult {
    double best_agreement = 0.0;      // P(all observed equal), margin-feasible
    double best_margin_penalty = 0.0; // largest |P(v = s) - 1/card| at the optimum
    std::uint64_t evaluations = 0;
};

/// Random-restart hill-climbing over the CPTs of the canonical DAG of `g`,
/// maximizing P(all observed variables equal) subject to uniform margins
/// (penalty method).  Purely heuristic: the returned value is a lower bound
/// witness, never a proof of what cannot be achieved.  Deterministic for a
/// fixed budget and seed.
AgreementSearchResult max_agreement_search(const MDag& g, int observed_card, int latent_card,
                                           std::uint64_t budget, std::uint64_t seed);

}  // namespace mdag

#endif  // MDAG_SEM_HPP
