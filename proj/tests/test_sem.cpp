#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mdag/enumeration.hpp"
#include "mdag/error.hpp"
#include "mdag/projection.hpp"
#include "mdag/sem.hpp"
#include "test_support.hpp"

using namespace mdag;
using namespace mdag::test;

namespace {

std::map<std::string, int> uniform_cards(const Dag& d, int card) {
    std::map<std::string, int> out;
    for (const auto& v : d.vertex_names()) out[v] = card;
    return out;
}

std::map<std::string, int> canonical_cards(const LabelledCanonicalDag& canon, int observed_card,
                                           int latent_card) {
    std::map<std::string, int> out;
    for (const auto& v : canon.dag.vertex_names())
        out[v] = canon.facet_labels.count(v) ? latent_card : observed_card;
    return out;
}

}  // namespace

TEST_CASE("random models are deterministic and valid") {
    Dag d = load_fixture("two_fork_latents.mdag").graph.dag();
    DiscreteSem a = random_sem(d, uniform_cards(d, 2), 7);
    DiscreteSem b = random_sem(d, uniform_cards(d, 2), 7);
    for (int v = 0; v < d.size(); ++v) CHECK(a.kernel(v) == b.kernel(v));
    DiscreteSem c = random_sem(d, uniform_cards(d, 2), 8);
    bool any_diff = false;
    for (int v = 0; v < d.size(); ++v) any_diff = any_diff || a.kernel(v) != c.kernel(v);
    CHECK(any_diff);

    // All-unit cardinalities force a point mass.
    DiscreteSem unit = random_sem(d, uniform_cards(d, 1), 3);
    JointTable t = exact_joint_all(unit);
    CHECK(t.cell_count() == 1);
    CHECK(t.values()[0] == doctest::Approx(1.0));

    MDag verma = load_fixture("verma_chain.mdag").graph;
    LabelledCanonicalDag canon = canonical_dag(verma);
    DiscreteSem sem = random_sem(canon.dag, canonical_cards(canon, 2, 4), 7);
    exact_joint_all(sem).check_probability(1e-9);

    CHECK_THROWS_AS(random_sem(d, uniform_cards(d, 0), 1), Error);
}

TEST_CASE("exact joints marginalize the latent structure away") {
    // Two exogenous latents, each feeding one observed variable and a shared
    // child: the first two observed variables must come out independent.
    Dag d = load_fixture("two_fork_latents.mdag").graph.dag();
    for (std::uint64_t seed : {1, 2, 3}) {
        DiscreteSem sem = random_sem(d, uniform_cards(d, 3), seed);
        JointTable t = exact_joint(sem, std::vector<std::string>{"1", "2", "3"});
        t.check_probability(1e-9);
        CHECK(ci_gap(t, {{"1"}, {"2"}, {}}) < 1e-10);
    }

    // Without latents the joint is the product of the kernels.
    Dag pair({"a", "b"}, {{"a", "b"}});
    DiscreteSem sem = random_sem(pair, uniform_cards(pair, 2), 5);
    JointTable t = exact_joint(sem, pair.vertex_names());
    for (int sa = 0; sa < 2; ++sa)
        for (int sb = 0; sb < 2; ++sb)
            CHECK(t.values()[t.offset({sa, sb})] ==
                  doctest::Approx(sem.kernel(0)[0][sa] * sem.kernel(1)[sa][sb]));

    JointTable scalar = exact_joint(sem, std::vector<std::string>{});
    CHECK(scalar.cell_count() == 1);
    CHECK(scalar.values()[0] == doctest::Approx(1.0));

    Dag wide({"x", "y"}, {});
    CHECK_THROWS_AS(exact_joint(random_sem(wide, uniform_cards(wide, 4096), 1),
                                wide.vertex_names(), 1 << 20),
                    Error);
}

TEST_CASE("latent summation order does not change the joint") {
    MDag web = load_fixture("overlap_web.mdag").graph;
    LabelledCanonicalDag canon = canonical_dag(web);
    DiscreteSem sem = random_sem(canon.dag, canonical_cards(canon, 2, 3), 11);
    JointTable full = exact_joint_all(sem);

    std::vector<std::string> latents = canon.latents();
    JointTable forward = full;
    for (const auto& u : latents) forward = forward.marginalize({u});
    JointTable backward = full;
    for (auto it = latents.rbegin(); it != latents.rend(); ++it)
        backward = backward.marginalize({*it});
    JointTable at_once = full.marginalize(latents);

    CHECK(forward.max_abs_diff(backward) < 1e-12);
    CHECK(forward.max_abs_diff(at_once) < 1e-12);
    CHECK(forward.max_abs_diff(exact_joint(sem, web.vertex_names())) < 1e-12);

    // Mass survives any marginalization.
    CHECK(std::abs(forward.total_mass() - 1.0) < 1e-12);
}

TEST_CASE("independence gaps measure factorization failure") {
    JointTable product({"1", "2"}, {2, 2}, {0.25, 0.25, 0.25, 0.25});
    CHECK(ci_gap(product, {{"1"}, {"2"}, {}}) == doctest::Approx(0.0));

    JointTable correlated({"1", "2"}, {2, 2}, {0.5, 0.0, 0.0, 0.5});
    CHECK(ci_gap(correlated, {{"1"}, {"2"}, {}}) == doctest::Approx(0.25));
}

TEST_CASE("the reweighting functional vanishes exactly on the hidden-confounder chain") {
    MDag verma = load_fixture("verma_chain.mdag").graph;
    LabelledCanonicalDag canon = canonical_dag(verma);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        DiscreteSem sem = random_sem(canon.dag, canonical_cards(canon, 2, 3), seed);
        JointTable t = exact_joint(sem, verma.vertex_names());
        CHECK(verma_gap(t) < 1e-9);
    }

    // Four independent uniform bits: nothing depends on the first variable.
    JointTable flat({"1", "2", "3", "4"}, {2, 2, 2, 2}, std::vector<double>(16, 1.0 / 16));
    CHECK(verma_gap(flat) == doctest::Approx(0.0));

    // A full chain makes the functional genuinely vary with the first
    // variable for generic tables.
    Dag complete({"1", "2", "3", "4"},
                 {{"1", "2"}, {"1", "3"}, {"1", "4"}, {"2", "3"}, {"2", "4"}, {"3", "4"}});
    int big = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        DiscreteSem sem = random_sem(complete, uniform_cards(complete, 2), seed);
        if (verma_gap(exact_joint(sem, complete.vertex_names())) > 1e-4) ++big;
    }
    CHECK(big >= 4);

    JointTable degenerate({"1", "2", "3", "4"}, {2, 2, 2, 2}, [] {
        std::vector<double> v(16, 0.0);
        v[0] = 1.0;
        return v;
    }());
    CHECK_THROWS_AS(verma_gap(degenerate), Error);
}

TEST_CASE("descriptor evaluation agrees with the dedicated functional") {
    MDag verma = load_fixture("verma_chain.mdag").graph;
    std::vector<ConstraintDescriptor> cons = verma_constraints(verma);
    REQUIRE(cons.size() == 1);

    LabelledCanonicalDag canon = canonical_dag(verma);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        DiscreteSem sem = random_sem(canon.dag, canonical_cards(canon, 2, 3), seed);
        JointTable t = exact_joint(sem, verma.vertex_names());
        double direct = verma_gap(t);
        double generic = constraint_gap(t, cons[0]);
        CHECK(direct < 1e-9);
        CHECK(generic < 1e-9);
    }

    // On joints from an unconstrained model the functional must move.
    Dag complete({"1", "2", "3", "4"},
                 {{"1", "2"}, {"1", "3"}, {"1", "4"}, {"2", "3"}, {"2", "4"}, {"3", "4"}});
    int moved = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        DiscreteSem sem = random_sem(complete, uniform_cards(complete, 2), seed);
        JointTable t = exact_joint(sem, complete.vertex_names());
        CHECK(std::abs(constraint_gap(t, cons[0]) - verma_gap(t)) < 1e-9);
        if (constraint_gap(t, cons[0]) > 1e-6) ++moved;
    }
    CHECK(moved >= 4);

    ConstraintDescriptor empty_claim;
    CHECK(constraint_gap(JointTable({"1"}, {2}, {0.5, 0.5}), empty_claim) == 0.0);
}

TEST_CASE("every implied independence holds numerically on model joints") {
    std::mt19937_64 rng(101);
    for (int rep = 0; rep < 25; ++rep) {
        int n = 2 + static_cast<int>(rng() % 3);
        MDag g = random_mdag(n, rng);
        LabelledCanonicalDag canon = canonical_dag(g);
        DiscreteSem sem = random_sem(canon.dag, canonical_cards(canon, 2, 3), rng());
        JointTable t = exact_joint(sem, g.vertex_names());
        for (const auto& s : implied_ci(g)) CHECK(ci_gap(t, s) < 1e-9);
        for (const auto& c : verma_constraints(g)) CHECK(constraint_gap(t, c) < 1e-9);
    }
}

TEST_CASE("a slice of the four-vertex enumeration passes the same bridge") {
    // Every 401st labelled four-vertex graph, five seeded models each.
    std::size_t index = 0;
    int graphs = 0;
    int violations = 0;
    for_each_mdag(4, false, [&](const MDag& g) {
        if (index++ % 401 != 0) return;
        ++graphs;
        LabelledCanonicalDag canon = canonical_dag(g);
        std::vector<CiStatement> cis = implied_ci(g);
        std::vector<ConstraintDescriptor> cons = verma_constraints(g);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            DiscreteSem sem = random_sem(canon.dag, canonical_cards(canon, 2, 3), seed);
            JointTable t = exact_joint(sem, g.vertex_names());
            for (const auto& s : cis)
                if (ci_gap(t, s) >= 1e-9) ++violations;
            for (const auto& c : cons)
                if (constraint_gap(t, c) >= 1e-9) ++violations;
        }
    });
    CHECK(graphs > 100);
    CHECK(violations == 0);
}

TEST_CASE("joint tables round-trip through text and binary form") {
    MDag verma = load_fixture("verma_chain.mdag").graph;
    LabelledCanonicalDag canon = canonical_dag(verma);
    DiscreteSem sem = random_sem(canon.dag, canonical_cards(canon, 3, 2), 21);
    JointTable t = exact_joint(sem, verma.vertex_names());

    std::stringstream text;
    t.write_text(text);
    JointTable t2 = JointTable::read_text(text);
    CHECK(t.variables() == t2.variables());
    CHECK(t.max_abs_diff(t2) == 0.0);

    std::stringstream binary;
    t.write_binary(binary);
    JointTable t3 = JointTable::read_binary(binary);
    CHECK(t.max_abs_diff(t3) == 0.0);
}

TEST_CASE("the agreement search is deterministic and respects known limits") {
    MDag facet = load_fixture("triangle_facet.mdag").graph;
    AgreementSearchResult one = max_agreement_search(facet, 2, 2, 1, 4);
    AgreementSearchResult two = max_agreement_search(facet, 2, 2, 1, 4);
    CHECK(one.best_agreement == two.best_agreement);

    // A single shared fair coin copied to all three children reaches full
    // agreement with uniform margins.
    AgreementSearchResult full = max_agreement_search(facet, 2, 2, 50, 4);
    CHECK(full.best_agreement >= 1.0 - 1e-6);

    // Pairwise confounding only: the search never reaches full agreement.
    MDag pairwise = load_fixture("triangle_pairwise.mdag").graph;
    AgreementSearchResult best = max_agreement_search(pairwise, 2, 2, 200, 4);
    CHECK(best.best_agreement < 1.0);
    CHECK(best.best_agreement > 0.0);

    CHECK_THROWS_AS(max_agreement_search(facet, 2, 2, 0, 1), Error);
}
