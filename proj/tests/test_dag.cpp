#include <doctest.h>

#include "mdag/error.hpp"
#include "test_support.hpp"

using namespace mdag;
using namespace mdag::test;

TEST_CASE("dag construction validates its input") {
    CHECK_THROWS_AS(Dag({"a", "b"}, {{"a", "a"}}), Error);
    CHECK_THROWS_AS(Dag({"a", "b"}, {{"a", "b"}, {"b", "a"}}), Error);
    CHECK_THROWS_AS(Dag({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}}), Error);
    CHECK_THROWS_AS(Dag({"a", "b"}, {{"a", "x"}}), Error);
    CHECK_THROWS_AS(Dag({"a", "a"}, {}), Error);
    CHECK_NOTHROW(Dag({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}}));
}

TEST_CASE("cycle detection agrees with the brute-force oracle on all small graphs") {
    for (int n = 2; n <= 4; ++n) {
        std::vector<std::pair<int, int>> slots;
        for (int p = 0; p < n; ++p)
            for (int c = 0; c < n; ++c)
                if (p != c) slots.emplace_back(p, c);
        std::uint64_t total = std::uint64_t{1} << slots.size();
        // All 3-vertex graphs; a deterministic stride through the 4-vertex ones.
        std::uint64_t stride = n <= 3 ? 1 : 7;
        for (std::uint64_t code = 0; code < total; code += stride) {
            std::vector<std::pair<int, int>> edges;
            for (std::size_t i = 0; i < slots.size(); ++i)
                if ((code >> i) & 1) edges.push_back(slots[i]);
            bool cyclic = brute_force_has_cycle(n, edges);
            bool threw = false;
            try {
                make_dag(names_upto(n), edges);
            } catch (const Error&) {
                threw = true;
            }
            CHECK(threw == cyclic);
        }
    }
}

TEST_CASE("ancestors walks directed paths backwards") {
    MDag g = load_fixture("confounded_chain.mdag").graph;
    const Dag& d = g.dag();

    CHECK(d.ancestors(d.mask_of(std::vector<std::string>{"4"})) == d.full_mask());
    CHECK(d.ancestors(0) == 0);

    MDag edgeless = parse_mdag("vertices: a b c\n");
    Mask b = edgeless.dag().mask_of(std::vector<std::string>{"b"});
    CHECK(edgeless.dag().ancestors(b) == b);

    CHECK_THROWS_AS(ancestors(g, std::vector<std::string>{"nope"}), Error);
}

TEST_CASE("ancestral sets contain their own ancestors") {
    MDag g = load_fixture("confounded_chain.mdag").graph;
    CHECK(is_ancestral(g, std::vector<std::string>{"1", "2", "5"}));
    CHECK(!is_ancestral(g, std::vector<std::string>{"4"}));
    CHECK(is_ancestral(g, g.vertex_names()));
}

TEST_CASE("ancestors is monotone and idempotent") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 200; ++rep) {
        int n = 2 + static_cast<int>(rng() % 6);
        Dag d = random_dag(n, rng);
        Mask a = rng() & d.full_mask();
        Mask b = a | (rng() & d.full_mask());
        CHECK(is_subset(d.ancestors(a), d.ancestors(b)));
        CHECK(d.ancestors(d.ancestors(a)) == d.ancestors(a));
    }
}

TEST_CASE("induced subgraphs restrict edges and faces") {
    MDag g = load_fixture("overlap_web.mdag").graph;

    MDag cde = induced_subgraph(g, std::vector<std::string>{"c", "d", "e"});
    CHECK(serialize(cde) == "vertices: c d e\nedges: c->e d->e\nfaces: {c,d,e}\n");

    CHECK(induced_subgraph(g, g.vertex_names()) == g);

    MDag af = induced_subgraph(g, std::vector<std::string>{"a", "f"});
    CHECK(serialize(af) == "vertices: a f\nedges:\nfaces:\n");

    CHECK_THROWS_AS(induced_subgraph(g, std::vector<std::string>{"zz"}), Error);
}

TEST_CASE("subgraph containment checks vertices, edges and faces") {
    MDag one_facet = load_fixture("triangle_facet_edge.mdag").graph;
    MDag pairwise = load_fixture("triangle_pairwise_edge.mdag").graph;
    CHECK(one_facet.dag() == pairwise.dag());
    CHECK(!is_subgraph(one_facet, pairwise));
    CHECK(is_subgraph(pairwise, one_facet));

    CHECK(is_subgraph(one_facet, one_facet));

    MDag minimal = parse_mdag("vertices: 1 2 3\n");
    CHECK(is_subgraph(minimal, one_facet));
    CHECK(is_subgraph(minimal, pairwise));
}

TEST_CASE("induced subgraphs are subgraphs") {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 100; ++rep) {
        int n = 2 + static_cast<int>(rng() % 5);
        MDag g = random_mdag(n, rng);
        std::vector<std::string> keep = random_subset(g.vertex_names(), rng);
        CHECK(is_subgraph(g.induced(g.dag().mask_of(keep)), g));
    }
}

TEST_CASE("vertex partitions validate disjointness and cover") {
    VertexPartition p{{"a", "b", "c"}, {{"a"}, {"b", "c"}}};
    CHECK_NOTHROW(p.validate());
    VertexPartition overlap{{"a", "b"}, {{"a"}, {"a", "b"}}};
    CHECK_THROWS_AS(overlap.validate(), Error);
    VertexPartition missing{{"a", "b"}, {{"a"}}};
    CHECK_THROWS_AS(missing.validate(), Error);
}
