#include <benchmark/benchmark.h>

#include <random>

#include "mdag/enumeration.hpp"
#include "mdag/equivalence.hpp"
#include "mdag/markov.hpp"
#include "mdag/projection.hpp"
#include "mdag/sem.hpp"

using namespace mdag;

namespace {

MDag sample_graph(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng() % 5 < 2) edges.emplace_back(names[i], names[j]);
    std::vector<std::vector<std::string>> faces;
    for (int k = 0; k < 3; ++k) {
        std::vector<std::string> face{names[rng() % n], names[rng() % n]};
        if (face[0] != face[1]) faces.push_back(face);
    }
    return MDag(Dag(names, edges), SimplicialComplex::from_generators(names, faces));
}

}  // namespace

static void BM_LatentProject(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    MDag g = sample_graph(n, 7);
    std::vector<std::string> keep(g.vertex_names().begin(), g.vertex_names().end() - n / 3);
    for (auto _ : state) benchmark::DoNotOptimize(latent_project(g, keep));
}
BENCHMARK(BM_LatentProject)->Arg(6)->Arg(9)->Arg(12);

static void BM_DSeparation(benchmark::State& state) {
    MDag g = sample_graph(static_cast<int>(state.range(0)), 13);
    const Dag& d = g.dag();
    for (auto _ : state)
        benchmark::DoNotOptimize(d_separated(d, bit(0), bit(d.size() - 1), bit(1) | bit(2)));
}
BENCHMARK(BM_DSeparation)->Arg(8)->Arg(16);

static void BM_EnumerateUnlabelled3(benchmark::State& state) {
    for (auto _ : state) {
        std::size_t count = for_each_mdag(3, true, [](const MDag&) {});
        benchmark::DoNotOptimize(count);
    }
}
BENCHMARK(BM_EnumerateUnlabelled3);

static void BM_Classify3(benchmark::State& state) {
    std::vector<MDag> graphs = enumerate_mdags(3, true);
    for (auto _ : state) {
        EquivalenceReport report = equivalence_classes(graphs, true);
        benchmark::DoNotOptimize(report.classes.size());
    }
}
BENCHMARK(BM_Classify3);

static void BM_ExactJoint(benchmark::State& state) {
    MDag g = sample_graph(5, 23);
    LabelledCanonicalDag canon = canonical_dag(g);
    std::map<std::string, int> cards;
    for (const auto& v : canon.dag.vertex_names())
        cards[v] = canon.facet_labels.count(v) ? 3 : 2;
    DiscreteSem sem = random_sem(canon.dag, cards, 5);
    std::vector<std::string> observed = g.vertex_names();
    for (auto _ : state) benchmark::DoNotOptimize(exact_joint(sem, observed));
}
BENCHMARK(BM_ExactJoint);

BENCHMARK_MAIN();
