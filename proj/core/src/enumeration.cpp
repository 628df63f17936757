#include "mdag/enumeration.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>

#include "mdag/error.hpp"
#include "mdag/text_format.hpp"

namespace mdag {

namespace {

std::vector<std::string> index_names(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
    return names;
}

bool acyclic(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<Mask> parents(n, 0);
    for (auto [p, c] : edges) parents[c] |= bit(p);
    Mask removed = 0;
    for (;;) {
        bool progress = false;
        for (int v = 0; v < n; ++v) {
            if (has_bit(removed, v)) continue;
            if ((parents[v] & ~removed) == 0) {
                removed |= bit(v);
                progress = true;
            }
        }
        if (!progress) break;
    }
    return popcount(removed) == n;
}

int env_cap(const char* name, int fallback) {
    const char* value = std::getenv(name);
    if (!value || !*value) return fallback;
    return std::atoi(value);
}

}  // namespace

EnumerationCaps EnumerationCaps::from_environment() {
    EnumerationCaps caps;
    caps.labelled = env_cap("MDAG_ENUM_CAP", caps.labelled);
    caps.unlabelled = env_cap("MDAG_ENUM_CAP_ISO", caps.unlabelled);
    return caps;
}

std::vector<Dag> enumerate_dags(int n) {
    std::vector<std::string> names = index_names(n);
    std::vector<std::pair<int, int>> slots;
    for (int p = 0; p < n; ++p)
        for (int c = 0; c < n; ++c)
            if (p != c) slots.emplace_back(p, c);

    std::vector<Dag> out;
    std::uint64_t total = std::uint64_t{1} << slots.size();
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<std::pair<int, int>> edges;
        for (std::size_t i = 0; i < slots.size(); ++i)
            if ((code >> i) & 1) edges.push_back(slots[i]);
        if (!acyclic(n, edges)) continue;
        out.push_back(make_dag(names, edges));
    }
    return out;
}

std::vector<SimplicialComplex> enumerate_complexes(int n) {
    std::vector<std::string> names = index_names(n);
    Mask full = n == 0 ? 0 : (Mask{1} << n) - 1;

    // Candidate facet sets of size >= 2, in canonical order.
    std::vector<Mask> candidates;
    for (Mask s = 0; s <= full; ++s)
        if (popcount(s) >= 2) candidates.push_back(s);
    std::sort(candidates.begin(), candidates.end(), lex_less);

    // Depth-first enumeration of antichains of candidates.
    std::vector<SimplicialComplex> out;
    std::vector<Mask> chosen;
    auto emit = [&]() {
        out.push_back(SimplicialComplex::from_masks(names, chosen));
    };
    auto rec = [&](auto&& self, std::size_t from) -> void {
        emit();
        for (std::size_t i = from; i < candidates.size(); ++i) {
            bool comparable = false;
            for (Mask c : chosen)
                if (is_subset(c, candidates[i]) || is_subset(candidates[i], c)) { comparable = true; break; }
            if (comparable) continue;
            chosen.push_back(candidates[i]);
            self(self, i + 1);
            chosen.pop_back();
        }
    };
    rec(rec, 0);

    // Canonical output order: by serialized facet structure.
    std::sort(out.begin(), out.end(), [](const SimplicialComplex& a, const SimplicialComplex& b) {
        return a.facet_masks() < b.facet_masks();
    });
    return out;
}

std::size_t for_each_mdag(int n, bool up_to_iso, const std::function<void(const MDag&)>& fn,
                          const EnumerationCaps& caps) {
    if (n < 1) throw_input("enumeration needs at least one vertex");
    int cap = up_to_iso ? caps.unlabelled : caps.labelled;
    if (n > cap)
        throw_resource("enumeration for n=" + std::to_string(n) + " exceeds the cap of " +
                       std::to_string(cap));

    std::vector<Dag> dags = enumerate_dags(n);
    std::vector<SimplicialComplex> complexes = enumerate_complexes(n);
    std::set<std::string> seen;
    std::size_t count = 0;
    for (const auto& dag : dags) {
        for (const auto& complex : complexes) {
            MDag g(dag, complex);
            if (up_to_iso) {
                CanonicalForm canon = canonical_iso_form(g);
                if (!seen.insert(canon.key).second) continue;
                ++count;
                fn(canon.graph);
            } else {
                ++count;
                fn(g);
            }
        }
    }
    return count;
}

std::vector<MDag> enumerate_mdags(int n, bool up_to_iso, const EnumerationCaps& caps) {
    std::vector<MDag> out;
    for_each_mdag(n, up_to_iso, [&](const MDag& g) { out.push_back(g); }, caps);
    return out;
}

CanonicalForm canonical_iso_form(const MDag& g) {
    int n = g.size();
    if (n > 8) throw_resource("canonical labelling uses exhaustive permutation; 8 vertices is the cap");
    std::vector<std::string> names = index_names(n);
    const std::vector<std::string>& original = g.vertex_names();

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    CanonicalForm best;
    bool have_best = false;
    do {
        // perm[slot] = original index placed at that slot.
        std::vector<std::string> rename(n);
        for (int slot = 0; slot < n; ++slot) rename[perm[slot]] = names[slot];

        std::vector<std::pair<std::string, std::string>> edges;
        for (const auto& [p, c] : g.dag().edges())
            edges.emplace_back(rename[g.dag().index_of(p)], rename[g.dag().index_of(c)]);
        std::vector<std::vector<std::string>> faces;
        for (const auto& facet : g.faces().facet_names()) {
            std::vector<std::string> mapped;
            for (const auto& v : facet) mapped.push_back(rename[g.dag().index_of(v)]);
            faces.push_back(std::move(mapped));
        }
        MDag candidate(Dag(names, edges), SimplicialComplex::from_generators(names, faces));
        std::string key = serialize(candidate);
        if (!have_best || key < best.key) {
            best.graph = candidate;
            best.key = key;
            best.permutation.assign(n, "");
            for (int slot = 0; slot < n; ++slot) best.permutation[slot] = original[perm[slot]];
            have_best = true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace mdag
