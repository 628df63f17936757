#include "mdag/reduction.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "mdag/error.hpp"

namespace mdag {

namespace {

struct EdgeSet {
    std::vector<std::string> vertices;
    std::set<std::pair<std::string, std::string>> edges;

    Dag to_dag() const {
        return Dag(vertices, {edges.begin(), edges.end()});
    }
};

std::set<std::string> parents_in(const EdgeSet& g, const std::string& v) {
    std::set<std::string> out;
    for (const auto& [p, c] : g.edges)
        if (c == v) out.insert(p);
    return out;
}

std::set<std::string> children_in(const EdgeSet& g, const std::string& v) {
    std::set<std::string> out;
    for (const auto& [p, c] : g.edges)
        if (p == v) out.insert(c);
    return out;
}

void exogenize_in_place(EdgeSet& g, const std::string& u) {
    std::set<std::string> ps = parents_in(g, u);
    if (ps.empty()) return;
    std::set<std::string> cs = children_in(g, u);
    for (const auto& p : ps) {
        for (const auto& c : cs) g.edges.insert({p, c});
        g.edges.erase({p, u});
    }
}

}  // namespace

Dag exogenize(const Dag& d, const std::string& u) {
    d.index_of(u);
    EdgeSet g{d.vertex_names(), {}};
    for (const auto& e : d.edges()) g.edges.insert(e);
    exogenize_in_place(g, u);
    return g.to_dag();  // construction re-asserts acyclicity
}

Dag reduce_latents(const Dag& d, std::span<const std::string> observed) {
    Mask obs_mask = d.mask_of(observed);
    EdgeSet g{d.vertex_names(), {}};
    for (const auto& e : d.edges()) g.edges.insert(e);

    std::set<std::string> latents;
    for (int v : bits_of(d.full_mask() & ~obs_mask)) latents.insert(d.name(v));

    // Make every latent exogenous.  One pass in topological order suffices:
    // exogenizing a vertex only adds edges from earlier to later vertices,
    // and nothing can re-acquire a parent once its incoming edges are gone.
    for (int v : d.topological_order())
        if (latents.count(d.name(v))) exogenize_in_place(g, d.name(v));

    // Delete redundant latents until nothing changes.
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<std::string> lat(latents.begin(), latents.end());

        // A latent whose child set is covered by another latent's is dropped;
        // ties on equal child sets delete the lexicographically larger name.
        for (const auto& w : lat) {
            std::set<std::string> cw = children_in(g, w);
            for (const auto& u : lat) {
                if (u == w || !latents.count(u) || !latents.count(w)) continue;
                std::set<std::string> cu = children_in(g, u);
                bool nested = std::includes(cu.begin(), cu.end(), cw.begin(), cw.end());
                if (!nested) continue;
                if (cu == cw && w < u) continue;
                for (const auto& c : cw) g.edges.erase({w, c});
                g.vertices.erase(std::find(g.vertices.begin(), g.vertices.end(), w));
                latents.erase(w);
                changed = true;
                break;
            }
            if (changed) break;
        }
        if (changed) continue;

        // A latent with at most one child carries no marginal structure.
        for (const auto& w : lat) {
            std::set<std::string> cw = children_in(g, w);
            if (cw.size() <= 1) {
                for (const auto& c : cw) g.edges.erase({w, c});
                g.vertices.erase(std::find(g.vertices.begin(), g.vertices.end(), w));
                latents.erase(w);
                changed = true;
                break;
            }
        }
    }
    return g.to_dag();
}

bool equal_up_to_latent_relabel(const Dag& d1, const Dag& d2, std::span<const std::string> observed) {
    for (const auto& v : observed) {
        d1.index_of(v);
        d2.index_of(v);
    }
    std::set<std::string> obs(observed.begin(), observed.end());

    auto split = [&obs](const Dag& d) {
        std::vector<std::string> latents;
        for (const auto& v : d.vertex_names())
            if (!obs.count(v)) latents.push_back(v);
        return latents;
    };
    std::vector<std::string> lat1 = split(d1);
    std::vector<std::string> lat2 = split(d2);
    if (lat1.size() != lat2.size()) return false;

    // Observed-to-observed edges must agree exactly.
    auto observed_edges = [&obs](const Dag& d) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& e : d.edges())
            if (obs.count(e.first) && obs.count(e.second)) out.push_back(e);
        return out;
    };
    if (observed_edges(d1) != observed_edges(d2)) return false;

    auto neighbours = [&](const Dag& d, const std::string& v) {
        std::set<std::string> ps, cs;
        int i = d.index_of(v);
        for (int p : bits_of(d.parents(i))) ps.insert(d.name(p));
        for (int c : bits_of(d.children(i))) cs.insert(d.name(c));
        return std::pair(ps, cs);
    };

    // Try every assignment of d1-latents to d2-latents; candidate lists are
    // tiny after reduction, and matching on (parents, children) signatures
    // prunes hard.  Latent-to-latent edges are re-checked under the map.
    std::vector<int> perm(lat2.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end());
    do {
        std::map<std::string, std::string> rename;
        for (size_t i = 0; i < lat1.size(); ++i) rename[lat1[i]] = lat2[perm[i]];
        bool ok = true;
        for (size_t i = 0; ok && i < lat1.size(); ++i) {
            auto [p1, c1] = neighbours(d1, lat1[i]);
            auto [p2, c2] = neighbours(d2, rename[lat1[i]]);
            auto mapped = [&](const std::set<std::string>& s) {
                std::set<std::string> out;
                for (const auto& v : s) out.insert(obs.count(v) ? v : rename[v]);
                return out;
            };
            ok = mapped(p1) == p2 && mapped(c1) == c2;
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace mdag
