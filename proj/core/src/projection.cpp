#include "mdag/projection.hpp"

#include <algorithm>

#include "mdag/error.hpp"

namespace mdag {

namespace {

// Vertices reachable from `seed` by directed paths whose vertices after the
// start all stay inside `through` until the final vertex.  The final vertex
// may lie anywhere; expansion only continues from `through` members.
Mask reach_through(const Dag& d, Mask seed, Mask through) {
    Mask reached = d.children_of(seed);
    for (;;) {
        Mask next = reached | d.children_of(reached & through);
        if (next == reached) return reached;
        reached = next;
    }
}

// One shortest directed path from some bit of `sources` to `target`, with all
// interior vertices inside `through`.  Assumes such a path exists.
std::vector<int> path_through(const Dag& d, Mask sources, int target, Mask through) {
    std::vector<int> parent(d.size(), -1);
    std::vector<int> queue;
    Mask seen = sources;
    for (int s : bits_of(sources)) queue.push_back(s);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        if (v == target) {
            std::vector<int> path{v};
            while (parent[path.back()] != -1) path.push_back(parent[path.back()]);
            std::reverse(path.begin(), path.end());
            return path;
        }
        if (v != target && !has_bit(sources, v) && !has_bit(through, v)) continue;
        for (int c : bits_of(d.children(v) & ~seen)) {
            seen |= bit(c);
            parent[c] = v;
            queue.push_back(c);
        }
    }
    throw_consistency("reachability witness not found");
}

}  // namespace

std::string latent_name_for(const std::vector<std::string>& facet) {
    std::string name(1, kLatentPrefix);
    for (size_t i = 0; i < facet.size(); ++i) {
        if (i) name += ',';
        name += facet[i];
    }
    return name;
}

std::optional<HiddenCommonCause> hidden_common_cause(const MDag& g,
                                                     std::span<const std::string> w,
                                                     std::span<const std::string> u) {
    const Dag& d = g.dag();
    Mask wm = d.mask_of(w);
    Mask um = d.mask_of(u);
    if (wm & um) throw_input("target and dropped sets overlap");

    // For a facet F, the only face worth testing is F restricted to w|u:
    // any witnessing face is a subset of it and covers no more.
    struct Candidate { Mask face; Mask facet; };
    std::vector<Candidate> candidates;
    for (Mask f : g.faces().facet_masks()) {
        Mask b = f & (wm | um);
        if (b) candidates.push_back({b, f});
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return popcount(a.face) > popcount(b.face); });

    for (const auto& cand : candidates) {
        Mask b = cand.face;
        Mask reach = reach_through(d, b & um, um);
        Mask covered = (b & wm) | (reach & wm);
        if (!is_subset(wm, covered)) continue;

        // Trim the face to the members the paths actually start from; any
        // subset of a face is itself a face.
        HiddenCommonCause witness;
        Mask used = 0;
        for (int t : bits_of(wm)) {
            std::vector<int> path;
            if (has_bit(b, t)) {
                path = {t};
            } else {
                path = path_through(d, b & um, t, um);
            }
            used |= bit(path.front());
            std::vector<std::string> names;
            for (int v : path) names.push_back(d.name(v));
            witness.paths[d.name(t)] = std::move(names);
        }
        witness.face = d.names_of(used);
        return witness;
    }
    return std::nullopt;
}

MDag latent_project(const MDag& g, Mask v) {
    const Dag& d = g.dag();
    Mask dropped = d.full_mask() & ~v;

    // Directed reachability with interior inside the dropped set, computed
    // once per kept vertex.
    std::vector<std::pair<std::string, std::string>> edges;
    for (int a : bits_of(v)) {
        Mask reach = reach_through(d, bit(a), dropped);
        for (int b2 : bits_of(reach & v & ~bit(a))) edges.emplace_back(d.name(a), d.name(b2));
    }

    // The kept vertices covered by a facet F are F's kept members plus
    // everything reachable from F's dropped members through the dropped set.
    // Covers of facets are exactly the maximal projected faces.
    std::vector<std::vector<std::string>> face_gens;
    for (Mask f : g.faces().facet_masks()) {
        Mask cover = (f & v) | (reach_through(d, f & dropped, dropped) & v);
        if (cover) face_gens.push_back(d.names_of(cover));
    }

    std::vector<std::string> kept_names = d.names_of(v);
    Dag dag(kept_names, edges);
    SimplicialComplex faces = SimplicialComplex::from_generators(kept_names, face_gens);
    return MDag(std::move(dag), std::move(faces));
}

MDag latent_project(const MDag& g, std::span<const std::string> v) {
    return latent_project(g, g.dag().mask_of(v));
}

std::vector<std::string> LabelledCanonicalDag::observed() const {
    std::vector<std::string> out;
    for (const auto& n : dag.vertex_names())
        if (!facet_labels.count(n)) out.push_back(n);
    return out;
}

std::vector<std::string> LabelledCanonicalDag::latents() const {
    std::vector<std::string> out;
    for (const auto& [n, facet] : facet_labels) out.push_back(n);
    return out;
}

LabelledCanonicalDag canonical_dag(const MDag& g) {
    LabelledCanonicalDag out;
    std::vector<std::string> vertices = g.vertex_names();
    std::vector<std::pair<std::string, std::string>> edges = g.dag().edges();
    for (Mask f : g.faces().nontrivial_facets()) {
        std::vector<std::string> members = g.faces().names_of(f);
        std::string fresh = latent_name_for(members);
        vertices.push_back(fresh);
        for (const auto& m : members) edges.emplace_back(fresh, m);
        out.facet_labels[fresh] = std::move(members);
    }
    out.dag = Dag(std::move(vertices), edges);
    return out;
}

bool project_canonical_roundtrip(const MDag& g) {
    LabelledCanonicalDag canon = canonical_dag(g);
    MDag back = latent_project(canon.as_mdag(), g.vertex_names());
    return back == g;
}

}  // namespace mdag
