#include "mdag/markov.hpp"

#include <algorithm>
#include <sstream>

#include "mdag/error.hpp"
#include "mdag/projection.hpp"

namespace mdag {

void CiStatement::validate() const {
    if (a.empty() || b.empty()) throw_input("independence statement with empty side");
    auto overlap = [](const std::vector<std::string>& x, const std::vector<std::string>& y) {
        for (const auto& v : x)
            if (std::find(y.begin(), y.end(), v) != y.end()) return true;
        return false;
    };
    if (overlap(a, b) || overlap(a, c) || overlap(b, c))
        throw_input("independence statement sets overlap");
}

std::string CiStatement::to_string() const {
    auto join = [](const std::vector<std::string>& v) {
        std::string out;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) out += ',';
            out += v[i];
        }
        return out.empty() ? std::string("-") : out;
    };
    std::ostringstream out;
    out << join(a) << " _||_ " << join(b);
    if (!c.empty()) out << " | " << join(c);
    return out.str();
}

bool d_separated(const Dag& d, Mask a, Mask b, Mask c) {
    if ((a & b) | (a & c) | (b & c)) throw_input("d-separation query sets overlap");
    if (a == 0 || b == 0) throw_input("d-separation query with empty side");
    Mask anc_c = d.ancestors(c);

    // Reachability over (vertex, direction) states.  "up" means the vertex
    // was entered against an edge (towards parents), "down" along an edge.
    // From up at v not in c: continue to parents (up) and children (down).
    // From down at v: continue to children (down) if v not in c, and back up
    // to parents iff v is an ancestor of c (collider opened by conditioning).
    Mask up = a, down = 0;
    for (;;) {
        Mask new_up = up, new_down = down;
        for (int v : bits_of(up)) {
            if (has_bit(c, v)) continue;
            new_up |= d.parents(v);
            new_down |= d.children(v);
        }
        for (int v : bits_of(down)) {
            if (!has_bit(c, v)) new_down |= d.children(v);
            if (has_bit(anc_c, v)) new_up |= d.parents(v);
        }
        if (new_up == up && new_down == down) break;
        up = new_up;
        down = new_down;
    }
    return ((up | down) & b) == 0;
}

bool d_separated(const Dag& d, std::span<const std::string> a, std::span<const std::string> b,
                 std::span<const std::string> c) {
    return d_separated(d, d.mask_of(a), d.mask_of(b), d.mask_of(c));
}

std::vector<CiStatement> implied_ci(const MDag& g, int max_vertices) {
    if (g.size() > max_vertices)
        throw_resource("implied_ci enumerates all conditioning sets; graphs above " +
                       std::to_string(max_vertices) + " vertices are rejected");
    LabelledCanonicalDag canon = canonical_dag(g);
    const Dag& cd = canon.dag;
    const Dag& d = g.dag();

    std::vector<CiStatement> out;
    for (int x = 0; x < g.size(); ++x) {
        for (int y = x + 1; y < g.size(); ++y) {
            Mask rest = g.dag().full_mask() & ~bit(x) & ~bit(y);
            Mask cx = bit(cd.index_of(d.name(x)));
            Mask cy = bit(cd.index_of(d.name(y)));
            // Subsets of 'rest' in increasing mask order: deterministic.
            Mask sub = 0;
            for (;;) {
                Mask cc = 0;
                for (int v : bits_of(sub)) cc |= bit(cd.index_of(d.name(v)));
                if (d_separated(cd, cx, cy, cc))
                    out.push_back({{d.name(x)}, {d.name(y)}, d.names_of(sub)});
                if (sub == rest) break;
                sub = (sub - rest) & rest;  // next subset of rest
            }
        }
    }
    return out;
}

std::vector<Mask> district_masks(const MDag& g) {
    // Union-find over vertices joined by two-element faces.
    std::vector<int> root(g.size());
    for (int i = 0; i < g.size(); ++i) root[i] = i;
    auto find = [&](int v) {
        while (root[v] != v) v = root[v] = root[root[v]];
        return v;
    };
    for (Mask f : g.faces().facet_masks()) {
        std::vector<int> members = bits_of(f);
        for (size_t i = 1; i < members.size(); ++i) {
            int a = find(members[0]), b = find(members[i]);
            if (a != b) root[std::max(a, b)] = std::min(a, b);
        }
    }
    std::vector<Mask> blocks;
    for (int r = 0; r < g.size(); ++r) {
        if (find(r) != r) continue;
        Mask m = 0;
        for (int v = 0; v < g.size(); ++v)
            if (find(v) == r) m |= bit(v);
        blocks.push_back(m);
    }
    std::sort(blocks.begin(), blocks.end(), lex_less);
    return blocks;
}

VertexPartition districts(const MDag& g) {
    VertexPartition out;
    out.ground = g.vertex_names();
    for (Mask m : district_masks(g)) out.blocks.push_back(g.dag().names_of(m));
    out.validate();
    return out;
}

DistrictGraph district_subgraph(const MDag& g, std::span<const std::string> d) {
    Mask dm = g.dag().mask_of(d);
    std::vector<Mask> blocks = district_masks(g);
    if (std::find(blocks.begin(), blocks.end(), dm) == blocks.end())
        throw_input("the given set is not a district of the graph");

    Mask pa = g.dag().parents_of(dm) & ~dm;
    Mask keep = dm | pa;
    std::vector<std::string> names = g.dag().names_of(keep);

    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [p, c] : g.dag().edges())
        if (has_bit(dm, g.dag().index_of(c))) edges.emplace_back(p, c);
    std::vector<std::vector<std::string>> faces;
    for (Mask f : g.faces().facet_masks())
        if (is_subset(f, dm)) faces.push_back(g.dag().names_of(f));

    DistrictGraph out;
    out.graph = MDag(Dag(names, edges), SimplicialComplex::from_generators(names, faces));
    out.random_vertices = g.dag().names_of(dm);
    out.conditioning_vertices = g.dag().names_of(pa);
    return out;
}

}  // namespace mdag
