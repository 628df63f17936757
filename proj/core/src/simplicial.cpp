#include "mdag/simplicial.hpp"

#include <algorithm>

#include "mdag/error.hpp"

namespace mdag {

namespace {

// Keep only inclusion-maximal masks, then sort canonically.  Singletons of
// vertices that appear in no larger set are added so that every ground vertex
// lies in some facet.
std::vector<Mask> maximalize(Mask ground, std::vector<Mask> sets) {
    std::vector<Mask> out;
    for (Mask s : sets) {
        bool dominated = false;
        for (Mask t : sets)
            if (s != t && is_subset(s, t)) { dominated = true; break; }
        if (s == 0 || dominated) continue;
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    Mask covered = 0;
    for (Mask s : out) covered |= s;
    for (int v : bits_of(ground & ~covered)) out.push_back(bit(v));
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

}  // namespace

SimplicialComplex SimplicialComplex::from_masks(std::vector<std::string> ground, std::vector<Mask> generators) {
    SimplicialComplex c;
    c.ground_ = std::move(ground);
    if (c.ground_.size() > kMaxVertices) throw_resource("ground sets are limited to 64 vertices");
    Mask full = c.ground_.empty() ? 0 : (c.ground_.size() == 64 ? ~Mask{0} : (Mask{1} << c.ground_.size()) - 1);
    for (Mask g : generators) {
        if (g == 0) throw_input("empty generator set");
        if (!is_subset(g, full)) throw_input("generator not contained in the ground set");
    }
    c.facets_ = maximalize(full, std::move(generators));
    return c;
}

SimplicialComplex SimplicialComplex::from_generators(std::vector<std::string> ground,
                                                     const std::vector<std::vector<std::string>>& generators) {
    std::sort(ground.begin(), ground.end());
    if (std::adjacent_find(ground.begin(), ground.end()) != ground.end())
        throw_input("duplicate vertex in ground set");
    SimplicialComplex probe;
    probe.ground_ = ground;
    std::vector<Mask> masks;
    masks.reserve(generators.size());
    for (const auto& g : generators) {
        if (g.empty()) throw_input("empty generator set");
        masks.push_back(probe.mask_of(g));
    }
    return from_masks(std::move(ground), std::move(masks));
}

std::vector<Mask> SimplicialComplex::nontrivial_facets() const {
    std::vector<Mask> out;
    for (Mask f : facets_)
        if (popcount(f) >= 2) out.push_back(f);
    return out;
}

std::vector<std::vector<std::string>> SimplicialComplex::facet_names() const {
    std::vector<std::vector<std::string>> out;
    for (Mask f : facets_) out.push_back(names_of(f));
    return out;
}

bool SimplicialComplex::contains(Mask b) const {
    if (b == 0) throw_input("the empty set is not a face");
    for (Mask f : facets_)
        if (is_subset(b, f)) return true;
    return false;
}

bool SimplicialComplex::contains(std::span<const std::string> b) const {
    return contains(mask_of(b));
}

SimplicialComplex SimplicialComplex::remove_vertices(Mask a) const {
    std::vector<Mask> gens;
    for (Mask f : facets_)
        if (Mask r = f & ~a) gens.push_back(r);
    return from_masks(ground_, std::move(gens));
}

SimplicialComplex SimplicialComplex::induced(Mask keep) const {
    // Reindex facet intersections to the restricted ground set.
    std::vector<int> kept = bits_of(keep);
    std::vector<std::string> ground;
    ground.reserve(kept.size());
    for (int i : kept) ground.push_back(ground_[i]);
    std::vector<Mask> gens;
    for (Mask f : facets_) {
        Mask r = 0;
        for (size_t j = 0; j < kept.size(); ++j)
            if (has_bit(f, kept[j])) r |= bit(static_cast<int>(j));
        if (r) gens.push_back(r);
    }
    return from_masks(std::move(ground), std::move(gens));
}

int SimplicialComplex::index_of(const std::string& name) const {
    auto it = std::lower_bound(ground_.begin(), ground_.end(), name);
    if (it == ground_.end() || *it != name) throw_input("unknown vertex '" + name + "'");
    return static_cast<int>(it - ground_.begin());
}

Mask SimplicialComplex::mask_of(std::span<const std::string> names) const {
    Mask m = 0;
    for (const auto& n : names) m |= bit(index_of(n));
    return m;
}

std::vector<std::string> SimplicialComplex::names_of(Mask m) const {
    std::vector<std::string> out;
    for (int i : bits_of(m)) out.push_back(ground_[i]);
    return out;
}

}  // namespace mdag
