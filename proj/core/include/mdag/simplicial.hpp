#ifndef MDAG_SIMPLICIAL_HPP
#define MDAG_SIMPLICIAL_HPP

#include <span>
#include <string>
#include <vector>

#include "mdag/vertex_set.hpp"

namespace mdag {

/// An abstract simplicial complex over a finite ground set: a downward-closed
/// family of non-empty vertex subsets containing every singleton.
///
/// Only the inclusion-maximal members (facets) are stored; membership of any
/// other face is answered by subset query.  Facets are kept sorted in
/// lexicographic member order, which makes serialization and hashing
/// canonical.  `facets()` reports exactly the inclusion-maximal sets: the
/// non-trivial facets plus a singleton for each vertex lying in no larger
/// face.
class SimplicialComplex {
  public:
    SimplicialComplex() = default;

    /// The smallest complex over `ground` containing all singletons and all
    /// `generators`.  Generators contained in other generators are discarded.
    /// Throws InvalidInput on an empty generator or an out-of-ground vertex.
    static SimplicialComplex from_generators(std::vector<std::string> ground,
                                             const std::vector<std::vector<std::string>>& generators);

    /// Mask-based variant; `ground` must be sorted and unique.
    static SimplicialComplex from_masks(std::vector<std::string> ground, std::vector<Mask> generators);

    const std::vector<std::string>& ground() const { return ground_; }
    int ground_size() const { return static_cast<int>(ground_.size()); }

    /// Facet masks in canonical order.
    const std::vector<Mask>& facet_masks() const { return facets_; }
    /// Facets of size >= 2, in canonical order.
    std::vector<Mask> nontrivial_facets() const;
    std::vector<std::vector<std::string>> facet_names() const;

    /// True iff `b` is a face, i.e. a subset of some facet.  Throws
    /// InvalidInput if `b` is empty.
    bool contains(Mask b) const;
    bool contains(std::span<const std::string> b) const;

    /// The complex over the same ground set generated by {F \ a} for every
    /// facet F, plus all singletons.
    SimplicialComplex remove_vertices(Mask a) const;

    /// Restriction to `keep`: faces entirely inside `keep`, reindexed to the
    /// sub-ground-set.
    SimplicialComplex induced(Mask keep) const;

    int index_of(const std::string& name) const;
    Mask mask_of(std::span<const std::string> names) const;
    std::vector<std::string> names_of(Mask m) const;

    bool operator==(const SimplicialComplex& other) const {
        return ground_ == other.ground_ && facets_ == other.facets_;
    }

  private:
    std::vector<std::string> ground_;  // sorted
    std::vector<Mask> facets_;         // maximal sets in lex member order
};

}  // namespace mdag

#endif  // MDAG_SIMPLICIAL_HPP
