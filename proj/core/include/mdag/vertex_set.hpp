#ifndef MDAG_VERTEX_SET_HPP
#define MDAG_VERTEX_SET_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace mdag {

/// Vertex sets are bitmasks over a graph's dense vertex indices.  Indices are
/// assigned by sorting the vertex names, so a mask is only meaningful relative
/// to the graph that produced it.
using Mask = std::uint64_t;

inline constexpr int kMaxVertices = 64;

inline Mask bit(int i) { return Mask{1} << i; }
inline bool has_bit(Mask m, int i) { return (m >> i) & 1; }
inline int popcount(Mask m) { return __builtin_popcountll(m); }
inline int lowest_bit(Mask m) { return __builtin_ctzll(m); }
inline bool is_subset(Mask a, Mask b) { return (a & ~b) == 0; }

/// All indices set in `m`, in increasing order.
std::vector<int> bits_of(Mask m);

/// Lexicographic comparison of two masks viewed as sorted index sequences.
/// {0,3} < {1,2} because the member lists compare that way; a plain numeric
/// mask comparison would order them the other way around.
bool lex_less(Mask a, Mask b);

/// A named partition of a ground set into disjoint blocks.
struct VertexPartition {
    std::vector<std::string> ground;
    std::vector<std::vector<std::string>> blocks;

    /// Throws InvalidInput unless the blocks are disjoint and cover `ground`.
    void validate() const;
};

}  // namespace mdag

#endif  // MDAG_VERTEX_SET_HPP
