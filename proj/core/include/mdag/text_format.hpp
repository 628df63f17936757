#ifndef MDAG_TEXT_FORMAT_HPP
#define MDAG_TEXT_FORMAT_HPP

#include <optional>
#include <string>
#include <vector>

#include "mdag/mdag_graph.hpp"

namespace mdag {

/// A graph as read from text, together with its optional observed/latent
/// annotation.  Parsing the serialized form of a document reproduces it,
/// so the serialized text is a canonical form.
struct GraphDocument {
    std::string text;       // canonical serialization
    MDag graph;
    std::optional<std::vector<std::string>> latent;  // sorted when present

    /// Observed vertices: everything not annotated latent.
    std::vector<std::string> observed() const;
};

/// Parses the mDAG text format:
///
///   vertices: a b c
///   edges: a->b b->c
///   faces: {b,c}
///   latent: c
///
/// Sections may appear at most once; `vertices:` is mandatory.  Blank lines
/// and `#` comments are ignored.  Diagnostics carry line numbers.  Vertex
/// names must not start with '@', which is reserved for generated latents.
GraphDocument parse_document(const std::string& text);
MDag parse_mdag(const std::string& text);

/// Canonical serialization: sorted vertices, lexicographically sorted edges,
/// canonically ordered non-trivial facets, then the latent annotation if any.
std::string serialize(const MDag& g, const std::optional<std::vector<std::string>>& latent = std::nullopt);

/// DOT export.  Directed edges are plain arrows; every non-trivial facet
/// becomes a point-shaped red auxiliary node with red arrows to its members.
/// Output is byte-identical across runs for equal graphs.
std::string to_dot(const MDag& g);

/// Splits "a,b,c" into names; "-" or "" denote the empty set.
std::vector<std::string> split_name_list(const std::string& text);

}  // namespace mdag

#endif  // MDAG_TEXT_FORMAT_HPP
