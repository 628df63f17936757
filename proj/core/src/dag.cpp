#include "mdag/dag.hpp"

#include <algorithm>
#include <set>

#include "mdag/error.hpp"

namespace mdag {

const char* to_string(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::InvalidInput: return "input";
        case ErrorCategory::Parse: return "parse";
        case ErrorCategory::Resource: return "resource";
        case ErrorCategory::Degenerate: return "degenerate";
        case ErrorCategory::Consistency: return "consistency";
    }
    return "unknown";
}

std::vector<int> bits_of(Mask m) {
    std::vector<int> out;
    while (m) {
        int i = lowest_bit(m);
        out.push_back(i);
        m &= m - 1;
    }
    return out;
}

bool lex_less(Mask a, Mask b) {
    // Compare as sorted index sequences.
    while (a && b) {
        int ia = lowest_bit(a);
        int ib = lowest_bit(b);
        if (ia != ib) return ia < ib;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

void VertexPartition::validate() const {
    std::set<std::string> ground_set(ground.begin(), ground.end());
    if (ground_set.size() != ground.size()) throw_input("partition ground set has duplicates");
    std::set<std::string> seen;
    for (const auto& block : blocks) {
        for (const auto& v : block) {
            if (!ground_set.count(v)) throw_input("partition block member '" + v + "' not in ground set");
            if (!seen.insert(v).second) throw_input("partition blocks overlap at '" + v + "'");
        }
    }
    if (seen.size() != ground_set.size()) throw_input("partition blocks do not cover the ground set");
}

Dag::Dag(std::vector<std::string> vertices,
         const std::vector<std::pair<std::string, std::string>>& edges)
    : names_(std::move(vertices)) {
    std::sort(names_.begin(), names_.end());
    if (std::adjacent_find(names_.begin(), names_.end()) != names_.end())
        throw_input("duplicate vertex name");
    for (const auto& n : names_)
        if (n.empty()) throw_input("empty vertex name");
    if (names_.size() > kMaxVertices)
        throw_resource("graphs are limited to 64 vertices");

    parents_.assign(names_.size(), 0);
    children_.assign(names_.size(), 0);
    for (const auto& [p, c] : edges) {
        int pi = index_of(p);
        int ci = index_of(c);
        if (pi == ci) throw_input("self-loop at vertex '" + p + "'");
        parents_[ci] |= bit(pi);
        children_[pi] |= bit(ci);
    }

    // Kahn peeling; anything left over lies on a directed cycle.
    std::vector<Mask> pending = parents_;
    Mask removed = 0;
    for (;;) {
        bool progress = false;
        for (int v = 0; v < size(); ++v) {
            if (!has_bit(removed, v) && pending[v] == 0) {
                removed |= bit(v);
                for (int w = 0; w < size(); ++w) pending[w] &= ~bit(v);
                progress = true;
            }
        }
        if (!progress) break;
    }
    if (removed != full_mask()) throw_input("directed cycle detected");
}

int Dag::index_of(const std::string& name) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name) throw_input("unknown vertex '" + name + "'");
    return static_cast<int>(it - names_.begin());
}

bool Dag::contains(const std::string& name) const {
    return std::binary_search(names_.begin(), names_.end(), name);
}

Mask Dag::mask_of(std::span<const std::string> names) const {
    Mask m = 0;
    for (const auto& n : names) m |= bit(index_of(n));
    return m;
}

std::vector<std::string> Dag::names_of(Mask m) const {
    std::vector<std::string> out;
    for (int i : bits_of(m)) out.push_back(names_[i]);
    return out;
}

Mask Dag::parents_of(Mask vs) const {
    Mask m = 0;
    for (int v : bits_of(vs)) m |= parents_[v];
    return m;
}

Mask Dag::children_of(Mask vs) const {
    Mask m = 0;
    for (int v : bits_of(vs)) m |= children_[v];
    return m;
}

int Dag::edge_count() const {
    int n = 0;
    for (Mask p : parents_) n += popcount(p);
    return n;
}

std::vector<std::pair<std::string, std::string>> Dag::edges() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (int p = 0; p < size(); ++p)
        for (int c : bits_of(children_[p])) out.emplace_back(names_[p], names_[c]);
    std::sort(out.begin(), out.end());
    return out;
}

Mask Dag::ancestors(Mask a) const {
    if (!is_subset(a, full_mask())) throw_input("vertex set outside graph");
    Mask acc = a;
    for (;;) {
        Mask next = acc | parents_of(acc);
        if (next == acc) return acc;
        acc = next;
    }
}

Mask Dag::descendants(Mask a) const {
    Mask acc = a;
    for (;;) {
        Mask next = acc | children_of(acc);
        if (next == acc) return acc;
        acc = next;
    }
}

Dag Dag::induced(Mask keep) const {
    std::vector<std::string> vs = names_of(keep);
    std::vector<std::pair<std::string, std::string>> es;
    for (int p : bits_of(keep))
        for (int c : bits_of(children_[p] & keep)) es.emplace_back(names_[p], names_[c]);
    return Dag(std::move(vs), es);
}

std::vector<int> Dag::topological_order() const {
    std::vector<int> order;
    Mask placed = 0;
    while (popcount(placed) < size()) {
        for (int v = 0; v < size(); ++v) {
            if (!has_bit(placed, v) && is_subset(parents_[v], placed)) {
                order.push_back(v);
                placed |= bit(v);
                break;
            }
        }
    }
    return order;
}

bool Dag::operator==(const Dag& other) const {
    return names_ == other.names_ && parents_ == other.parents_;
}

Dag make_dag(const std::vector<std::string>& names, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::pair<std::string, std::string>> named;
    named.reserve(edges.size());
    for (auto [p, c] : edges) named.emplace_back(names[p], names[c]);
    return Dag(names, named);
}

}  // namespace mdag
