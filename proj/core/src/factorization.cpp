#include "mdag/factorization.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "mdag/error.hpp"
#include "mdag/projection.hpp"
#include "mdag/text_format.hpp"

namespace mdag {

namespace {

// ---------------------------------------------------------------------------
// Node expansion shared by the tree builder and the constraint walker.
// ---------------------------------------------------------------------------

struct NodeView {
    MDag graph;
    std::vector<std::string> random;        // in global topological order
    std::vector<std::string> conditioning;  // sorted
};

std::string node_key(const NodeView& n) {
    std::string key = serialize(n.graph) + "|";
    for (const auto& v : n.random) key += v + ",";
    return key;
}

// Districts of the random part of a node, in canonical order.  Conditioning
// vertices never share faces, so they are exactly the blocks inside `random`.
std::vector<std::vector<std::string>> random_districts(const NodeView& n) {
    Mask rm = n.graph.dag().mask_of(n.random);
    std::vector<std::vector<std::string>> out;
    for (Mask b : district_masks(n.graph))
        if (is_subset(b, rm)) out.push_back(n.graph.dag().names_of(b));
    return out;
}

// Keeps `order` restricted to `subset` members.
std::vector<std::string> restrict_order(const std::vector<std::string>& order,
                                        const std::vector<std::string>& subset) {
    std::vector<std::string> out;
    for (const auto& v : order)
        if (std::find(subset.begin(), subset.end(), v) != subset.end()) out.push_back(v);
    return out;
}

NodeView district_child(const NodeView& n, const std::vector<std::string>& d) {
    DistrictGraph sub = district_subgraph(n.graph, d);
    NodeView child;
    child.graph = sub.graph;
    child.random = restrict_order(n.random, sub.random_vertices);
    child.conditioning = sub.conditioning_vertices;
    return child;
}

NodeView margin_child(const NodeView& n, const std::string& dropped) {
    NodeView child;
    std::vector<std::string> keep;
    for (const auto& v : n.graph.vertex_names())
        if (v != dropped) keep.push_back(v);
    child.graph = n.graph.induced(keep);
    child.random = n.random;
    child.random.erase(std::find(child.random.begin(), child.random.end(), dropped));
    child.conditioning = n.conditioning;
    return child;
}

// Childless random vertices, in name order.
std::vector<std::string> droppable(const NodeView& n) {
    std::vector<std::string> out;
    for (const auto& v : n.random)
        if (n.graph.dag().children(n.graph.dag().index_of(v)) == 0) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

// True when decomposing `n` into districts makes progress: several blocks, or
// a single block whose graph drops a conditioning vertex.
bool district_progress(const NodeView& n, const std::vector<std::vector<std::string>>& blocks) {
    if (blocks.size() != 1) return blocks.size() > 1;
    DistrictGraph sub = district_subgraph(n.graph, blocks[0]);
    return sub.graph.size() < n.graph.size();
}

// ---------------------------------------------------------------------------
// Symbolic support tracking.
//
// Kernels are represented as products of factors, each with a variable scope
// and, when the factor is a conditional normalized in one variable, that
// target variable.  Summing a variable out either deletes a lone normalized
// factor (its sum is one) or merges every factor containing the variable.
// The union of scopes bounds what the kernel can depend on.
// ---------------------------------------------------------------------------

struct SymFactor {
    Mask scope = 0;  // over the root graph's dense indices
    int target = -1; // normalized in this variable, or -1
};

using SymFactors = std::vector<SymFactor>;

Mask sym_support(const SymFactors& fs) {
    Mask m = 0;
    for (const auto& f : fs) m |= f.scope;
    return m;
}

// Sums the variables of `elim` out of the product, processing them in
// reverse global topological position so chain conditionals telescope.
SymFactors sym_eliminate(SymFactors fs, Mask elim, const std::vector<int>& topo_pos) {
    std::vector<int> vars = bits_of(elim);
    std::sort(vars.begin(), vars.end(), [&](int a, int b) { return topo_pos[a] > topo_pos[b]; });
    for (int v : vars) {
        SymFactors next;
        SymFactor merged;
        int hits = 0;
        bool lone_normalized = true;
        for (const auto& f : fs) {
            if (!has_bit(f.scope, v)) {
                next.push_back(f);
                continue;
            }
            ++hits;
            if (f.target != v) lone_normalized = false;
            merged.scope |= f.scope;
        }
        if (hits == 0) continue;
        if (!(hits == 1 && lone_normalized)) {
            merged.scope &= ~bit(v);
            merged.target = -1;
            if (merged.scope) next.push_back(merged);
        }
        fs = std::move(next);
    }
    return fs;
}

// Factors of the kernel produced by a district-factor step: one conditional
// per district member, each normalized in its member.
SymFactors sym_district(const SymFactors& fs, const std::vector<int>& random_order,
                        Mask district, const std::vector<int>& topo_pos) {
    SymFactors out;
    Mask random_mask = 0;
    for (int v : random_order) random_mask |= bit(v);
    for (size_t i = 0; i < random_order.size(); ++i) {
        int v = random_order[i];
        if (!has_bit(district, v)) continue;
        Mask pre = 0;
        for (size_t j = 0; j < i; ++j) pre |= bit(random_order[j]);
        SymFactors numer = sym_eliminate(fs, random_mask & ~pre & ~bit(v), topo_pos);
        SymFactor f;
        f.scope = sym_support(numer);
        f.target = v;
        out.push_back(f);
    }
    return out;
}

// ---------------------------------------------------------------------------

struct Walker {
    const MDag* root_graph = nullptr;
    Dag canon;                          // canonical DAG of the root graph
    std::vector<int> topo_pos;          // root index -> topological position
    std::set<std::string> visited;
    std::vector<ConstraintDescriptor> out;
    std::set<std::string> emitted_ci;   // dedup by printed CI form

    int root_index(const std::string& name) const { return root_graph->dag().index_of(name); }

    std::vector<int> root_indices(const std::vector<std::string>& names) const {
        std::vector<int> out_ix;
        for (const auto& n : names) out_ix.push_back(root_index(n));
        return out_ix;
    }

    void walk(const NodeView& n, const SymFactors& fs, const std::vector<KernelOp>& steps, bool is_root) {
        if (!visited.insert(node_key(n)).second) return;

        std::vector<std::vector<std::string>> blocks = random_districts(n);
        if (district_progress(n, blocks)) {
            for (const auto& d : blocks) {
                NodeView child = district_child(n, d);
                SymFactors child_fs =
                    sym_district(fs, root_indices(n.random), root_graph->dag().mask_of(d), topo_pos);

                KernelOp op;
                op.kind = KernelOp::Kind::DistrictFactor;
                op.district = restrict_order(n.random, d);
                op.random_order = n.random;
                op.conditioning = n.conditioning;
                std::vector<KernelOp> child_steps = steps;
                child_steps.push_back(op);

                if (!is_root) maybe_emit(n, d, child, child_fs, child_steps);
                walk(child, child_fs, child_steps, false);
            }
        }
        if (n.random.size() > 1) {
            for (const auto& v : droppable(n)) {
                NodeView child = margin_child(n, v);
                SymFactors child_fs = sym_eliminate(fs, bit(root_index(v)), topo_pos);
                KernelOp op;
                op.kind = KernelOp::Kind::Marginalize;
                op.summed = {v};
                std::vector<KernelOp> child_steps = steps;
                child_steps.push_back(op);
                walk(child, child_fs, child_steps, false);
            }
        }
    }

    void maybe_emit(const NodeView& parent, const std::vector<std::string>& d, const NodeView& child,
                    const SymFactors& child_fs, const std::vector<KernelOp>& steps) {
        // Everything the parent kernel ranged over, minus what the child
        // graph retains, is claimed to drop out of the district factor.
        std::set<std::string> kept(child.graph.vertex_names().begin(), child.graph.vertex_names().end());
        Mask support = sym_support(child_fs);
        Mask dm = root_graph->dag().mask_of(d);

        Mask invariant = 0;
        for (const auto& v : parent.graph.vertex_names())
            if (!kept.count(v)) invariant |= bit(root_index(v));
        invariant &= support;
        if (!invariant) return;

        Mask given = support & ~invariant & ~dm;
        CiStatement ci{root_graph->dag().names_of(dm), root_graph->dag().names_of(invariant),
                       root_graph->dag().names_of(given)};
        if (!emitted_ci.insert(ci.to_string()).second) return;

        // A claim that already follows from d-separation is an ordinary
        // conditional independence, not a Verma-style constraint.
        Mask ca = 0, cb = 0, cg = 0;
        for (const auto& v : ci.a) ca |= bit(canon.index_of(v));
        for (const auto& v : ci.b) cb |= bit(canon.index_of(v));
        for (const auto& v : ci.c) cg |= bit(canon.index_of(v));
        if (d_separated(canon, ca, cb, cg)) return;

        ConstraintDescriptor desc;
        desc.steps = steps;
        desc.margin_vertices = ci.a;
        desc.invariant_to = ci.b;
        desc.support = root_graph->dag().names_of(support);
        desc.ci_form = ci;
        out.push_back(std::move(desc));
    }
};

NodeView root_view(const MDag& g) {
    NodeView root;
    root.graph = g;
    for (int v : g.dag().topological_order()) root.random.push_back(g.dag().name(v));
    return root;
}

SymFactors root_factors(const MDag& g) {
    // Chain-rule decomposition of the joint along the topological order.
    SymFactors fs;
    Mask seen = 0;
    for (int v : g.dag().topological_order()) {
        fs.push_back({seen | bit(v), v});
        seen |= bit(v);
    }
    return fs;
}

}  // namespace

std::shared_ptr<const FactorizationNode> nested_factorize(const MDag& g, int max_vertices) {
    if (g.size() > max_vertices)
        throw_resource("nested factorization is limited to " + std::to_string(max_vertices) + " vertices");

    std::map<std::string, std::shared_ptr<const FactorizationNode>> memo;

    auto build = [&](auto&& self, const NodeView& n) -> std::shared_ptr<const FactorizationNode> {
        std::string key = node_key(n);
        if (auto it = memo.find(key); it != memo.end()) return it->second;

        auto node = std::make_shared<FactorizationNode>();
        node->graph = n.graph;
        node->random_vertices = n.random;
        std::sort(node->random_vertices.begin(), node->random_vertices.end());
        node->conditioning_vertices = n.conditioning;
        memo[key] = node;

        std::vector<std::vector<std::string>> blocks = random_districts(n);
        if (district_progress(n, blocks))
            for (const auto& d : blocks) node->children.push_back(self(self, district_child(n, d)));
        if (n.random.size() > 1)
            for (const auto& v : droppable(n))
                node->margins.emplace_back(v, self(self, margin_child(n, v)));
        return node;
    };

    return build(build, root_view(g));
}

namespace {

void format_node(const FactorizationNode& node, int depth, std::set<const FactorizationNode*>& seen,
                 std::ostringstream& out) {
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) s += ',';
            s += v[i];
        }
        return s.empty() ? std::string("-") : s;
    };
    out << std::string(2 * depth, ' ') << "q[" << join(node.random_vertices) << "]";
    if (!node.conditioning_vertices.empty()) out << " | " << join(node.conditioning_vertices);
    if (!seen.insert(&node).second) {
        out << " (shared)\n";
        return;
    }
    out << "\n";
    for (const auto& child : node.children) format_node(*child, depth + 1, seen, out);
    for (const auto& [v, child] : node.margins) {
        out << std::string(2 * depth + 2, ' ') << "margin -" << v << ":\n";
        format_node(*child, depth + 2, seen, out);
    }
}

}  // namespace

std::string format_factorization(const FactorizationNode& root) {
    std::ostringstream out;
    std::set<const FactorizationNode*> seen;
    format_node(root, 0, seen, out);
    return out.str();
}

std::string KernelOp::to_string() const {
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) s += ',';
            s += v[i];
        }
        return s;
    };
    if (kind == Kind::Marginalize) return "sum{" + join(summed) + "}";
    std::string s = "factor{" + join(district) + " ; order " + join(random_order);
    if (!conditioning.empty()) s += " | " + join(conditioning);
    return s + "}";
}

std::string ConstraintDescriptor::to_string() const {
    std::ostringstream out;
    for (size_t i = 0; i < steps.size(); ++i) {
        if (i) out << " . ";
        out << steps[i].to_string();
    }
    out << " => " << ci_form.to_string();
    return out.str();
}

std::vector<ConstraintDescriptor> verma_constraints(const MDag& g, int max_vertices) {
    if (g.size() > max_vertices)
        throw_resource("constraint search is limited to " + std::to_string(max_vertices) + " vertices");
    Walker w;
    w.root_graph = &g;
    w.canon = canonical_dag(g).dag;
    w.topo_pos.assign(g.size(), 0);
    std::vector<int> order = g.dag().topological_order();
    for (size_t i = 0; i < order.size(); ++i) w.topo_pos[order[i]] = static_cast<int>(i);
    w.walk(root_view(g), root_factors(g), {}, true);
    return std::move(w.out);
}

}  // namespace mdag
