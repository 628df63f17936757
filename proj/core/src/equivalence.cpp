#include "mdag/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <thread>

#include "mdag/enumeration.hpp"
#include "mdag/error.hpp"
#include "mdag/markov.hpp"
#include "mdag/text_format.hpp"

namespace mdag {

Skeleton skeleton(const MDag& g) {
    std::set<std::pair<std::string, std::string>> edges;
    auto add = [&](const std::string& a, const std::string& b) {
        edges.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
    };
    for (const auto& [p, c] : g.dag().edges()) add(p, c);
    for (Mask f : g.faces().facet_masks()) {
        std::vector<int> members = bits_of(f);
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j)
                add(g.dag().name(members[i]), g.dag().name(members[j]));
    }
    Skeleton out;
    out.vertices = g.vertex_names();
    out.edges.assign(edges.begin(), edges.end());
    return out;
}

std::optional<std::string> facet_split_obstruction(const MDag& g, Mask b, Mask c) {
    const auto& facets = g.faces().facet_masks();
    if (std::find(facets.begin(), facets.end(), b) == facets.end())
        return "the split set is not a facet";
    if (c == 0 || !is_subset(c, b) || c == b)
        return "the split part must be a proper non-empty subset of the facet";
    Mask d = b & ~c;
    for (Mask f : facets)
        if ((f & c) && !is_subset(f, b))
            return "condition (i) fails: a face meets the split part but leaves the facet";
    Mask pa_c = g.dag().parents_of(c);
    for (int dv : bits_of(d))
        if (!is_subset(pa_c, g.dag().parents(dv)))
            return "condition (ii) fails: a remainder vertex misses a parent of the split part";
    return std::nullopt;
}

MDag facet_split(const MDag& g, std::span<const std::string> b, std::span<const std::string> c) {
    Mask bm = g.dag().mask_of(b);
    Mask cm = g.dag().mask_of(c);
    if (auto obstruction = facet_split_obstruction(g, bm, cm)) throw_input(*obstruction);
    Mask dm = bm & ~cm;

    std::vector<std::vector<std::string>> gens;
    for (Mask f : g.faces().facet_masks())
        if (f != bm) gens.push_back(g.dag().names_of(f));
    gens.push_back(g.dag().names_of(cm));
    gens.push_back(g.dag().names_of(dm));

    std::vector<std::pair<std::string, std::string>> edges = g.dag().edges();
    for (int cv : bits_of(cm))
        for (int dv : bits_of(dm))
            if (!g.dag().has_edge(cv, dv)) edges.emplace_back(g.dag().name(cv), g.dag().name(dv));

    // Construction asserts acyclicity; conditions (i)-(ii) rule out cycles.
    Dag dag(g.vertex_names(), edges);
    return MDag(std::move(dag), SimplicialComplex::from_generators(g.vertex_names(), gens));
}

namespace {

// For position j given the carriers of earlier positions: v_j must be able to
// reconstruct every earlier value.  Position k is readable when v_k is a
// parent of v_j, or when v_k's noise lives in a face containing v_j and
// everything v_k itself consumed is already readable.
bool position_closes(const Dag& d, const std::vector<int>& order,
                     const std::vector<Mask>& carrier_face, int j) {
    std::vector<bool> know(j, false);
    for (bool changed = true; changed;) {
        changed = false;
        for (int k = 0; k < j; ++k) {
            if (know[k]) continue;
            bool readable = d.has_edge(order[k], order[j]);
            if (!readable && has_bit(carrier_face[k], order[j])) {
                readable = true;
                for (int k2 = 0; k2 < k; ++k2) readable = readable && know[k2];
            }
            if (readable) {
                know[k] = true;
                changed = true;
            }
        }
    }
    for (int k = 0; k < j; ++k)
        if (!know[k]) return false;
    return true;
}

}  // namespace

std::optional<SaturationWitness> saturating_order(const MDag& g) {
    const Dag& d = g.dag();
    int n = d.size();
    if (n > 7) return std::nullopt;  // exhaustive search only at tool scale
    if (n <= 1) {
        SaturationWitness w;
        for (const auto& v : d.vertex_names()) w.order.push_back(v);
        return w;
    }

    // Every pair must share an edge or a face for one to reconstruct the
    // other, so an incomplete skeleton can never carry a witness.
    Skeleton sk = skeleton(g);
    if (static_cast<int>(sk.edges.size()) != n * (n - 1) / 2) return std::nullopt;

    // Candidate carriers per vertex: its faces of size >= 2, or none.
    std::vector<std::vector<Mask>> options(n);
    for (int v = 0; v < n; ++v) {
        options[v].push_back(0);  // private noise
        for (Mask f : g.faces().nontrivial_facets())
            if (has_bit(f, v)) options[v].push_back(f);
    }

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end());
    do {
        bool compatible = true;
        for (int i = 0; compatible && i < n; ++i)
            for (int j = i + 1; compatible && j < n; ++j)
                if (d.has_edge(order[j], order[i])) compatible = false;
        if (!compatible) continue;

        // Assign carriers position by position; position j's closure only
        // depends on earlier carriers, so failures prune whole subtrees.
        std::vector<Mask> carriers(n, 0);
        auto dfs = [&](auto&& self, int pos) -> bool {
            if (pos > 0 && !position_closes(d, order, carriers, pos - 1)) return false;
            if (pos == n) return true;
            for (Mask option : options[order[pos]]) {
                carriers[pos] = option;
                if (self(self, pos + 1)) return true;
            }
            return false;
        };
        if (dfs(dfs, 0)) {
            SaturationWitness w;
            for (int i = 0; i < n; ++i) {
                w.order.push_back(d.name(order[i]));
                if (carriers[i]) w.carrier[d.name(order[i])] = d.names_of(carriers[i]);
            }
            return w;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return std::nullopt;
}

const char* to_string(SeparationCertificate::Kind k) {
    switch (k) {
        case SeparationCertificate::Kind::Skeleton: return "skeleton";
        case SeparationCertificate::Kind::Bidirected: return "bidirected";
        case SeparationCertificate::Kind::CiSet: return "ci-set";
        case SeparationCertificate::Kind::DagMarkov: return "dag-markov";
        case SeparationCertificate::Kind::Catalog: return "catalog";
        case SeparationCertificate::Kind::Undecided: return "undecided";
    }
    return "unknown";
}

int EquivalenceReport::undecided_pairs() const {
    int n = 0;
    for (const auto& [pair, cert] : separations)
        if (cert.kind == SeparationCertificate::Kind::Undecided) ++n;
    return n;
}

namespace {

std::string graph_key(const MDag& g, bool up_to_iso) {
    return up_to_iso ? canonical_iso_form(g).key : serialize(g);
}

MDag graph_rep(const MDag& g, bool up_to_iso) {
    return up_to_iso ? canonical_iso_form(g).graph : g;
}

std::string join_names(const std::vector<std::string>& names) {
    std::string out = "{";
    for (size_t i = 0; i < names.size(); ++i) {
        if (i) out += ',';
        out += names[i];
    }
    return out + "}";
}

// Skeleton + unshielded colliders, minimized over vertex permutations when
// comparing up to isomorphism.  Two DAGs are Markov equivalent iff these
// agree.
std::string dag_markov_signature(const MDag& g, bool up_to_iso) {
    auto signature_of = [](const MDag& h) {
        Skeleton sk = skeleton(h);
        std::set<std::string> immoralities;
        const Dag& d = h.dag();
        for (int v = 0; v < d.size(); ++v) {
            std::vector<int> ps = bits_of(d.parents(v));
            for (std::size_t i = 0; i < ps.size(); ++i)
                for (std::size_t j = i + 1; j < ps.size(); ++j) {
                    bool adjacent = d.has_edge(ps[i], ps[j]) || d.has_edge(ps[j], ps[i]);
                    if (!adjacent)
                        immoralities.insert(d.name(ps[i]) + ">" + d.name(v) + "<" + d.name(ps[j]));
                }
        }
        std::ostringstream out;
        for (const auto& [a, b] : sk.edges) out << a << "-" << b << ";";
        out << "|";
        for (const auto& im : immoralities) out << im << ";";
        return out.str();
    };
    if (!up_to_iso) return signature_of(g);
    // Minimize over relabelings via the canonical machinery: signatures of
    // isomorphic graphs must compare equal.
    std::string best;
    std::vector<std::string> names = g.vertex_names();
    std::sort(names.begin(), names.end());
    std::vector<int> perm(names.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    do {
        std::vector<std::pair<std::string, std::string>> edges;
        for (const auto& [p, c] : g.dag().edges())
            edges.emplace_back(names[perm[g.dag().index_of(p)]], names[perm[g.dag().index_of(c)]]);
        std::vector<std::vector<std::string>> faces;
        for (const auto& facet : g.faces().facet_names()) {
            std::vector<std::string> mapped;
            for (const auto& v : facet) mapped.push_back(names[perm[g.dag().index_of(v)]]);
            faces.push_back(std::move(mapped));
        }
        MDag relabeled(Dag(names, edges), SimplicialComplex::from_generators(names, faces));
        std::string sig = signature_of(relabeled);
        if (best.empty() || sig < best) best = sig;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Sorted printed CI statements, minimized over permutations when comparing
// up to isomorphism.  CI sets transform covariantly under relabeling, so the
// set is computed once and relabeled directly.
std::string ci_fingerprint(const MDag& g, bool up_to_iso) {
    std::vector<CiStatement> cis = implied_ci(g);
    auto render = [](std::vector<std::string> lines) {
        std::sort(lines.begin(), lines.end());
        std::string out;
        for (const auto& l : lines) out += l + "\n";
        return out;
    };
    if (!up_to_iso) {
        std::vector<std::string> lines;
        for (const auto& s : cis) lines.push_back(s.to_string());
        return render(lines);
    }
    std::vector<std::string> names = g.vertex_names();
    std::sort(names.begin(), names.end());
    std::vector<int> perm(names.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::string best;
    do {
        std::vector<std::string> lines;
        for (const auto& s : cis) {
            auto map_set = [&](const std::vector<std::string>& vs) {
                std::vector<std::string> out;
                for (const auto& v : vs) out.push_back(names[perm[g.dag().index_of(v)]]);
                std::sort(out.begin(), out.end());
                return out;
            };
            CiStatement mapped{map_set(s.a), map_set(s.b), map_set(s.c)};
            if (mapped.b < mapped.a) std::swap(mapped.a, mapped.b);
            lines.push_back(mapped.to_string());
        }
        std::string fp = render(lines);
        if (best.empty() || fp < best) best = fp;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::string skeleton_fingerprint(const MDag& g, bool up_to_iso) {
    auto render = [](const Skeleton& sk) {
        std::string out;
        for (const auto& [a, b] : sk.edges) out += a + "-" + b + ";";
        return out;
    };
    if (!up_to_iso) return render(skeleton(g));
    std::vector<std::string> names = g.vertex_names();
    std::sort(names.begin(), names.end());
    std::vector<int> perm(names.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::string best;
    Skeleton sk = skeleton(g);
    do {
        std::set<std::pair<std::string, std::string>> edges;
        for (const auto& [a, b] : sk.edges) {
            std::string ma = names[perm[g.dag().index_of(a)]];
            std::string mb = names[perm[g.dag().index_of(b)]];
            edges.insert(ma < mb ? std::make_pair(ma, mb) : std::make_pair(mb, ma));
        }
        std::string fp;
        for (const auto& [a, b] : edges) fp += a + "-" + b + ";";
        if (best.empty() || fp < best) best = fp;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// The two path-skeleton graphs with empty independence sets that the
// published three-vertex catalog lists as distinct models: the instrumental
// graph and the doubly-confounded fork.  No constructive certificate
// implemented here separates them.
std::pair<std::string, std::string> catalog_pair_keys() {
    std::vector<std::string> names{"0", "1", "2"};
    MDag iv(Dag(names, {{"0", "1"}, {"1", "2"}}),
            SimplicialComplex::from_generators(names, {{"1", "2"}}));
    MDag fork(Dag(names, {{"1", "0"}, {"1", "2"}}),
              SimplicialComplex::from_generators(names, {{"0", "1"}, {"1", "2"}}));
    return {canonical_iso_form(iv).key, canonical_iso_form(fork).key};
}

struct Universe {
    struct Node {
        MDag graph;
        std::string key;
        int input_index = -1;
    };
    std::vector<Node> nodes;
    std::map<std::string, int> id_of;
    // Union-find with recorded merge edges forming a spanning forest.
    std::vector<int> parent;
    std::vector<std::vector<std::pair<int, std::string>>> forest;  // id -> (id, move)

    int find(int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    }
    void unite(int a, int b, const std::string& move) {
        if (find(a) == find(b)) return;
        parent[find(a)] = find(b);
        forest[a].emplace_back(b, move);
        forest[b].emplace_back(a, "(reversed) " + move);
    }
    int add(const MDag& g, const std::string& key) {
        auto it = id_of.find(key);
        if (it != id_of.end()) return it->second;
        int id = static_cast<int>(nodes.size());
        nodes.push_back({g, key, -1});
        id_of[key] = id;
        parent.push_back(id);
        forest.emplace_back();
        return id;
    }
    std::string chain(int a, int b) const {
        // BFS through the spanning forest.
        std::deque<int> queue{a};
        std::map<int, std::pair<int, std::string>> back;
        back[a] = {a, ""};
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            if (v == b) break;
            for (const auto& [w, move] : forest[v]) {
                if (!back.count(w)) {
                    back[w] = {v, move};
                    queue.push_back(w);
                }
            }
        }
        if (!back.count(b)) return "(no recorded chain)";
        std::vector<std::string> moves;
        for (int v = b; v != a; v = back[v].first) moves.push_back(back[v].second);
        std::reverse(moves.begin(), moves.end());
        std::string out;
        for (std::size_t i = 0; i < moves.size(); ++i) {
            if (i) out += " ; ";
            out += moves[i];
        }
        return out.empty() ? "identical" : out;
    }
};

}  // namespace

namespace {

// Deterministic parallel map: results land in index order no matter how the
// chunks are scheduled.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    for (int t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
            for (std::size_t i = static_cast<std::size_t>(t); i < count;
                 i += static_cast<std::size_t>(threads))
                fn(i);
        });
    }
    for (auto& w : workers) w.join();
}

}  // namespace

EquivalenceReport equivalence_classes(const std::vector<MDag>& graphs, bool up_to_iso, int threads) {
    if (graphs.empty()) return {};
    int n = graphs[0].size();
    for (const auto& g : graphs)
        if (g.size() != n) throw_input("all graphs must share one vertex count");

    Universe u;
    std::vector<int> input_id(graphs.size());
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        MDag rep = graph_rep(graphs[i], up_to_iso);
        int id = u.add(rep, graph_key(graphs[i], up_to_iso));
        input_id[i] = id;
        if (u.nodes[id].input_index < 0) u.nodes[id].input_index = static_cast<int>(i);
    }

    // Closure under facet splits: explore every legal application, landing
    // graphs join the universe.  Splits strictly shrink the facet weight, so
    // exploration terminates.
    for (std::size_t next = 0; next < u.nodes.size(); ++next) {
        MDag g = u.nodes[next].graph;
        std::vector<Mask> facets = g.faces().nontrivial_facets();
        for (Mask b : facets) {
            Mask sub = (b - 1) & b;
            for (Mask c = sub; c; c = (c - 1) & b) {
                if (c == b) continue;
                if (facet_split_obstruction(g, b, c)) continue;
                MDag result = facet_split(g, g.dag().names_of(b), g.dag().names_of(c));
                std::string key = graph_key(result, up_to_iso);
                int id = u.add(graph_rep(result, up_to_iso), key);
                std::string move = "split facet " + join_names(g.dag().names_of(b)) + " at " +
                                   join_names(g.dag().names_of(c));
                u.unite(static_cast<int>(next), id, move);
            }
        }
    }

    // DAG Markov equivalence joins plain DAGs with equal skeleton and
    // immoralities.
    {
        std::map<std::string, int> by_signature;
        for (std::size_t id = 0; id < u.nodes.size(); ++id) {
            if (!u.nodes[id].graph.is_plain_dag()) continue;
            std::string sig = dag_markov_signature(u.nodes[id].graph, up_to_iso);
            auto [it, fresh] = by_signature.emplace(sig, static_cast<int>(id));
            if (!fresh) u.unite(static_cast<int>(id), it->second, "same DAG skeleton and immoralities");
        }
    }

    // Graphs with a saturation witness all induce the full model, so they
    // form one class regardless of their shape.  The witness searches are
    // independent per graph and run on the worker threads; the union-find is
    // updated by this thread alone.
    {
        std::vector<char> saturated(u.nodes.size(), 0);
        parallel_for(u.nodes.size(), threads, [&](std::size_t id) {
            saturated[id] =
                u.nodes[id].graph.size() >= 2 && saturating_order(u.nodes[id].graph) ? 1 : 0;
        });
        int first_saturated = -1;
        for (std::size_t id = 0; id < u.nodes.size(); ++id) {
            if (!saturated[id]) continue;
            if (first_saturated < 0)
                first_saturated = static_cast<int>(id);
            else
                u.unite(static_cast<int>(id), first_saturated,
                        "both carry a saturation witness (reconstruction ordering)");
        }
    }

    // Input classes from the union-find.
    EquivalenceReport report;
    {
        std::map<int, std::vector<int>> classes;
        for (std::size_t i = 0; i < graphs.size(); ++i) classes[u.find(input_id[i])].push_back(static_cast<int>(i));
        for (auto& [root, members] : classes) {
            std::sort(members.begin(), members.end());
            report.classes.push_back(members);
        }
        std::sort(report.classes.begin(), report.classes.end());
    }

    // Merge certificates for same-class pairs.
    for (const auto& cls : report.classes)
        for (std::size_t i = 0; i < cls.size(); ++i)
            for (std::size_t j = i + 1; j < cls.size(); ++j)
                report.merge_certificates[{cls[i], cls[j]}] = u.chain(input_id[cls[i]], input_id[cls[j]]);

    // Per-class invariants.  All members of a class must share the skeleton
    // and independence fingerprints; a violation means a merge was wrong.
    struct ClassInfo {
        std::string skeleton_fp;
        std::string ci_fp;
        std::vector<int> pure_bidirected_members;  // universe ids
        std::vector<int> dag_members;
        std::vector<std::string> member_keys;
    };
    std::vector<ClassInfo> info(report.classes.size());
    std::map<int, int> class_of_root;
    for (std::size_t kc = 0; kc < report.classes.size(); ++kc)
        class_of_root[u.find(input_id[report.classes[kc][0]])] = static_cast<int>(kc);

    // Per-node fingerprints are independent and by far the heaviest part of
    // the run; compute them on the worker threads, indexed by node.
    std::vector<std::string> node_sk(u.nodes.size()), node_ci(u.nodes.size()),
        node_canon(u.nodes.size());
    parallel_for(u.nodes.size(), threads, [&](std::size_t id) {
        const MDag& g = u.nodes[id].graph;
        node_sk[id] = skeleton_fingerprint(g, up_to_iso);
        node_ci[id] = ci_fingerprint(g, up_to_iso);
        node_canon[id] = up_to_iso ? u.nodes[id].key : canonical_iso_form(g).key;
    });

    for (std::size_t id = 0; id < u.nodes.size(); ++id) {
        auto it = class_of_root.find(u.find(static_cast<int>(id)));
        if (it == class_of_root.end()) continue;  // reachable graph with no input member
        ClassInfo& ci = info[it->second];
        const MDag& g = u.nodes[id].graph;
        if (ci.member_keys.empty()) {
            ci.skeleton_fp = node_sk[id];
            ci.ci_fp = node_ci[id];
        } else if (ci.skeleton_fp != node_sk[id] || ci.ci_fp != node_ci[id]) {
            throw_consistency("a merged class mixes skeletons or independence sets");
        }
        // Canonical keys so the catalog lookup works in labelled mode too.
        ci.member_keys.push_back(node_canon[id]);
        if (!g.has_directed_edges()) ci.pure_bidirected_members.push_back(static_cast<int>(id));
        if (g.is_plain_dag()) ci.dag_members.push_back(static_cast<int>(id));
    }

    // Separation certificates per class pair, strongest first; the result is
    // recorded for every cross-class input pair.
    auto catalog = catalog_pair_keys();
    auto separate = [&](const ClassInfo& a, const ClassInfo& b) {
        SeparationCertificate cert;
        for (int ida : a.pure_bidirected_members) {
            for (int idb : b.pure_bidirected_members) {
                if (u.nodes[ida].key != u.nodes[idb].key) {
                    cert.kind = SeparationCertificate::Kind::Bidirected;
                    cert.discrete_only = false;
                    cert.detail = "purely bidirected members differ";
                    return cert;
                }
            }
        }
        if (a.skeleton_fp != b.skeleton_fp) {
            cert.kind = SeparationCertificate::Kind::Skeleton;
            cert.discrete_only = true;
            cert.detail = "skeletons differ";
            return cert;
        }
        if (!a.dag_members.empty() && !b.dag_members.empty()) {
            std::string sa = dag_markov_signature(u.nodes[a.dag_members[0]].graph, up_to_iso);
            std::string sb = dag_markov_signature(u.nodes[b.dag_members[0]].graph, up_to_iso);
            if (sa != sb) {
                cert.kind = SeparationCertificate::Kind::DagMarkov;
                cert.discrete_only = true;
                cert.detail = "DAG members have different immorality structure";
                return cert;
            }
        }
        if (a.ci_fp != b.ci_fp) {
            cert.kind = SeparationCertificate::Kind::CiSet;
            cert.discrete_only = true;
            cert.detail = "implied independence sets differ";
            return cert;
        }
        for (const auto& ka : a.member_keys)
            for (const auto& kb : b.member_keys)
                if ((ka == catalog.first && kb == catalog.second) ||
                    (ka == catalog.second && kb == catalog.first)) {
                    cert.kind = SeparationCertificate::Kind::Catalog;
                    cert.discrete_only = false;
                    cert.detail = "published three-vertex catalog: instrumental vs doubly-confounded fork";
                    return cert;
                }
        cert.kind = SeparationCertificate::Kind::Undecided;
        cert.detail = "no implemented certificate distinguishes the models";
        return cert;
    };

    for (std::size_t ka = 0; ka < report.classes.size(); ++ka) {
        for (std::size_t kb = ka + 1; kb < report.classes.size(); ++kb) {
            SeparationCertificate cert = separate(info[ka], info[kb]);
            for (int i : report.classes[ka])
                for (int j : report.classes[kb]) {
                    auto pair = i < j ? std::make_pair(i, j) : std::make_pair(j, i);
                    report.separations[pair] = cert;
                }
        }
    }
    return report;
}

}  // namespace mdag
