// Command line front end: parse graphs in the mDAG text format and run the
// library operations on them.  Results go to stdout as text, or as JSON with
// --json; errors exit non-zero with a machine-readable category on stderr.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdag/causal.hpp"
#include "mdag/enumeration.hpp"
#include "mdag/equivalence.hpp"
#include "mdag/error.hpp"
#include "mdag/factorization.hpp"
#include "mdag/markov.hpp"
#include "mdag/projection.hpp"
#include "mdag/reduction.hpp"
#include "mdag/sem.hpp"
#include "mdag/text_format.hpp"

using json = nlohmann::json;

namespace {

int exit_code_for(mdag::ErrorCategory c) {
    switch (c) {
        case mdag::ErrorCategory::Parse: return 2;
        case mdag::ErrorCategory::InvalidInput: return 3;
        case mdag::ErrorCategory::Resource: return 4;
        case mdag::ErrorCategory::Degenerate: return 5;
        case mdag::ErrorCategory::Consistency: return 6;
    }
    return 1;
}

mdag::GraphDocument read_input(const std::string& path) {
    std::ostringstream buf;
    if (path.empty() || path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) mdag::throw_input("cannot open '" + path + "'");
        buf << in.rdbuf();
    }
    return mdag::parse_document(buf.str());
}

std::vector<std::string> observed_or_flag(const mdag::GraphDocument& doc,
                                          const std::string& flag_value) {
    if (!flag_value.empty()) return mdag::split_name_list(flag_value);
    if (doc.latent) return doc.observed();
    mdag::throw_input("no observed set: pass --observed or annotate the file with 'latent:'");
}

json graph_json(const mdag::MDag& g) {
    json j;
    j["vertices"] = g.vertex_names();
    json edges = json::array();
    for (const auto& [p, c] : g.dag().edges()) edges.push_back({p, c});
    j["edges"] = edges;
    json faces = json::array();
    for (mdag::Mask f : g.faces().nontrivial_facets()) faces.push_back(g.faces().names_of(f));
    j["faces"] = faces;
    return j;
}

json ci_json(const mdag::CiStatement& s) {
    return json{{"a", s.a}, {"b", s.b}, {"given", s.c}};
}

struct CommonOpts {
    std::string input;
    bool json_output = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("input", opts.input, "input file (default: stdin)");
    cmd->add_flag("--json", opts.json_output, "emit JSON instead of text");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mdag: directed graphs with hyper bidirected faces"};
    app.require_subcommand(1);
    app.set_config("--config");

    CommonOpts project_opts;
    std::string keep;
    auto* project = app.add_subcommand("project", "latent projection onto a vertex set");
    add_common(project, project_opts);
    project->add_option("--keep", keep, "comma separated vertices to keep (default: non-latent)");

    CommonOpts canonical_opts;
    auto* canonical = app.add_subcommand("canonical", "replace facets by fresh latent vertices");
    add_common(canonical, canonical_opts);

    CommonOpts reduce_opts;
    std::string observed_flag;
    auto* reduce = app.add_subcommand("reduce", "rewrite a latent DAG to its reduced form");
    add_common(reduce, reduce_opts);
    reduce->add_option("--observed", observed_flag, "comma separated observed vertices");

    CommonOpts districts_opts;
    auto* districts_cmd = app.add_subcommand("districts", "bidirected-connected components");
    add_common(districts_cmd, districts_opts);

    CommonOpts dsep_opts;
    std::string dsep_a, dsep_b, dsep_c;
    auto* dsep = app.add_subcommand("dsep", "d-separation in the canonical DAG");
    dsep->add_option("a", dsep_a, "first vertex set")->required();
    dsep->add_option("b", dsep_b, "second vertex set")->required();
    dsep->add_option("c", dsep_c, "conditioning set (optional)");
    add_common(dsep, dsep_opts);

    CommonOpts ci_opts;
    auto* ci = app.add_subcommand("ci", "implied conditional independences");
    add_common(ci, ci_opts);

    CommonOpts nested_opts;
    auto* nested = app.add_subcommand("nested", "nested factorization structure and constraints");
    add_common(nested, nested_opts);

    CommonOpts verma_opts;
    std::uint64_t verma_seed = 1;
    int verma_cards = 2;
    int verma_latent_cards = 3;
    std::string verma_export;
    bool verma_export_binary = false;
    auto* verma = app.add_subcommand("verma-check",
                                     "evaluate constraints on a random model of the graph");
    add_common(verma, verma_opts);
    verma->add_option("--seed", verma_seed, "model seed");
    verma->add_option("--cards", verma_cards, "observed cardinality (default 2)");
    verma->add_option("--latent-cards", verma_latent_cards, "latent cardinality (default 3)");
    verma->add_option("--export-joint", verma_export, "write the exact joint to this file");
    verma->add_flag("--binary", verma_export_binary, "export the joint in binary form");

    CommonOpts mutilate_opts;
    std::string mutilate_targets;
    std::string mutilate_edges;
    auto* mutilate = app.add_subcommand("mutilate", "remove edges into an intervention set");
    mutilate->add_option("targets", mutilate_targets, "comma separated intervention set")
        ->required();
    mutilate->add_option("--edges", mutilate_edges,
                         "experimental: delete these directed edges (a->b,c->d) instead");
    add_common(mutilate, mutilate_opts);

    CommonOpts enumerate_opts;
    int enum_n = 3;
    bool enum_iso = false;
    auto* enumerate = app.add_subcommand("enumerate", "list all graphs on n vertices");
    enumerate->add_option("--n", enum_n, "vertex count")->required();
    enumerate->add_flag("--iso", enum_iso, "one representative per isomorphism class");
    enumerate->add_flag("--json", enumerate_opts.json_output, "emit JSON instead of text");

    CommonOpts classify_opts;
    int classify_n = 3;
    int classify_threads = 1;
    auto* classify = app.add_subcommand("classify",
                                        "group all graphs on n vertices into model classes");
    classify->add_option("--n", classify_n, "vertex count")->required();
    classify->add_option("--threads", classify_threads, "worker threads");
    classify->add_flag("--json", classify_opts.json_output, "emit JSON instead of text");

    CommonOpts dot_opts;
    auto* dot = app.add_subcommand("dot", "graphviz export");
    add_common(dot, dot_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*project) {
            mdag::GraphDocument doc = read_input(project_opts.input);
            std::vector<std::string> kept =
                keep.empty() ? observed_or_flag(doc, "") : mdag::split_name_list(keep);
            mdag::MDag out = mdag::latent_project(doc.graph, kept);
            if (project_opts.json_output)
                std::cout << graph_json(out).dump(2) << "\n";
            else
                std::cout << mdag::serialize(out);
        } else if (*canonical) {
            mdag::GraphDocument doc = read_input(canonical_opts.input);
            mdag::LabelledCanonicalDag canon = mdag::canonical_dag(doc.graph);
            if (canonical_opts.json_output) {
                json j = graph_json(mdag::MDag::from_dag(canon.dag));
                j["latents"] = json::object();
                for (const auto& [fresh, facet] : canon.facet_labels) j["latents"][fresh] = facet;
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << mdag::serialize(mdag::MDag::from_dag(canon.dag), canon.latents());
            }
        } else if (*reduce) {
            mdag::GraphDocument doc = read_input(reduce_opts.input);
            std::vector<std::string> observed = observed_or_flag(doc, observed_flag);
            if (!doc.graph.is_plain_dag())
                mdag::throw_input("reduction expects a DAG with latent vertices, not faces");
            mdag::Dag out = mdag::reduce_latents(doc.graph.dag(), observed);
            std::vector<std::string> latents;
            for (const auto& v : out.vertex_names())
                if (std::find(observed.begin(), observed.end(), v) == observed.end())
                    latents.push_back(v);
            mdag::MDag as_mdag = mdag::MDag::from_dag(out);
            if (reduce_opts.json_output) {
                json j = graph_json(as_mdag);
                j["latent"] = latents;
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << mdag::serialize(as_mdag, latents);
            }
        } else if (*districts_cmd) {
            mdag::GraphDocument doc = read_input(districts_opts.input);
            mdag::VertexPartition parts = mdag::districts(doc.graph);
            if (districts_opts.json_output) {
                std::cout << json(parts.blocks).dump(2) << "\n";
            } else {
                for (const auto& block : parts.blocks) {
                    for (std::size_t i = 0; i < block.size(); ++i)
                        std::cout << (i ? " " : "") << block[i];
                    std::cout << "\n";
                }
            }
        } else if (*dsep) {
            mdag::GraphDocument doc = read_input(dsep_opts.input);
            mdag::Dag graph = doc.graph.is_plain_dag() ? doc.graph.dag()
                                                       : mdag::canonical_dag(doc.graph).dag;
            bool separated = mdag::d_separated(graph, mdag::split_name_list(dsep_a),
                                               mdag::split_name_list(dsep_b),
                                               mdag::split_name_list(dsep_c));
            if (dsep_opts.json_output)
                std::cout << json{{"separated", separated}}.dump(2) << "\n";
            else
                std::cout << (separated ? "d-separated\n" : "d-connected\n");
        } else if (*ci) {
            mdag::GraphDocument doc = read_input(ci_opts.input);
            std::vector<mdag::CiStatement> cis = mdag::implied_ci(doc.graph);
            if (ci_opts.json_output) {
                json list = json::array();
                for (const auto& s : cis) list.push_back(ci_json(s));
                json j{{"schema", "mdag-ci-list/1"}, {"independences", list}};
                std::cout << j.dump(2) << "\n";
            } else {
                for (const auto& s : cis) std::cout << s.to_string() << "\n";
            }
        } else if (*nested) {
            mdag::GraphDocument doc = read_input(nested_opts.input);
            auto root = mdag::nested_factorize(doc.graph);
            std::vector<mdag::ConstraintDescriptor> cons = mdag::verma_constraints(doc.graph);
            if (nested_opts.json_output) {
                json j;
                j["tree"] = mdag::format_factorization(*root);
                json cj = json::array();
                for (const auto& c : cons) {
                    json one;
                    one["constraint"] = c.to_string();
                    one["margin"] = c.margin_vertices;
                    one["invariant_to"] = c.invariant_to;
                    one["support"] = c.support;
                    cj.push_back(one);
                }
                j["constraints"] = cj;
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << mdag::format_factorization(*root);
                for (const auto& c : cons) std::cout << "constraint: " << c.to_string() << "\n";
            }
        } else if (*verma) {
            mdag::GraphDocument doc = read_input(verma_opts.input);
            mdag::LabelledCanonicalDag canon = mdag::canonical_dag(doc.graph);
            std::map<std::string, int> cards;
            for (const auto& v : canon.dag.vertex_names())
                cards[v] = canon.facet_labels.count(v) ? verma_latent_cards : verma_cards;
            mdag::DiscreteSem sem = mdag::random_sem(canon.dag, cards, verma_seed);
            mdag::JointTable joint = mdag::exact_joint(sem, doc.graph.vertex_names());
            if (!verma_export.empty()) {
                std::ofstream out(verma_export, verma_export_binary ? std::ios::binary
                                                                    : std::ios::out);
                if (!out) mdag::throw_input("cannot open '" + verma_export + "' for writing");
                if (verma_export_binary)
                    joint.write_binary(out);
                else
                    joint.write_text(out);
            }

            double worst_ci = 0;
            std::vector<mdag::CiStatement> cis = mdag::implied_ci(doc.graph);
            for (const auto& s : cis) worst_ci = std::max(worst_ci, mdag::ci_gap(joint, s));
            std::vector<mdag::ConstraintDescriptor> cons = mdag::verma_constraints(doc.graph);
            json cj = json::array();
            double worst_constraint = 0;
            for (const auto& c : cons) {
                double gap = mdag::constraint_gap(joint, c);
                worst_constraint = std::max(worst_constraint, gap);
                cj.push_back({{"constraint", c.to_string()}, {"gap", gap}});
            }
            if (verma_opts.json_output) {
                json j;
                j["seed"] = verma_seed;
                j["independences"] = cis.size();
                j["worst_ci_gap"] = worst_ci;
                j["constraints"] = cj;
                j["worst_constraint_gap"] = worst_constraint;
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "independences: " << cis.size() << " (worst gap " << worst_ci << ")\n";
                for (const auto& entry : cj)
                    std::cout << "constraint gap " << entry["gap"].get<double>() << ": "
                              << entry["constraint"].get<std::string>() << "\n";
            }
        } else if (*mutilate) {
            mdag::GraphDocument doc = read_input(mutilate_opts.input);
            mdag::MDag out = doc.graph;
            if (!mutilate_edges.empty()) {
                std::vector<std::pair<std::string, std::string>> edges;
                for (const auto& token : mdag::split_name_list(mutilate_edges)) {
                    auto pos = token.find("->");
                    if (pos == std::string::npos)
                        mdag::throw_input("edge '" + token + "' is not of the form a->b");
                    edges.emplace_back(token.substr(0, pos), token.substr(pos + 2));
                }
                out = mdag::delete_edges(out, edges);
            } else {
                out = mdag::mutilate_mdag(out, mdag::split_name_list(mutilate_targets));
            }
            if (mutilate_opts.json_output)
                std::cout << graph_json(out).dump(2) << "\n";
            else
                std::cout << mdag::serialize(out, doc.latent);
        } else if (*enumerate) {
            if (enumerate_opts.json_output) {
                json graphs = json::array();
                std::size_t count = mdag::for_each_mdag(
                    enum_n, enum_iso, [&](const mdag::MDag& g) { graphs.push_back(graph_json(g)); });
                std::cout << json{{"count", count}, {"graphs", graphs}}.dump(2) << "\n";
            } else {
                // One graph per line; the line count is the graph count.
                mdag::for_each_mdag(enum_n, enum_iso, [&](const mdag::MDag& g) {
                    std::cout << "edges:";
                    for (const auto& [p, c] : g.dag().edges()) std::cout << ' ' << p << "->" << c;
                    std::cout << " faces:";
                    for (mdag::Mask f : g.faces().nontrivial_facets()) {
                        std::vector<std::string> members = g.faces().names_of(f);
                        std::cout << " {";
                        for (std::size_t i = 0; i < members.size(); ++i)
                            std::cout << (i ? "," : "") << members[i];
                        std::cout << "}";
                    }
                    std::cout << "\n";
                });
            }
        } else if (*classify) {
            std::vector<mdag::MDag> graphs = mdag::enumerate_mdags(classify_n, true);
            mdag::EquivalenceReport report =
                mdag::equivalence_classes(graphs, true, classify_threads);
            if (classify_opts.json_output) {
                json j;
                j["schema"] = "mdag-equivalence-report/1";
                j["graphs"] = json::array();
                for (const auto& g : graphs) j["graphs"].push_back(graph_json(g));
                j["classes"] = report.classes;
                json seps = json::array();
                for (const auto& [pair, cert] : report.separations)
                    seps.push_back({{"pair", {pair.first, pair.second}},
                                    {"kind", mdag::to_string(cert.kind)},
                                    {"discrete_only", cert.discrete_only},
                                    {"detail", cert.detail}});
                j["separations"] = seps;
                json merges = json::array();
                for (const auto& [pair, chain] : report.merge_certificates)
                    merges.push_back({{"pair", {pair.first, pair.second}}, {"chain", chain}});
                j["merges"] = merges;
                j["undecided_pairs"] = report.undecided_pairs();
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "graphs: " << graphs.size() << "\n";
                std::cout << "classes: " << report.classes.size() << "\n";
                for (std::size_t k = 0; k < report.classes.size(); ++k) {
                    const auto& cls = report.classes[k];
                    std::cout << "class " << k << " (" << cls.size()
                              << " graphs), representative: ";
                    const mdag::MDag& rep = graphs[cls[0]];
                    std::cout << "edges:";
                    for (const auto& [p, c] : rep.dag().edges()) std::cout << ' ' << p << "->" << c;
                    std::cout << " faces:";
                    for (mdag::Mask f : rep.faces().nontrivial_facets()) {
                        std::vector<std::string> members = rep.faces().names_of(f);
                        std::cout << " {";
                        for (std::size_t i = 0; i < members.size(); ++i)
                            std::cout << (i ? "," : "") << members[i];
                        std::cout << "}";
                    }
                    std::cout << "\n";
                }
                std::cout << "undecided pairs: " << report.undecided_pairs() << "\n";
            }
        } else if (*dot) {
            mdag::GraphDocument doc = read_input(dot_opts.input);
            std::cout << mdag::to_dot(doc.graph);
        }
    } catch (const mdag::Error& e) {
        std::cerr << "error[" << mdag::to_string(e.category()) << "]: " << e.what() << "\n";
        return exit_code_for(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return 7;
    }
    return 0;
}
