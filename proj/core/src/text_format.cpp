#include "mdag/text_format.hpp"

#include <algorithm>
#include <sstream>

#include "mdag/error.hpp"
#include "mdag/projection.hpp"

namespace mdag {

namespace {

const std::string kNameForbidden = " \t{};:,#";

void check_name(const std::string& name, int line) {
    if (name.empty()) throw_parse("line " + std::to_string(line) + ": empty vertex name");
    if (name[0] == kLatentPrefix)
        throw_parse("line " + std::to_string(line) + ": vertex name '" + name +
                    "' uses the reserved '@' prefix");
    for (char c : name)
        if (kNameForbidden.find(c) != std::string::npos)
            throw_parse("line " + std::to_string(line) + ": vertex name '" + name +
                        "' contains a forbidden character");
    if (name == "->")
        throw_parse("line " + std::to_string(line) + ": '->' is not a valid vertex name");
}

std::vector<std::string> tokens_of(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

std::vector<std::string> GraphDocument::observed() const {
    std::vector<std::string> out;
    for (const auto& v : graph.vertex_names())
        if (!latent || !std::binary_search(latent->begin(), latent->end(), v)) out.push_back(v);
    return out;
}

GraphDocument parse_document(const std::string& text) {
    std::vector<std::string> vertices;
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<std::vector<std::string>> faces;
    std::vector<std::string> latent;
    bool saw_vertices = false, saw_edges = false, saw_faces = false, saw_latent = false;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::vector<std::string> toks = tokens_of(line);
        if (toks.empty()) continue;
        const std::string& head = toks[0];

        if (head == "vertices:") {
            if (saw_vertices) throw_parse("line " + std::to_string(lineno) + ": duplicate 'vertices:' section");
            saw_vertices = true;
            for (size_t i = 1; i < toks.size(); ++i) {
                check_name(toks[i], lineno);
                vertices.push_back(toks[i]);
            }
        } else if (head == "edges:") {
            if (saw_edges) throw_parse("line " + std::to_string(lineno) + ": duplicate 'edges:' section");
            saw_edges = true;
            for (size_t i = 1; i < toks.size(); ++i) {
                auto pos = toks[i].find("->");
                if (pos == std::string::npos)
                    throw_parse("line " + std::to_string(lineno) + ": edge '" + toks[i] +
                                "' is not of the form a->b");
                std::string p = toks[i].substr(0, pos);
                std::string c = toks[i].substr(pos + 2);
                check_name(p, lineno);
                check_name(c, lineno);
                edges.emplace_back(std::move(p), std::move(c));
            }
        } else if (head == "faces:") {
            if (saw_faces) throw_parse("line " + std::to_string(lineno) + ": duplicate 'faces:' section");
            saw_faces = true;
            std::string rest;
            for (size_t i = 1; i < toks.size(); ++i) rest += toks[i];
            size_t pos = 0;
            while (pos < rest.size()) {
                if (rest[pos] != '{')
                    throw_parse("line " + std::to_string(lineno) + ": expected '{' in faces list");
                size_t close = rest.find('}', pos);
                if (close == std::string::npos)
                    throw_parse("line " + std::to_string(lineno) + ": unterminated face");
                std::string body = rest.substr(pos + 1, close - pos - 1);
                std::vector<std::string> members;
                std::istringstream msin(body);
                std::string m;
                while (std::getline(msin, m, ',')) {
                    check_name(m, lineno);
                    members.push_back(m);
                }
                if (members.empty()) throw_parse("line " + std::to_string(lineno) + ": empty face");
                faces.push_back(std::move(members));
                pos = close + 1;
            }
        } else if (head == "latent:") {
            if (saw_latent) throw_parse("line " + std::to_string(lineno) + ": duplicate 'latent:' section");
            saw_latent = true;
            for (size_t i = 1; i < toks.size(); ++i) {
                check_name(toks[i], lineno);
                latent.push_back(toks[i]);
            }
        } else {
            throw_parse("line " + std::to_string(lineno) + ": unknown section '" + head + "'");
        }
    }
    if (!saw_vertices) throw_parse("missing 'vertices:' section");

    GraphDocument doc;
    try {
        Dag dag(vertices, edges);
        for (const auto& face : faces)
            for (const auto& m : face) dag.index_of(m);
        SimplicialComplex complex = SimplicialComplex::from_generators(dag.vertex_names(), faces);
        doc.graph = MDag(std::move(dag), std::move(complex));
    } catch (const Error& e) {
        if (e.category() == ErrorCategory::InvalidInput) throw_parse(e.what());
        throw;
    }
    if (saw_latent) {
        std::sort(latent.begin(), latent.end());
        latent.erase(std::unique(latent.begin(), latent.end()), latent.end());
        for (const auto& v : latent) doc.graph.dag().index_of(v);
        doc.latent = std::move(latent);
    }
    doc.text = serialize(doc.graph, doc.latent);
    return doc;
}

MDag parse_mdag(const std::string& text) {
    return parse_document(text).graph;
}

std::string serialize(const MDag& g, const std::optional<std::vector<std::string>>& latent) {
    std::ostringstream out;
    out << "vertices:";
    for (const auto& v : g.vertex_names()) out << ' ' << v;
    out << "\nedges:";
    for (const auto& [p, c] : g.dag().edges()) out << ' ' << p << "->" << c;
    out << "\nfaces:";
    for (Mask f : g.faces().nontrivial_facets()) {
        out << " {";
        std::vector<std::string> members = g.faces().names_of(f);
        for (size_t i = 0; i < members.size(); ++i) {
            if (i) out << ',';
            out << members[i];
        }
        out << '}';
    }
    out << '\n';
    if (latent) {
        std::vector<std::string> sorted = *latent;
        std::sort(sorted.begin(), sorted.end());
        out << "latent:";
        for (const auto& v : sorted) out << ' ' << v;
        out << '\n';
    }
    return out.str();
}

std::string to_dot(const MDag& g) {
    std::ostringstream out;
    out << "digraph mdag {\n";
    for (const auto& v : g.vertex_names()) out << "  \"" << v << "\";\n";
    for (const auto& [p, c] : g.dag().edges())
        out << "  \"" << p << "\" -> \"" << c << "\";\n";
    for (Mask f : g.faces().nontrivial_facets()) {
        std::vector<std::string> members = g.faces().names_of(f);
        std::string aux = latent_name_for(members);
        out << "  \"" << aux << "\" [shape=point, color=red, width=0.08];\n";
        for (const auto& m : members)
            out << "  \"" << aux << "\" -> \"" << m << "\" [color=red];\n";
    }
    out << "}\n";
    return out.str();
}

std::vector<std::string> split_name_list(const std::string& text) {
    std::vector<std::string> out;
    if (text.empty() || text == "-") return out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

}  // namespace mdag
