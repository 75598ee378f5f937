#include "spancirc/io.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spancirc {

using Json = nlohmann::ordered_json;

namespace {

void expect(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument("malformed file: " + what);
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(line);
    }
    return out;
}

void check_format_line(const std::vector<std::string>& lines) {
    expect(!lines.empty() && (lines[0] == "format 1" || lines[0] == "format: 1"),
           "missing 'format 1' header");
}

Json graph_to_json(const MultiGraph& g) {
    Json j;
    j["vertices"] = g.verts;
    Json edges = Json::array();
    for (const auto& e : g.edges) edges.push_back(Json::array({e.label, e.u, e.v, e.weight}));
    j["edges"] = std::move(edges);
    return j;
}

MultiGraph graph_from_json(const Json& j) {
    expect(j.contains("vertices") && j.contains("edges"), "graph needs vertices and edges");
    std::vector<VertexId> vs = j["vertices"].get<std::vector<VertexId>>();
    std::vector<GraphEdge> es;
    for (const auto& e : j["edges"]) {
        expect(e.is_array() && e.size() == 4, "edge entries are [label, u, v, weight]");
        es.push_back({e[0].get<std::string>(), e[1].get<VertexId>(), e[2].get<VertexId>(),
                      e[3].get<Weight>()});
    }
    return MultiGraph(std::move(vs), std::move(es));
}

Json tree_to_json(const ConflictTree& t) {
    Json j;
    Json nodes = Json::array();
    for (const auto& n : t.nodes) {
        Json nj;
        switch (n.kind) {
            case NodeKind::graphic:
                nj["kind"] = "graphic";
                nj["graph"] = graph_to_json(n.graph);
                break;
            case NodeKind::cographic:
                nj["kind"] = "cographic";
                nj["graph"] = graph_to_json(n.graph);
                break;
            case NodeKind::r10_derived: {
                nj["kind"] = "r10";
                Json par = Json::array();
                for (const auto& [of, label] : n.edits.parallels)
                    par.push_back(Json::array({of, label}));
                nj["parallels"] = std::move(par);
                nj["deleted"] = n.edits.deleted;
                break;
            }
        }
        nodes.push_back(std::move(nj));
    }
    j["nodes"] = std::move(nodes);
    Json edges = Json::array();
    for (const auto& e : t.edges) {
        Json ej;
        ej["a"] = e.a;
        ej["b"] = e.b;
        ej["shared"] = e.shared;
        edges.push_back(std::move(ej));
    }
    j["edges"] = std::move(edges);
    j["root"] = t.root;
    return j;
}

ConflictTree tree_from_json(const Json& j) {
    ConflictTree t;
    expect(j.contains("nodes"), "conflict tree needs nodes");
    for (const auto& nj : j["nodes"]) {
        std::string kind = nj.at("kind").get<std::string>();
        if (kind == "graphic") {
            t.nodes.push_back(BasicNode::make_graphic(graph_from_json(nj.at("graph"))));
        } else if (kind == "cographic") {
            t.nodes.push_back(BasicNode::make_cographic(graph_from_json(nj.at("graph"))));
        } else if (kind == "r10") {
            R10Edits edits;
            if (nj.contains("parallels"))
                for (const auto& p : nj["parallels"])
                    edits.parallels.push_back({p.at(0).get<std::string>(),
                                               p.at(1).get<std::string>()});
            if (nj.contains("deleted"))
                edits.deleted = nj["deleted"].get<std::vector<std::string>>();
            t.nodes.push_back(BasicNode::make_r10(std::move(edits)));
        } else {
            expect(false, "unknown node kind " + kind);
        }
    }
    if (j.contains("edges")) {
        for (const auto& ej : j["edges"]) {
            TreeEdge e;
            e.a = ej.at("a").get<std::size_t>();
            e.b = ej.at("b").get<std::size_t>();
            if (ej.contains("shared"))
                e.shared = ej["shared"].get<std::vector<std::string>>();
            t.edges.push_back(std::move(e));
        }
    }
    if (j.contains("root")) t.root = j["root"].get<std::size_t>();
    return t;
}

Json matroid_ref_to_json(const MatroidRef& m) {
    Json j;
    if (m.tree) {
        j["tree"] = tree_to_json(*m.tree);
    } else if (m.node) {
        switch (m.node->kind) {
            case NodeKind::graphic:
                j["graph"] = graph_to_json(m.node->graph);
                j["as"] = "graphic";
                break;
            case NodeKind::cographic:
                j["graph"] = graph_to_json(m.node->graph);
                j["as"] = "cographic";
                break;
            case NodeKind::r10_derived: {
                Json par = Json::array();
                for (const auto& [of, label] : m.node->edits.parallels)
                    par.push_back(Json::array({of, label}));
                j["r10"] = Json{{"parallels", std::move(par)},
                                {"deleted", m.node->edits.deleted}};
                break;
            }
        }
    } else {
        throw std::invalid_argument("empty matroid reference");
    }
    return j;
}

MatroidRef matroid_ref_from_json(const Json& j) {
    if (j.contains("tree")) return MatroidRef::of(tree_from_json(j["tree"]));
    if (j.contains("graph")) {
        std::string as = j.at("as").get<std::string>();
        MultiGraph g = graph_from_json(j["graph"]);
        if (as == "graphic") return MatroidRef::of(BasicNode::make_graphic(std::move(g)));
        if (as == "cographic") return MatroidRef::of(BasicNode::make_cographic(std::move(g)));
        expect(false, "unknown matroid tag " + as);
    }
    if (j.contains("r10")) {
        R10Edits edits;
        const Json& rj = j["r10"];
        if (rj.contains("parallels"))
            for (const auto& p : rj["parallels"])
                edits.parallels.push_back({p.at(0).get<std::string>(), p.at(1).get<std::string>()});
        if (rj.contains("deleted")) edits.deleted = rj["deleted"].get<std::vector<std::string>>();
        return MatroidRef::of(BasicNode::make_r10(std::move(edits)));
    }
    throw std::invalid_argument("malformed file: matroid needs tree, graph, or r10");
}

// Default weights: edge weights from realizing graphs, 1 for r10 elements,
// restricted to the ground set.
std::map<std::string, Weight> default_weights(const MatroidRef& m) {
    std::map<std::string, Weight> w;
    auto ground = m.ground_labels();
    auto from_node = [&](const BasicNode& n) {
        if (n.kind == NodeKind::r10_derived) {
            for (const auto& l : n.matroid.labels)
                if (ground.count(l)) w.emplace(l, 1);
        } else {
            for (const auto& e : n.graph.edges)
                if (ground.count(e.label)) w.emplace(e.label, e.weight);
        }
    };
    if (m.node) from_node(*m.node);
    if (m.tree)
        for (const auto& n : m.tree->nodes) from_node(n);
    return w;
}

}  // namespace

std::string write_graph(const MultiGraph& g) {
    std::ostringstream out;
    out << "format 1\n";
    for (VertexId v : g.verts) out << "v " << v << "\n";
    for (const auto& e : g.edges)
        out << "e " << e.label << " " << e.u << " " << e.v << " " << e.weight << "\n";
    return out.str();
}

MultiGraph read_graph(const std::string& text) {
    auto lines = split_lines(text);
    check_format_line(lines);
    std::vector<VertexId> vs;
    std::vector<GraphEdge> es;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::istringstream ss(lines[i]);
        std::string tag;
        ss >> tag;
        if (tag == "v") {
            VertexId v;
            expect(static_cast<bool>(ss >> v), "vertex line needs an id");
            vs.push_back(v);
        } else if (tag == "e") {
            GraphEdge e;
            expect(static_cast<bool>(ss >> e.label >> e.u >> e.v >> e.weight),
                   "edge line needs label, endpoints and weight");
            es.push_back(e);
        } else {
            expect(false, "unknown line tag " + tag);
        }
    }
    return MultiGraph(std::move(vs), std::move(es));
}

std::string write_matroid(const BinaryMatroid& m) {
    std::ostringstream out;
    out << "format 1\n" << m.matrix.rows << " " << m.matrix.cols << "\n";
    for (std::size_t r = 0; r < m.matrix.rows; ++r) {
        for (std::size_t c = 0; c < m.matrix.cols; ++c) out << (m.matrix.get(r, c) ? '1' : '0');
        out << "\n";
    }
    for (std::size_t c = 0; c < m.labels.size(); ++c)
        out << m.labels[c] << (c + 1 == m.labels.size() ? "" : " ");
    out << "\n";
    return out.str();
}

BinaryMatroid read_matroid(const std::string& text) {
    auto lines = split_lines(text);
    check_format_line(lines);
    expect(lines.size() >= 2, "matroid file needs a dimension line");
    std::istringstream dims(lines[1]);
    std::size_t rows, cols;
    expect(static_cast<bool>(dims >> rows >> cols), "dimension line is 'rows cols'");
    expect(lines.size() >= 2 + rows + 1, "matroid file truncated");
    Gf2Matrix a(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string& row = lines[2 + r];
        expect(row.size() == cols, "matrix row has wrong length");
        for (std::size_t c = 0; c < cols; ++c) {
            expect(row[c] == '0' || row[c] == '1', "matrix entries are 0/1");
            if (row[c] == '1') a.set(r, c, true);
        }
    }
    std::istringstream labs(lines[2 + rows]);
    std::vector<std::string> labels;
    std::string l;
    while (labs >> l) labels.push_back(l);
    expect(labels.size() == cols, "label line must name every column");
    return BinaryMatroid(std::move(a), std::move(labels));
}

std::string write_tree(const ConflictTree& t) {
    Json j;
    j["format"] = 1;
    j["kind"] = "conflict-tree";
    Json body = tree_to_json(t);
    for (auto& [k, v] : body.items()) j[k] = v;
    return j.dump(2) + "\n";
}

ConflictTree read_tree(const std::string& text) {
    Json j = Json::parse(text);
    expect(j.value("format", 0) == 1, "format must be 1");
    expect(j.value("kind", "") == "conflict-tree", "kind must be conflict-tree");
    return tree_from_json(j);
}

std::string write_wmsc_instance(const WmscInstanceFile& f) {
    Json j;
    j["format"] = 1;
    j["kind"] = "wmsc";
    j["matroid"] = matroid_ref_to_json(f.matroid);
    j["terminals"] = f.terminals;
    Json w = Json::object();
    for (const auto& [k, v] : f.weights) w[k] = v;
    j["weights"] = std::move(w);
    j["budget"] = f.budget;
    return j.dump(2) + "\n";
}

WmscInstanceFile read_wmsc_instance(const std::string& text) {
    Json j = Json::parse(text);
    expect(j.value("format", 0) == 1, "format must be 1");
    expect(j.value("kind", "") == "wmsc", "kind must be wmsc");
    WmscInstanceFile f{matroid_ref_from_json(j.at("matroid")), {}, {}, 0};
    if (j.contains("terminals"))
        for (const auto& t : j["terminals"]) f.terminals.insert(t.get<std::string>());
    f.weights = default_weights(f.matroid);
    if (j.contains("weights"))
        for (const auto& [k, v] : j["weights"].items()) f.weights[k] = v.get<Weight>();
    f.budget = j.at("budget").get<Weight>();
    return f;
}

std::string write_scir_instance(const ScirInstanceFile& f) {
    Json j;
    j["format"] = 1;
    j["kind"] = "scir";
    j["matroid"] = matroid_ref_to_json(f.matroid);
    j["terminals"] = f.terminals;
    return j.dump(2) + "\n";
}

ScirInstanceFile read_scir_instance(const std::string& text) {
    Json j = Json::parse(text);
    expect(j.value("format", 0) == 1, "format must be 1");
    expect(j.value("kind", "") == "scir", "kind must be scir");
    ScirInstanceFile f{matroid_ref_from_json(j.at("matroid")), {}};
    if (j.contains("terminals"))
        for (const auto& t : j["terminals"]) f.terminals.insert(t.get<std::string>());
    return f;
}

std::string write_emwc_instance(const EmwcInstanceFile& f) {
    Json j;
    j["format"] = 1;
    j["kind"] = "emwc";
    j["graph"] = graph_to_json(f.inst.g);
    j["terminals"] = f.inst.terminals;
    j["r1"] = f.inst.r1;
    j["r2"] = f.inst.r2;
    j["k"] = f.inst.k;
    return j.dump(2) + "\n";
}

EmwcInstanceFile read_emwc_instance(const std::string& text) {
    Json j = Json::parse(text);
    expect(j.value("format", 0) == 1, "format must be 1");
    expect(j.value("kind", "") == "emwc", "kind must be emwc");
    EmwcInstanceFile f;
    f.inst.g = graph_from_json(j.at("graph"));
    if (j.contains("terminals"))
        for (const auto& t : j["terminals"]) f.inst.terminals.insert(t.get<std::string>());
    if (j.contains("r1"))
        for (const auto& v : j["r1"]) f.inst.r1.insert(v.get<VertexId>());
    if (j.contains("r2"))
        for (const auto& v : j["r2"]) f.inst.r2.insert(v.get<VertexId>());
    f.inst.k = j.at("k").get<Weight>();
    return f;
}

std::string write_ctse_instance(const CtseInstanceFile& f) {
    Json j;
    j["format"] = 1;
    j["kind"] = "ctse";
    j["graph"] = graph_to_json(f.inst.g);
    j["terminals"] = f.inst.terminals;
    j["k"] = f.inst.k;
    return j.dump(2) + "\n";
}

CtseInstanceFile read_ctse_instance(const std::string& text) {
    Json j = Json::parse(text);
    expect(j.value("format", 0) == 1, "format must be 1");
    expect(j.value("kind", "") == "ctse", "kind must be ctse");
    CtseInstanceFile f;
    f.inst.g = graph_from_json(j.at("graph"));
    if (j.contains("terminals"))
        for (const auto& t : j["terminals"]) f.inst.terminals.insert(t.get<std::string>());
    f.inst.k = j.at("k").get<Weight>();
    return f;
}

std::string write_witness(const std::set<std::string>& labels) {
    std::ostringstream out;
    out << "format 1\n";
    for (const auto& l : labels) out << l << "\n";
    return out.str();
}

std::set<std::string> read_witness(const std::string& text) {
    auto lines = split_lines(text);
    check_format_line(lines);
    std::set<std::string> out;
    for (std::size_t i = 1; i < lines.size(); ++i)
        if (!lines[i].empty()) out.insert(lines[i]);
    return out;
}

std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << content;
}

}  // namespace spancirc
