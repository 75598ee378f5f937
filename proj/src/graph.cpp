#include "spancirc/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace spancirc {

MultiGraph::MultiGraph(std::vector<VertexId> vs, std::vector<GraphEdge> es)
    : verts(std::move(vs)), edges(std::move(es)) {
    std::sort(verts.begin(), verts.end());
    if (std::adjacent_find(verts.begin(), verts.end()) != verts.end())
        throw std::invalid_argument("duplicate vertex id");
    std::set<std::string> seen;
    for (const auto& e : edges) {
        if (!seen.insert(e.label).second)
            throw std::invalid_argument("duplicate edge label: " + e.label);
        if (!has_vertex(e.u) || !has_vertex(e.v))
            throw std::invalid_argument("edge endpoint not a vertex: " + e.label);
        if (e.weight < 1) throw std::invalid_argument("edge weight must be >= 1: " + e.label);
    }
}

bool MultiGraph::has_vertex(VertexId v) const {
    return std::binary_search(verts.begin(), verts.end(), v);
}

const GraphEdge& MultiGraph::edge(const std::string& label) const {
    for (const auto& e : edges)
        if (e.label == label) return e;
    throw std::invalid_argument("unknown edge: " + label);
}

bool MultiGraph::has_edge_label(const std::string& label) const {
    for (const auto& e : edges)
        if (e.label == label) return true;
    return false;
}

std::vector<std::string> MultiGraph::edge_labels() const {
    std::vector<std::string> out;
    out.reserve(edges.size());
    for (const auto& e : edges) out.push_back(e.label);
    return out;
}

Weight MultiGraph::weight_of(const std::set<std::string>& labels) const {
    Weight w = 0;
    for (const auto& l : labels) w += edge(l).weight;
    return w;
}

namespace {

struct DSU {
    std::unordered_map<VertexId, VertexId> parent;
    VertexId find(VertexId x) {
        auto it = parent.find(x);
        if (it == parent.end()) { parent[x] = x; return x; }
        if (it->second == x) return x;
        return parent[x] = find(it->second);
    }
    void unite(VertexId a, VertexId b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<std::set<VertexId>> components(const MultiGraph& g) {
    DSU dsu;
    for (VertexId v : g.verts) dsu.find(v);
    for (const auto& e : g.edges) dsu.unite(e.u, e.v);
    std::map<VertexId, std::set<VertexId>> byroot;
    for (VertexId v : g.verts) byroot[dsu.find(v)].insert(v);
    std::vector<std::set<VertexId>> out;
    for (auto& [root, set] : byroot) out.push_back(std::move(set));
    return out;
}

bool is_connected(const MultiGraph& g) { return components(g).size() == 1; }

Contraction contract_vertex_set(const MultiGraph& g, const std::set<VertexId>& x) {
    for (VertexId v : x)
        if (!g.has_vertex(v)) throw std::invalid_argument("contraction set not within V(G)");
    std::map<VertexId, VertexId> vmap;
    VertexId target = x.empty() ? 0 : *x.begin();
    for (VertexId v : g.verts) vmap[v] = x.count(v) ? target : v;
    if (x.empty()) {
        Contraction c{g, vmap};
        return c;
    }
    std::vector<VertexId> verts;
    for (VertexId v : g.verts)
        if (!x.count(v) || v == target) verts.push_back(v);
    std::vector<GraphEdge> edges;
    for (const auto& e : g.edges)
        edges.push_back(GraphEdge{e.label, vmap[e.u], vmap[e.v], e.weight});
    return Contraction{MultiGraph(std::move(verts), std::move(edges)), std::move(vmap)};
}

Contraction contract_edge(const MultiGraph& g, const std::string& edge_label) {
    const GraphEdge& e = g.edge(edge_label);
    if (e.is_loop()) {
        // Contracting a loop is just deleting it.
        std::map<VertexId, VertexId> vmap;
        for (VertexId v : g.verts) vmap[v] = v;
        return Contraction{delete_edges(g, {edge_label}), std::move(vmap)};
    }
    Contraction c = contract_vertex_set(g, {e.u, e.v});
    std::vector<GraphEdge> edges;
    for (const auto& f : c.graph.edges)
        if (f.label != edge_label) edges.push_back(f);
    return Contraction{MultiGraph(c.graph.verts, std::move(edges)), std::move(c.vertex_map)};
}

std::set<std::string> crossing_edges(const MultiGraph& g, const std::set<VertexId>& a) {
    std::set<std::string> out;
    for (const auto& e : g.edges)
        if (a.count(e.u) != a.count(e.v)) out.insert(e.label);
    return out;
}

namespace {

MultiGraph induced_subgraph(const MultiGraph& g, const std::set<VertexId>& vs) {
    std::vector<VertexId> verts(vs.begin(), vs.end());
    std::vector<GraphEdge> edges;
    for (const auto& e : g.edges)
        if (vs.count(e.u) && vs.count(e.v)) edges.push_back(e);
    return MultiGraph(std::move(verts), std::move(edges));
}

}  // namespace

bool is_minimal_cutset(const MultiGraph& g, const std::set<std::string>& s) {
    if (!is_connected(g)) throw std::invalid_argument("graph must be connected");
    if (s.empty()) return false;
    MultiGraph rest = delete_edges(g, s);
    auto comps = components(rest);
    if (comps.size() != 2) return false;
    // S must be exactly E(A,B).
    return crossing_edges(g, comps[0]) == s;
}

std::vector<std::set<std::string>> enumerate_minimal_cutsets(const MultiGraph& g) {
    if (g.n() > 20) throw std::invalid_argument("vertex cap exceeded for cut enumeration");
    std::vector<std::set<std::string>> out;
    std::set<std::set<std::string>> seen;
    for (const auto& comp : components(g)) {
        MultiGraph h = induced_subgraph(g, comp);
        std::vector<VertexId> vs(comp.begin(), comp.end());
        if (vs.size() < 2) continue;
        const std::size_t n = vs.size();
        // Fix vs[0] on side A, enumerate the rest.
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
            std::set<VertexId> a{vs[0]}, b;
            for (std::size_t i = 1; i < n; ++i)
                (mask & (std::uint64_t{1} << (i - 1)) ? a : b).insert(vs[i]);
            if (b.empty()) continue;
            if (!is_connected(induced_subgraph(h, a)) || !is_connected(induced_subgraph(h, b)))
                continue;
            auto cut = crossing_edges(h, a);
            if (!cut.empty() && seen.insert(cut).second) out.push_back(cut);
        }
    }
    return out;
}

BinaryMatroid cycle_matroid(const MultiGraph& g) {
    Gf2Matrix a(g.n(), g.m());
    std::map<VertexId, std::size_t> row;
    for (std::size_t i = 0; i < g.verts.size(); ++i) row[g.verts[i]] = i;
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < g.edges.size(); ++j) {
        const auto& e = g.edges[j];
        if (!e.is_loop()) {
            a.set(row[e.u], j, true);
            a.set(row[e.v], j, true);
        }
        labels.push_back(e.label);
    }
    return BinaryMatroid(std::move(a), std::move(labels));
}

BinaryMatroid bond_matroid(const MultiGraph& g) { return dual(cycle_matroid(g)); }

MultiGraph delete_edges(const MultiGraph& g, const std::set<std::string>& labels) {
    std::vector<GraphEdge> edges;
    for (const auto& e : g.edges)
        if (!labels.count(e.label)) edges.push_back(e);
    return MultiGraph(g.verts, std::move(edges));
}

MultiGraph delete_vertex(const MultiGraph& g, VertexId v) {
    if (!g.has_vertex(v)) throw std::invalid_argument("unknown vertex");
    std::vector<VertexId> verts;
    for (VertexId u : g.verts)
        if (u != v) verts.push_back(u);
    std::vector<GraphEdge> edges;
    for (const auto& e : g.edges)
        if (e.u != v && e.v != v) edges.push_back(e);
    return MultiGraph(std::move(verts), std::move(edges));
}

bool is_simple_cycle_edge_set(const MultiGraph& g, const std::set<std::string>& labels) {
    if (labels.empty()) return false;
    std::map<VertexId, int> deg;
    std::set<VertexId> touched;
    for (const auto& l : labels) {
        const auto& e = g.edge(l);
        deg[e.u] += 1;
        deg[e.v] += 1;  // loops add two to one vertex
        touched.insert(e.u);
        touched.insert(e.v);
    }
    for (const auto& [v, d] : deg)
        if (d != 2) return false;
    // Connectivity of the touched subgraph.
    DSU dsu;
    for (VertexId v : touched) dsu.find(v);
    for (const auto& l : labels) {
        const auto& e = g.edge(l);
        dsu.unite(e.u, e.v);
    }
    VertexId root = dsu.find(*touched.begin());
    for (VertexId v : touched)
        if (dsu.find(v) != root) return false;
    return true;
}

}  // namespace spancirc
