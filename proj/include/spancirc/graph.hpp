#pragma once

#include "spancirc/gf2.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace spancirc {

using VertexId = int;
using Weight = std::int64_t;

struct GraphEdge {
    std::string label;
    VertexId u = 0;
    VertexId v = 0;
    Weight weight = 1;

    bool is_loop() const { return u == v; }
    bool operator==(const GraphEdge& o) const = default;
};

// Undirected multigraph: loops and parallel edges allowed, edges identified by
// label (endpoints are never a key).
struct MultiGraph {
    std::vector<VertexId> verts;
    std::vector<GraphEdge> edges;

    MultiGraph() = default;
    MultiGraph(std::vector<VertexId> vs, std::vector<GraphEdge> es);

    std::size_t n() const { return verts.size(); }
    std::size_t m() const { return edges.size(); }
    bool has_vertex(VertexId v) const;
    const GraphEdge& edge(const std::string& label) const;
    bool has_edge_label(const std::string& label) const;
    std::vector<std::string> edge_labels() const;
    Weight weight_of(const std::set<std::string>& labels) const;

    bool operator==(const MultiGraph& o) const = default;
};

struct VertexCut {
    std::set<VertexId> a;
    std::set<VertexId> b;
};

std::vector<std::set<VertexId>> components(const MultiGraph& g);
bool is_connected(const MultiGraph& g);

// Result of a contraction: the new graph plus the vertex mapping old -> new.
struct Contraction {
    MultiGraph graph;
    std::map<VertexId, VertexId> vertex_map;
};

// Replaces X by a single vertex (the smallest id in X); edges inside X become
// loops, boundary edges are re-anchored.  The edge count never drops.
Contraction contract_vertex_set(const MultiGraph& g, const std::set<VertexId>& x);

// \S2 edge contraction: e disappears, its endpoints merge, parallel copies of e
// become loops.
Contraction contract_edge(const MultiGraph& g, const std::string& edge_label);

std::set<std::string> crossing_edges(const MultiGraph& g, const std::set<VertexId>& a);

bool is_minimal_cutset(const MultiGraph& g, const std::set<std::string>& s);

// All minimal cut-sets, via 2-partitions with connected sides.  Capped at 20
// vertices; disconnected graphs are handled per component.
std::vector<std::set<std::string>> enumerate_minimal_cutsets(const MultiGraph& g);

// Vertex-edge incidence representation over GF(2); loops map to zero columns.
BinaryMatroid cycle_matroid(const MultiGraph& g);

BinaryMatroid bond_matroid(const MultiGraph& g);

MultiGraph delete_edges(const MultiGraph& g, const std::set<std::string>& labels);
MultiGraph delete_vertex(const MultiGraph& g, VertexId v);

// Edge set of a simple cycle: one connected component, every incident vertex of
// degree two (a loop alone qualifies).
bool is_simple_cycle_edge_set(const MultiGraph& g, const std::set<std::string>& labels);

}  // namespace spancirc
