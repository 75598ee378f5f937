#pragma once

#include "spancirc/graph.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace spancirc {

// Minimum extra-weight cycle through prescribed edges: find a simple cycle C
// with T <= E(C) and w(E(C)) - w(T) <= k.
struct CtseInstance {
    MultiGraph g;
    std::set<std::string> terminals;
    std::int64_t k = 0;
};

enum class SearchMode { deterministic, randomized };

struct CtseOptions {
    SearchMode mode = SearchMode::deterministic;
    std::uint64_t seed = 1;
};

struct CtseStats {
    std::uint64_t colorings = 0;
    std::uint64_t dp_cells = 0;
};

std::optional<std::set<std::string>> solve_ctse(const CtseInstance& inst,
                                                const CtseOptions& opts = {},
                                                CtseStats* stats = nullptr);

Weight ctse_extra_weight(const MultiGraph& g, const std::set<std::string>& terminals,
                         const std::set<std::string>& cycle);

// Internals exposed for the dynamic-programming tables' own tests.

constexpr Weight kInfWeight = INT64_MAX / 4;

// Instance after the reduction rules: terminal edges form a matching.
struct CtsePrepared {
    MultiGraph g;
    std::vector<GraphEdge> terminals;        // x_i y_i, i = 0..r-1
    std::vector<VertexId> off_u;             // V(G) \ U
    std::map<VertexId, std::size_t> vindex;  // vertex -> dense index
};

CtsePrepared ctse_prepare(const MultiGraph& g, const std::set<std::string>& terminals);

struct PathTable {
    // val[mask][vertex index]; parent edge/vertex for reconstruction.
    std::vector<std::vector<Weight>> val;
    std::vector<std::vector<std::int32_t>> parent_vertex;
    std::vector<std::vector<std::int32_t>> parent_edge;
};

// s(X, u, .) of the color-coding recurrence for anchor endpoint u of terminal
// `anchor`, under `color` (values in [0,h)) on off-U vertices.
PathTable dp_paths(const CtsePrepared& p, const std::map<VertexId, int>& color, int h,
                   std::size_t anchor, VertexId u);

// Stitches per-terminal path tables into the minimum total weight of a colorful
// cycle through all terminals (kInfWeight when none); r >= 2.
Weight dp_stitch(const CtsePrepared& p, const std::map<VertexId, int>& color, int h,
                 std::set<std::string>* witness_out = nullptr, CtseStats* stats = nullptr);

}  // namespace spancirc
