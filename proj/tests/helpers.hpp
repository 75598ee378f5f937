#pragma once

#include "spancirc/decomp.hpp"
#include "spancirc/gf2.hpp"
#include "spancirc/graph.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

namespace spancirc::testing {

// Independent rank oracle: plain column-by-column elimination over bool grids,
// written without the library's bitset machinery.
inline int naive_rank(std::vector<std::vector<int>> a) {
    if (a.empty()) return 0;
    int rows = static_cast<int>(a.size()), cols = static_cast<int>(a[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int pivot = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c]) { pivot = i; break; }
        if (pivot < 0) continue;
        std::swap(a[r], a[pivot]);
        for (int i = 0; i < rows; ++i) {
            if (i == r || !a[i][c]) continue;
            for (int j = 0; j < cols; ++j) a[i][j] ^= a[r][j];
        }
        ++r;
    }
    return r;
}

inline std::vector<std::vector<int>> to_grid(const Gf2Matrix& m) {
    std::vector<std::vector<int>> g(m.rows, std::vector<int>(m.cols, 0));
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) g[r][c] = m.get(r, c) ? 1 : 0;
    return g;
}

inline MultiGraph triangle(const std::string& prefix = "e") {
    return MultiGraph({0, 1, 2}, {{prefix + "1", 0, 1, 1},
                                  {prefix + "2", 1, 2, 1},
                                  {prefix + "3", 0, 2, 1}});
}

inline MultiGraph cycle_graph(int n, const std::string& prefix = "e") {
    std::vector<VertexId> vs;
    std::vector<GraphEdge> es;
    for (int i = 0; i < n; ++i) {
        vs.push_back(i);
        es.push_back({prefix + std::to_string(i + 1), i, (i + 1) % n, 1});
    }
    return MultiGraph(vs, es);
}

inline MultiGraph complete_graph(int n, const std::string& prefix = "e") {
    std::vector<VertexId> vs;
    std::vector<GraphEdge> es;
    for (int i = 0; i < n; ++i) vs.push_back(i);
    int idx = 1;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            es.push_back({prefix + std::to_string(idx++), i, j, 1});
    return MultiGraph(vs, es);
}

inline MultiGraph path_graph(int n, const std::string& prefix = "e") {
    std::vector<VertexId> vs;
    std::vector<GraphEdge> es;
    for (int i = 0; i < n; ++i) vs.push_back(i);
    for (int i = 0; i + 1 < n; ++i) es.push_back({prefix + std::to_string(i + 1), i, i + 1, 1});
    return MultiGraph(vs, es);
}

// Random connected multigraph: spanning tree plus extra edges (parallels and
// loops allowed when asked for).
inline MultiGraph random_connected_graph(std::mt19937_64& rng, int n, int extra_edges,
                                         int max_weight = 1, bool allow_loops = true) {
    std::vector<VertexId> vs;
    for (int i = 0; i < n; ++i) vs.push_back(i);
    std::vector<GraphEdge> es;
    int idx = 1;
    auto w = [&]() { return 1 + static_cast<Weight>(rng() % max_weight); };
    for (int i = 1; i < n; ++i) {
        int j = static_cast<int>(rng() % i);
        es.push_back({"e" + std::to_string(idx++), j, i, w()});
    }
    for (int t = 0; t < extra_edges; ++t) {
        int u = static_cast<int>(rng() % n);
        int v = static_cast<int>(rng() % n);
        if (u == v && !allow_loops) continue;
        es.push_back({"e" + std::to_string(idx++), u, v, w()});
    }
    return MultiGraph(vs, es);
}

inline BinaryMatroid random_matroid(std::mt19937_64& rng, int rows, int cols) {
    Gf2Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (rng() & 1) m.set(r, c, true);
    std::vector<std::string> labels;
    for (int c = 0; c < cols; ++c) labels.push_back("e" + std::to_string(c + 1));
    return BinaryMatroid(std::move(m), std::move(labels));
}

inline std::set<std::set<std::string>> circuit_label_sets(const BinaryMatroid& m) {
    std::set<std::set<std::string>> out;
    for (const auto& c : enumerate_circuits(m)) {
        auto v = m.labels_of(c);
        out.insert(std::set<std::string>(v.begin(), v.end()));
    }
    return out;
}

}  // namespace spancirc::testing
