#include "spancirc/toolkit.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace spancirc {

namespace {

bool ls_subset(const LabelSet& a, const LabelSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Column rank of a label subset, by plain elimination over column vectors.
bool subset_dependent(const std::vector<std::uint32_t>& cols, std::uint32_t mask) {
    std::vector<std::uint32_t> basis;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (!(mask & (std::uint32_t{1} << i))) continue;
        std::uint32_t v = cols[i];
        for (std::uint32_t b : basis) v = std::min(v, v ^ b);
        if (v == 0) return true;
        basis.push_back(v);
        std::sort(basis.rbegin(), basis.rend());
    }
    return false;
}

}  // namespace

std::vector<LabelSet> oracle_circuits(const BinaryMatroid& m) {
    const std::size_t n = m.size();
    if (n > 24) throw std::invalid_argument("oracle capped at 24 elements");
    if (m.matrix.rows > 32) throw std::invalid_argument("oracle capped at 32 rows");
    std::vector<std::uint32_t> cols(n, 0);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < m.matrix.rows; ++r)
            if (m.matrix.get(r, c)) cols[c] |= std::uint32_t{1} << r;

    std::vector<std::uint32_t> found;
    std::vector<LabelSet> out;
    // Size-increasing combinations; a candidate containing a known circuit is
    // skipped, so any remaining dependent set is minimal.
    for (std::size_t s = 1; s <= n; ++s) {
        std::vector<std::size_t> pick(s);
        for (std::size_t i = 0; i < s; ++i) pick[i] = i;
        for (;;) {
            std::uint32_t mask = 0;
            for (std::size_t i : pick) mask |= std::uint32_t{1} << i;
            bool pruned = false;
            for (std::uint32_t c : found)
                if ((c & mask) == c) { pruned = true; break; }
            if (!pruned && subset_dependent(cols, mask)) {
                found.push_back(mask);
                LabelSet labels;
                for (std::size_t i : pick) labels.insert(m.labels[i]);
                out.push_back(labels);
            }
            std::size_t i = s;
            while (i > 0 && pick[i - 1] == n - (s - i) - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < s; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return out;
}

std::set<std::set<std::string>> oracle_simple_cycles(const MultiGraph& g) {
    std::set<std::set<std::string>> out;
    for (const auto& e : g.edges)
        if (e.is_loop()) out.insert({e.label});
    std::function<void(VertexId, VertexId, std::set<VertexId>&, std::set<std::string>&)> go =
        [&](VertexId start, VertexId at, std::set<VertexId>& used_v, std::set<std::string>& used_e) {
            for (const auto& e : g.edges) {
                if (e.is_loop() || used_e.count(e.label)) continue;
                VertexId other;
                if (e.u == at) other = e.v;
                else if (e.v == at) other = e.u;
                else continue;
                if (other == start) {
                    if (!used_e.empty()) {
                        auto cyc = used_e;
                        cyc.insert(e.label);
                        out.insert(cyc);
                    }
                    continue;
                }
                if (used_v.count(other) || other < start) continue;
                used_v.insert(other);
                used_e.insert(e.label);
                go(start, other, used_v, used_e);
                used_v.erase(other);
                used_e.erase(e.label);
            }
        };
    for (VertexId s : g.verts) {
        std::set<VertexId> used_v{s};
        std::set<std::string> used_e;
        go(s, s, used_v, used_e);
    }
    return out;
}

OracleVerdict oracle_wmsc(const BinaryMatroid& m, const std::map<std::string, Weight>& w,
                          const LabelSet& terminals, Weight ell) {
    OracleVerdict out;
    for (const auto& c : oracle_circuits(m)) {
        if (!ls_subset(terminals, c)) continue;
        Weight total = 0;
        for (const auto& e : c) total += w.at(e);
        if (!out.optimum || total < *out.optimum) out.optimum = total;
    }
    out.yes = out.optimum && *out.optimum <= ell;
    return out;
}

OracleVerdict oracle_sc(const BinaryMatroid& m, const LabelSet& terminals) {
    OracleVerdict out;
    for (const auto& c : oracle_circuits(m)) {
        if (!ls_subset(terminals, c)) continue;
        Weight size = static_cast<Weight>(c.size());
        if (!out.optimum || size < *out.optimum) out.optimum = size;
    }
    out.yes = out.optimum.has_value();
    return out;
}

OracleVerdict oracle_emwc(const EmwcInstance& inst) {
    OracleVerdict out;
    const MultiGraph& g = inst.g;
    if (g.n() > 20) throw std::invalid_argument("oracle capped at 20 vertices");
    for (VertexId v : inst.r1)
        if (inst.r2.count(v)) return out;
    const std::size_t n = g.n();
    EmwcInstance relaxed = inst;
    relaxed.k = INT64_MAX / 2;
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
        std::set<VertexId> a;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::uint64_t{1} << i)) a.insert(g.verts[i]);
        auto cut = crossing_edges(g, a);
        if (cut.empty()) continue;
        if (!emwc_solution_ok(relaxed, cut)) continue;
        Weight extra = 0;
        for (const auto& l : cut)
            if (!inst.terminals.count(l)) extra += g.edge(l).weight;
        if (!out.optimum || extra < *out.optimum) out.optimum = extra;
    }
    out.yes = out.optimum && *out.optimum <= inst.k;
    return out;
}

OracleVerdict oracle_ctse(const CtseInstance& inst) {
    OracleVerdict out;
    for (const auto& cyc : oracle_simple_cycles(inst.g)) {
        bool has = true;
        for (const auto& t : inst.terminals)
            if (!cyc.count(t)) has = false;
        if (!has) continue;
        Weight extra = ctse_extra_weight(inst.g, inst.terminals, cyc);
        if (!out.optimum || extra < *out.optimum) out.optimum = extra;
    }
    out.yes = out.optimum && *out.optimum <= inst.k;
    return out;
}

OracleVerdict oracle_ewmsc(const BinaryMatroid& m, const WmscCore& core) {
    OracleVerdict out;
    for (const auto& c : oracle_circuits(m)) {
        if (!wmsc_feasible(m, core, c)) continue;
        Weight omega = wmsc_weight(core, c);
        if (!out.optimum || omega < *out.optimum) out.optimum = omega;
    }
    out.yes = out.optimum.has_value();
    return out;
}

OracleVerdict oracle_esc(const BinaryMatroid& m, const ScCore& core) {
    OracleVerdict out;
    for (const auto& c : oracle_circuits(m)) {
        if (!esc_feasible(m, core, c)) continue;
        Weight size = static_cast<Weight>(c.size());
        if (!out.optimum || size < *out.optimum) out.optimum = size;
    }
    out.yes = out.optimum.has_value();
    return out;
}

MultiGraph gen_random_graph(std::uint64_t seed, int vertices, int extra_edges, int max_weight,
                            bool allow_loops) {
    std::mt19937_64 rng(seed);
    std::vector<VertexId> vs;
    for (int i = 0; i < vertices; ++i) vs.push_back(i);
    std::vector<GraphEdge> es;
    int idx = 1;
    auto w = [&]() { return 1 + static_cast<Weight>(rng() % std::max(1, max_weight)); };
    for (int i = 1; i < vertices; ++i)
        es.push_back({"e" + std::to_string(idx++), static_cast<int>(rng() % i), i, w()});
    for (int t = 0; t < extra_edges; ++t) {
        int u = static_cast<int>(rng() % vertices);
        int v = static_cast<int>(rng() % vertices);
        if (u == v && !allow_loops) continue;
        es.push_back({"e" + std::to_string(idx++), u, v, w()});
    }
    return MultiGraph(vs, es);
}

namespace {

struct TreeBuilder {
    std::mt19937_64 rng;
    int fresh = 0;

    std::string label() { return "g" + std::to_string(fresh++); }

    // A small connected graph that always contains the triangle 0-1-2, with its
    // three edges labeled as requested.
    MultiGraph graph_with_triangle(const std::string& z1, const std::string& z2,
                                   const std::string& z3, int extra) {
        std::vector<VertexId> vs{0, 1, 2, 3};
        std::vector<GraphEdge> es{{z1, 0, 1, 1}, {z2, 1, 2, 1}, {z3, 0, 2, 1},
                                  {label(), 0, 3, 1}, {label(), 1, 3, 1}};
        for (int i = 0; i < extra; ++i) {
            int u = static_cast<int>(rng() % 4), v = static_cast<int>(rng() % 4);
            if (u == v) continue;
            es.push_back({label(), u, v, 1});
        }
        return MultiGraph(vs, es);
    }

    // Two connected blobs joined by exactly three labeled edges: the triple is
    // a minimal cut-set, hence a circuit of the bond matroid.
    MultiGraph graph_with_tricut(const std::string& z1, const std::string& z2,
                                 const std::string& z3) {
        std::vector<VertexId> vs{0, 1, 2, 3, 4, 5};
        std::vector<GraphEdge> es{{label(), 0, 1, 1}, {label(), 1, 2, 1}, {label(), 0, 2, 1},
                                  {label(), 3, 4, 1}, {label(), 4, 5, 1}, {label(), 3, 5, 1},
                                  {z1, 0, 3, 1},      {z2, 1, 4, 1},      {z3, 2, 5, 1}};
        return MultiGraph(vs, es);
    }

    MultiGraph small_graph(const std::optional<std::string>& shared_edge) {
        int n = 3 + static_cast<int>(rng() % 3);
        std::vector<VertexId> vs;
        for (int i = 0; i < n; ++i) vs.push_back(i);
        std::vector<GraphEdge> es;
        for (int i = 1; i < n; ++i)
            es.push_back({label(), static_cast<int>(rng() % i), i, 1});
        int extra = 1 + static_cast<int>(rng() % 3);
        for (int t = 0; t < extra; ++t) {
            int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
            if (u == v) continue;
            es.push_back({label(), u, v, 1});
        }
        if (shared_edge) {
            // Rename a random non-bridge edge so the shared element avoids
            // degenerate sums; fall back to adding a parallel edge.
            MultiGraph g(vs, es);
            std::vector<std::size_t> candidates;
            for (std::size_t i = 0; i < g.edges.size(); ++i) {
                if (g.edges[i].is_loop()) continue;
                if (components(delete_edges(g, {g.edges[i].label})).size() == 1)
                    candidates.push_back(i);
            }
            if (candidates.empty()) {
                const GraphEdge& e = g.edges[0];
                es.push_back({*shared_edge, e.u, e.v, 1});
            } else {
                es[candidates[rng() % candidates.size()]].label = *shared_edge;
            }
        }
        return MultiGraph(vs, es);
    }

    static bool is_r10_base(const std::string& l) {
        if (l.size() < 2 || l[0] != 'r') return false;
        int v = 0;
        for (std::size_t i = 1; i < l.size(); ++i) {
            if (!isdigit(static_cast<unsigned char>(l[i]))) return false;
            v = v * 10 + (l[i] - '0');
        }
        return v >= 1 && v <= 10;
    }

    BasicNode random_node(const std::optional<std::string>& shared_edge, bool allow_r10) {
        // A shared label colliding with r1..r10 cannot be realized as an added
        // parallel, so such draws fall through to the graph kinds.
        if (shared_edge && is_r10_base(*shared_edge)) allow_r10 = false;
        for (;;) {
            switch (rng() % 3) {
                case 0: return BasicNode::make_graphic(small_graph(shared_edge));
                case 1: return BasicNode::make_cographic(small_graph(shared_edge));
                default: {
                    if (!allow_r10) continue;
                    R10Edits edits;
                    int dels = static_cast<int>(rng() % 3);
                    for (int i = 0; i < dels; ++i)
                        edits.deleted.push_back("r" + std::to_string(1 + rng() % 10));
                    std::sort(edits.deleted.begin(), edits.deleted.end());
                    edits.deleted.erase(std::unique(edits.deleted.begin(), edits.deleted.end()),
                                        edits.deleted.end());
                    if (shared_edge) {
                        std::string of = "r" + std::to_string(1 + rng() % 10);
                        while (std::count(edits.deleted.begin(), edits.deleted.end(), of))
                            of = "r" + std::to_string(1 + rng() % 10);
                        edits.parallels.push_back({of, *shared_edge});
                    }
                    return BasicNode::make_r10(edits);
                }
            }
        }
    }
};

}  // namespace

ConflictTree gen_random_tree(std::uint64_t seed, int node_budget, int size_budget) {
    TreeBuilder b{std::mt19937_64(seed)};
    ConflictTree t;

    auto ground_size = [&]() {
        return static_cast<int>(tree_ground_labels(t).size());
    };
    auto node_has_label = [&](const BasicNode& n, const std::string& l) {
        return n.matroid.has_label(l);
    };

    // R10 nodes reuse the canonical labels r1..r10, so at most one plain R10
    // node may appear; further r10-derived nodes would collide.  Track that.
    bool used_r10 = false;
    auto make_node = [&](const std::optional<std::string>& shared) {
        BasicNode n = b.random_node(shared, !used_r10);
        if (n.kind == NodeKind::r10_derived) used_r10 = true;
        return n;
    };

    t.nodes.push_back(make_node(std::nullopt));
    while (static_cast<int>(t.nodes.size()) < node_budget && ground_size() < size_budget) {
        // Pick a parent and a sum type it supports.
        std::size_t parent = b.rng() % t.nodes.size();
        const BasicNode& pn = t.nodes[parent];
        int sum_type = 1 + static_cast<int>(b.rng() % 3);

        // Labels already shared with someone else cannot be shared again.
        std::set<std::string> taken;
        for (const auto& e : t.edges)
            taken.insert(e.shared.begin(), e.shared.end());

        if (sum_type == 3) {
            // Need a 3-circuit of the parent with unshared labels.
            std::optional<std::vector<std::string>> triple;
            if (pn.kind != NodeKind::r10_derived) {
                for (const auto& c : enumerate_circuits(pn.matroid, 3)) {
                    if (c.count() != 3) continue;
                    auto labs = pn.matroid.labels_of(c);
                    bool free = true;
                    for (const auto& l : labs)
                        if (taken.count(l)) free = false;
                    if (free) { triple = labs; break; }
                }
            }
            if (!triple) {
                sum_type = 1 + static_cast<int>(b.rng() % 2);
            } else {
                BasicNode child = b.rng() % 2 == 0
                                      ? BasicNode::make_graphic(b.graph_with_triangle(
                                            (*triple)[0], (*triple)[1], (*triple)[2],
                                            static_cast<int>(b.rng() % 3)))
                                      : BasicNode::make_cographic(b.graph_with_tricut(
                                            (*triple)[0], (*triple)[1], (*triple)[2]));
                t.edges.push_back({parent, t.nodes.size(), *triple});
                t.nodes.push_back(std::move(child));
                continue;
            }
        }
        if (sum_type == 2) {
            // Mirror the original 2-sum side conditions: never share a loop or
            // coloop of the parent.
            std::vector<std::string> candidates;
            const BinaryMatroid& pm = pn.matroid;
            std::size_t full_rank = gf2_rank(pm.matrix);
            for (const auto& l : pm.labels) {
                if (taken.count(l)) continue;
                ElementSet single = pm.singleton(l);
                if (!is_independent(pm, single)) continue;  // loop
                BinaryMatroid without = delete_elements(pm, single);
                if (gf2_rank(without.matrix) < full_rank) continue;  // coloop
                candidates.push_back(l);
            }
            if (candidates.empty()) sum_type = 1;
            else {
                std::string shared = candidates[b.rng() % candidates.size()];
                BasicNode child = make_node(shared);
                if (!node_has_label(child, shared)) throw std::logic_error("shared label missing");
                t.edges.push_back({parent, t.nodes.size(), {shared}});
                t.nodes.push_back(std::move(child));
                continue;
            }
        }
        // 1-sum: disjoint child.
        t.edges.push_back({parent, t.nodes.size(), {}});
        t.nodes.push_back(make_node(std::nullopt));
    }
    Validation v = validate(t);
    if (!v.ok) throw std::logic_error("generated tree fails validation: " + v.message);
    return t;
}

CliqueReductionInstance gen_clique_reduction(const MultiGraph& g, int k,
                                             const std::vector<std::set<VertexId>>& partition) {
    const int n = static_cast<int>(g.n());
    // d-regularity.
    std::map<VertexId, int> deg;
    for (const auto& e : g.edges) {
        if (e.is_loop()) throw std::invalid_argument("input graph must be loopless");
        deg[e.u] += 1;
        deg[e.v] += 1;
    }
    int d = -1;
    for (VertexId v : g.verts) {
        int dv = deg.count(v) ? deg[v] : 0;
        if (d == -1) d = dv;
        if (dv != d) throw std::invalid_argument("input graph must be regular");
    }
    // The source asks for k < d < n-1; d = n-1 (complete graphs) is accepted
    // here so K4-style instances can be generated.
    if (!(k < d && d < n)) throw std::invalid_argument("need k < d <= n - 1");
    if (static_cast<int>(partition.size()) != k)
        throw std::invalid_argument("partition must have k classes");
    {
        std::set<VertexId> all;
        for (const auto& cls : partition)
            for (VertexId v : cls)
                if (!all.insert(v).second)
                    throw std::invalid_argument("partition classes must be disjoint");
        if (all != std::set<VertexId>(g.verts.begin(), g.verts.end()))
            throw std::invalid_argument("partition must cover V(G)");
    }

    // H: a copy of G; selector vertices v_i over the classes; an n-clique x_j
    // joined to all of V(G); a 2n^2-clique y_j joined to the x's; terminal
    // edges y_1 v_i.
    const int p = 2 * n * n;
    std::vector<VertexId> vs = g.verts;
    VertexId base = *std::max_element(g.verts.begin(), g.verts.end()) + 1;
    std::vector<VertexId> sel(k), xs(n), ys(p);
    for (int i = 0; i < k; ++i) vs.push_back(sel[i] = base++);
    for (int i = 0; i < n; ++i) vs.push_back(xs[i] = base++);
    for (int i = 0; i < p; ++i) vs.push_back(ys[i] = base++);

    std::vector<GraphEdge> es = g.edges;
    int idx = 0;
    auto add = [&](VertexId a, VertexId b, const std::string& name) {
        es.push_back({name, a, b, 1});
    };
    auto fresh = [&](const std::string& kind) { return kind + std::to_string(idx++); };
    for (int i = 0; i < k; ++i)
        for (VertexId u : partition[i]) add(sel[i], u, fresh("sel"));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) add(xs[i], xs[j], fresh("xx"));
    for (int i = 0; i < n; ++i)
        for (VertexId u : g.verts) add(xs[i], u, fresh("xg"));
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) add(ys[i], ys[j], fresh("yy"));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < n; ++j) add(ys[i], xs[j], fresh("yx"));
    CliqueReductionInstance out;
    for (int i = 0; i < k; ++i) {
        std::string t = "t" + std::to_string(i + 1);
        add(ys[0], sel[i], t);
        out.terminals.insert(t);
    }
    out.h = MultiGraph(vs, es);
    out.budget = n + static_cast<Weight>(n + d - k + 1) * k;
    if (!is_connected(out.h)) throw std::logic_error("reduction graph must be connected");
    return out;
}

}  // namespace spancirc
