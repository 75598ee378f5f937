#include "spancirc/solvers.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace spancirc {

namespace {

LabelSet ls_xor(const LabelSet& a, const LabelSet& b) {
    LabelSet out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::inserter(out, out.begin()));
    return out;
}

LabelSet ls_and(const LabelSet& a, const LabelSet& b) {
    LabelSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.begin()));
    return out;
}

bool ls_subset(const LabelSet& a, const LabelSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

LabelSet node_labels(const BasicNode& n) {
    return LabelSet(n.matroid.labels.begin(), n.matroid.labels.end());
}

ElementSet to_eset(const BinaryMatroid& m, const LabelSet& c) {
    return m.set_of(std::vector<std::string>(c.begin(), c.end()));
}

LabelSet union_of(const std::vector<LabelSet>& sets) {
    LabelSet out;
    for (const auto& s : sets) out.insert(s.begin(), s.end());
    return out;
}

}  // namespace

BinaryMatroid MatroidRef::full_matroid() const {
    if (node) return node->matroid;
    if (tree) return compose(*tree);
    throw std::logic_error("empty matroid reference");
}

std::set<std::string> MatroidRef::ground_labels() const {
    if (node) return node_labels(*node);
    if (tree) return tree_ground_labels(*tree);
    throw std::logic_error("empty matroid reference");
}

Weight wmsc_weight(const WmscCore& core, const LabelSet& c) {
    LabelSet l = union_of(core.triples);
    Weight total = 0;
    for (const auto& x : c) {
        if (core.terminals.count(x) || l.count(x)) continue;
        auto it = core.weights.find(x);
        if (it == core.weights.end()) return kInfWeight;
        total += it->second;
    }
    for (const auto& t : core.triples) {
        LabelSet i = ls_and(c, t);
        auto mw = core.menu_weights.find(t);
        if (mw == core.menu_weights.end()) return kInfWeight;
        auto it = mw->second.find(i);
        if (it == mw->second.end()) return kInfWeight;
        total += it->second;
    }
    return total;
}

bool wmsc_feasible(const BinaryMatroid& m, const WmscCore& core, const LabelSet& c) {
    for (const auto& x : c)
        if (!m.has_label(x)) return false;
    ElementSet cs = to_eset(m, c);
    if (!is_circuit(m, cs)) return false;
    if (!ls_subset(core.terminals, c)) return false;
    for (const auto& t : core.triples) {
        auto menu = core.menus.find(t);
        if (menu == core.menus.end() || !menu->second.count(ls_and(c, t))) return false;
    }
    if (core.z) {
        const auto& [zset, zt] = *core.z;
        if (ls_and(c, zset) != LabelSet{zt}) return false;
        if (!is_circuit(m, set_xor(cs, to_eset(m, zset)))) return false;
    }
    Weight w = wmsc_weight(core, c);
    return w <= core.budget;
}

bool esc_feasible(const BinaryMatroid& m, const ScCore& core, const LabelSet& c) {
    for (const auto& x : c)
        if (!m.has_label(x)) return false;
    ElementSet cs = to_eset(m, c);
    if (!is_circuit(m, cs)) return false;
    for (const auto& t : core.triples) {
        auto menu = core.menus.find(t);
        if (menu == core.menus.end() || !menu->second.count(ls_and(c, t))) return false;
    }
    if (core.z) {
        const auto& [zset, zt] = *core.z;
        if (ls_and(c, zset) != LabelSet{zt}) return false;
        if (!is_circuit(m, set_xor(cs, to_eset(m, zset)))) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Basic matroids: Extended Minimum Spanning Circuit.
// ---------------------------------------------------------------------------

SolveOutcome ewmsc_r10(const BasicNode& node, const WmscCore& core) {
    if (node.kind != NodeKind::r10_derived)
        throw std::invalid_argument("ewmsc_r10 needs an r10-derived node");
    // No odd circuits: any prescribed triple or pivot makes a no-instance.
    if (!core.triples.empty() || core.z) return SolveOutcome::no();
    if (core.budget < 0) return SolveOutcome::no();
    const BinaryMatroid& m = node.matroid;

    // Keep the cheapest of every nonterminal parallel class.
    std::map<std::vector<bool>, std::string> cheapest;
    auto colkey = [&](std::size_t c) {
        std::vector<bool> key(m.matrix.rows);
        for (std::size_t r = 0; r < m.matrix.rows; ++r) key[r] = m.matrix.get(r, c);
        return key;
    };
    for (std::size_t c = 0; c < m.size(); ++c) {
        const std::string& lab = m.labels[c];
        if (core.terminals.count(lab)) continue;
        auto key = colkey(c);
        auto it = cheapest.find(key);
        if (it == cheapest.end()) {
            cheapest[key] = lab;
            continue;
        }
        Weight wa = core.weights.at(it->second), wb = core.weights.at(lab);
        if (wb < wa || (wb == wa && lab < it->second)) it->second = lab;
    }
    std::vector<std::string> nonterm;
    for (auto& [key, lab] : cheapest) nonterm.push_back(lab);
    if (nonterm.size() > 10) throw std::logic_error("parallel reduction left more than 10 elements");

    SolveOutcome best = SolveOutcome::no();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nonterm.size()); ++mask) {
        LabelSet c(core.terminals);
        Weight w = 0;
        for (std::size_t i = 0; i < nonterm.size(); ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                c.insert(nonterm[i]);
                w += core.weights.at(nonterm[i]);
            }
        }
        if (w > core.budget || c.empty()) continue;
        if (!is_circuit(m, to_eset(m, c))) continue;
        if (!best.yes || w < *best.weight) best = SolveOutcome::found(c, w);
    }
    return best;
}

namespace {

// Enumerates every pick of one menu entry per triple whose menu weight fits.
void for_each_guess(const WmscCore& core,
                    const std::function<void(const std::vector<LabelSet>&, Weight)>& fn) {
    std::vector<LabelSet> pick(core.triples.size());
    std::function<void(std::size_t, Weight)> rec = [&](std::size_t i, Weight used) {
        if (used > core.budget) return;
        if (i == core.triples.size()) {
            fn(pick, used);
            return;
        }
        const LabelSet& x = core.triples[i];
        for (const auto& y : core.menus.at(x)) {
            pick[i] = y;
            rec(i + 1, used + core.menu_weights.at(x).at(y));
        }
    };
    rec(0, 0);
}

// The vertex of a graph triangle not incident to the edge t.
VertexId off_vertex_of_triangle(const MultiGraph& g, const LabelSet& z, const std::string& t) {
    std::map<VertexId, int> deg;
    for (const auto& l : z) {
        const GraphEdge& e = g.edge(l);
        deg[e.u] += 1;
        deg[e.v] += 1;
    }
    const GraphEdge& te = g.edge(t);
    for (const auto& [v, d] : deg)
        if (v != te.u && v != te.v) return v;
    throw std::invalid_argument("pivot triple does not span a triangle");
}

CtseOptions ctse_opts(const SolveOptions& o) { return CtseOptions{o.mode, o.seed}; }

EmwcOptions emwc_opts(const SolveOptions& o) {
    EmwcOptions e;
    e.mode = o.mode;
    e.seed = o.seed;
    e.params = o.emwc_params;
    return e;
}

}  // namespace

SolveOutcome ewmsc_graphic(const BasicNode& node, const WmscCore& core, const SolveOptions& opts) {
    if (node.kind != NodeKind::graphic)
        throw std::invalid_argument("ewmsc_graphic needs a graphic node");
    if (core.budget < 0) return SolveOutcome::no();
    if (static_cast<std::int64_t>(core.triples.size()) > core.budget) return SolveOutcome::no();
    const MultiGraph& g = node.graph;
    const LabelSet l = union_of(core.triples);

    SolveOutcome result = SolveOutcome::no();
    for_each_guess(core, [&](const std::vector<LabelSet>& pick, Weight used) {
        if (result.yes) return;
        LabelSet chosen = union_of(pick);
        LabelSet removed;
        for (const auto& x : l)
            if (!chosen.count(x)) removed.insert(x);
        MultiGraph g1 = delete_edges(g, removed);
        LabelSet t1 = core.terminals;
        t1.insert(chosen.begin(), chosen.end());
        std::int64_t k1 = core.budget - used;

        if (core.z) {
            const auto& [zset, zt] = *core.z;
            VertexId u = off_vertex_of_triangle(g1, zset, zt);
            bool blocked = false;
            for (const auto& lab : t1) {
                const GraphEdge& e = g1.edge(lab);
                if (e.u == u || e.v == u) blocked = true;
            }
            if (blocked) return;
            k1 -= core.weights.at(zt);
            if (k1 < 0) return;
            t1.insert(zt);
            g1 = delete_vertex(g1, u);
        }

        // Reweight: menu elements carry their cost through the guess itself.
        std::vector<GraphEdge> edges;
        for (const auto& e : g1.edges) {
            GraphEdge e2 = e;
            e2.weight = l.count(e.label) ? 1 : core.weights.at(e.label);
            edges.push_back(e2);
        }
        MultiGraph g2(g1.verts, edges);
        auto cyc = solve_ctse({g2, std::set<std::string>(t1.begin(), t1.end()), k1},
                              ctse_opts(opts));
        if (!cyc) return;
        LabelSet c(cyc->begin(), cyc->end());
        Weight omega = wmsc_weight(core, c);
        if (!wmsc_feasible(node.matroid, core, c))
            throw std::logic_error("graphic reduction produced an infeasible witness");
        result = SolveOutcome::found(c, omega);
    });
    return result;
}

namespace {

// Splits a disconnected realizing graph: a bond-matroid circuit lives inside a
// single component.
template <typename Fn>
SolveOutcome cographic_by_component(const BasicNode& node, const LabelSet& anchors,
                                    Fn solve_connected) {
    auto comps = components(node.graph);
    if (comps.size() == 1) return solve_connected(node);
    auto induced_node = [&](const std::set<VertexId>& vs) {
        std::vector<VertexId> verts(vs.begin(), vs.end());
        std::vector<GraphEdge> edges;
        for (const auto& e : node.graph.edges)
            if (vs.count(e.u) && vs.count(e.v)) edges.push_back(e);
        return BasicNode::make_cographic(MultiGraph(verts, edges));
    };
    std::vector<std::size_t> holding;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        bool has = false;
        for (const auto& e : node.graph.edges)
            if (comps[i].count(e.u) && anchors.count(e.label)) has = true;
        if (has) holding.push_back(i);
    }
    if (holding.size() > 1) return SolveOutcome::no();
    if (holding.size() == 1) return solve_connected(induced_node(comps[holding[0]]));
    for (const auto& comp : comps) {
        SolveOutcome r = solve_connected(induced_node(comp));
        if (r.yes) return r;
    }
    return SolveOutcome::no();
}

}  // namespace

SolveOutcome ewmsc_cographic(const BasicNode& node, const WmscCore& core,
                             const SolveOptions& opts) {
    if (node.kind != NodeKind::cographic)
        throw std::invalid_argument("ewmsc_cographic needs a cographic node");
    if (core.budget < 0) return SolveOutcome::no();
    if (static_cast<std::int64_t>(core.triples.size()) > core.budget) return SolveOutcome::no();

    LabelSet anchors = core.terminals;
    for (const auto& x : core.triples) anchors.insert(x.begin(), x.end());
    if (core.z) anchors.insert(core.z->first.begin(), core.z->first.end());
    auto solve_connected = [&](const BasicNode& n) -> SolveOutcome {
        const MultiGraph& g = n.graph;
        const LabelSet l = union_of(core.triples);
        SolveOutcome result = SolveOutcome::no();
        for_each_guess(core, [&](const std::vector<LabelSet>& pick, Weight used) {
            if (result.yes) return;
            Weight s = used;
            if (core.z) s += core.weights.at(core.z->second);
            if (s > core.budget) return;
            LabelSet chosen = union_of(pick);
            MultiGraph g1 = g;
            std::map<VertexId, VertexId> vmap;
            for (VertexId v : g.verts) vmap[v] = v;
            for (const auto& x : l) {
                if (chosen.count(x)) continue;
                Contraction c = contract_edge(g1, x);
                g1 = c.graph;
                for (auto& [orig, cur] : vmap) cur = c.vertex_map.at(cur);
            }
            LabelSet t1 = core.terminals;
            t1.insert(chosen.begin(), chosen.end());
            std::set<VertexId> r1;
            if (core.z) {
                const auto& [zset, zt] = *core.z;
                t1.insert(zt);
                for (const auto& lab : zset) {
                    if (lab == zt) continue;
                    const GraphEdge& e = g.edge(lab);
                    r1.insert(vmap.at(e.u));
                    r1.insert(vmap.at(e.v));
                }
            }
            std::vector<GraphEdge> edges;
            for (const auto& e : g1.edges) {
                GraphEdge e2 = e;
                e2.weight = (l.count(e.label) || t1.count(e.label)) ? 1 : core.weights.at(e.label);
                edges.push_back(e2);
            }
            MultiGraph g2(g1.verts, edges);
            EmwcInstance inst{g2, std::set<std::string>(t1.begin(), t1.end()), r1, {},
                              core.budget - s};
            auto cut = solve_emwc(inst, emwc_opts(opts));
            if (!cut) return;
            LabelSet c(cut->begin(), cut->end());
            if (!wmsc_feasible(node.matroid, core, c))
                throw std::logic_error("cographic reduction produced an infeasible witness");
            result = SolveOutcome::found(c, wmsc_weight(core, c));
        });
        return result;
    };
    return cographic_by_component(node, anchors, solve_connected);
}

// ---------------------------------------------------------------------------
// Basic matroids: Extended Spanning Circuit.
// ---------------------------------------------------------------------------

SolveOutcome esc_r10(const BasicNode& node, const ScCore& core) {
    if (node.kind != NodeKind::r10_derived)
        throw std::invalid_argument("esc_r10 needs an r10-derived node");
    if (core.z) return SolveOutcome::no();
    if (core.triples.size() > 10) return SolveOutcome::no();
    const BinaryMatroid& m = node.matroid;
    const LabelSet y = union_of(core.triples);

    // Deduplicate parallel elements outside Y.
    std::map<std::vector<bool>, std::string> rep;
    for (std::size_t c = 0; c < m.size(); ++c) {
        const std::string& lab = m.labels[c];
        if (y.count(lab)) continue;
        std::vector<bool> key(m.matrix.rows);
        for (std::size_t r = 0; r < m.matrix.rows; ++r) key[r] = m.matrix.get(r, c);
        auto it = rep.find(key);
        if (it == rep.end() || lab < it->second) rep[key] = lab;
    }
    std::vector<std::string> rest;
    for (auto& [key, lab] : rep) rest.push_back(lab);
    if (rest.size() + y.size() > 40) throw std::logic_error("parallel dedup left over 40 elements");
    const std::size_t max_circuit = gf2_rank(m.matrix) + 1;

    // Guess representatives, then pad with deduplicated elements.
    std::vector<LabelSet> pick(core.triples.size());
    SolveOutcome result = SolveOutcome::no();
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (result.yes) return;
        if (i == core.triples.size()) {
            LabelSet u = union_of(pick);
            if (u.size() > max_circuit) return;
            const std::size_t room = max_circuit - u.size();
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rest.size()); ++mask) {
                if (static_cast<std::size_t>(__builtin_popcountll(mask)) > room) continue;
                LabelSet c = u;
                for (std::size_t j = 0; j < rest.size(); ++j)
                    if (mask & (std::uint64_t{1} << j)) c.insert(rest[j]);
                if (c.empty()) continue;
                if (!is_circuit(m, to_eset(m, c))) continue;
                if (!esc_feasible(m, core, c)) continue;
                result = SolveOutcome::found(c, static_cast<Weight>(c.size()));
                return;
            }
            return;
        }
        for (const auto& s : core.menus.at(core.triples[i])) {
            pick[i] = s;
            rec(i + 1);
        }
    };
    rec(0);
    return result;
}

SolveOutcome esc_graphic(const BasicNode& node, const ScCore& core, const SolveOptions& opts) {
    if (node.kind != NodeKind::graphic)
        throw std::invalid_argument("esc_graphic needs a graphic node");
    const MultiGraph& g = node.graph;
    const LabelSet l = union_of(core.triples);

    std::vector<LabelSet> pick(core.triples.size());
    SolveOutcome result = SolveOutcome::no();
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (result.yes) return;
        if (i == core.triples.size()) {
            LabelSet chosen = union_of(pick);
            LabelSet removed;
            for (const auto& x : l)
                if (!chosen.count(x)) removed.insert(x);
            MultiGraph g1 = delete_edges(g, removed);
            LabelSet t1 = chosen;
            if (core.z) {
                const auto& [zset, zt] = *core.z;
                VertexId u = off_vertex_of_triangle(g1, zset, zt);
                bool blocked = false;
                for (const auto& lab : t1) {
                    const GraphEdge& e = g1.edge(lab);
                    if (e.u == u || e.v == u) blocked = true;
                }
                if (blocked) return;
                t1.insert(zt);
                g1 = delete_vertex(g1, u);
            }
            std::vector<GraphEdge> edges;
            for (const auto& e : g1.edges)
                edges.push_back({e.label, e.u, e.v, 1});
            MultiGraph g2(g1.verts, edges);
            auto cyc = solve_ctse({g2, std::set<std::string>(t1.begin(), t1.end()),
                                   static_cast<std::int64_t>(g2.n())},
                                  ctse_opts(opts));
            if (!cyc) return;
            LabelSet c(cyc->begin(), cyc->end());
            if (!esc_feasible(node.matroid, core, c))
                throw std::logic_error("graphic reduction produced an infeasible witness");
            result = SolveOutcome::found(c, static_cast<Weight>(c.size()));
            return;
        }
        for (const auto& s : core.menus.at(core.triples[i])) {
            pick[i] = s;
            rec(i + 1);
        }
    };
    rec(0);
    return result;
}

SolveOutcome esc_cographic(const BasicNode& node, const ScCore& core, const SolveOptions& opts) {
    if (node.kind != NodeKind::cographic)
        throw std::invalid_argument("esc_cographic needs a cographic node");
    (void)opts;
    LabelSet anchors;
    for (const auto& x : core.triples) anchors.insert(x.begin(), x.end());
    if (core.z) anchors.insert(core.z->first.begin(), core.z->first.end());

    auto solve_connected = [&](const BasicNode& n) -> SolveOutcome {
        const MultiGraph& g = n.graph;
        const LabelSet l = union_of(core.triples);
        std::vector<LabelSet> pick(core.triples.size());
        SolveOutcome result = SolveOutcome::no();
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (result.yes) return;
            if (i == core.triples.size()) {
                LabelSet chosen = union_of(pick);
                MultiGraph g1 = g;
                std::map<VertexId, VertexId> vmap;
                for (VertexId v : g.verts) vmap[v] = v;
                for (const auto& x : l) {
                    if (chosen.count(x)) continue;
                    Contraction c = contract_edge(g1, x);
                    g1 = c.graph;
                    for (auto& [orig, cur] : vmap) cur = c.vertex_map.at(cur);
                }
                LabelSet t1 = chosen;
                if (core.z) t1.insert(core.z->second);
                for (const auto& lab : t1)
                    if (g1.edge(lab).is_loop()) return;  // no minimal cut holds a loop

                // Guess sides of the terminal endpoints.
                std::vector<std::string> tlist(t1.begin(), t1.end());
                for (std::uint64_t omask = 0; omask < (std::uint64_t{1} << tlist.size());
                     ++omask) {
                    std::set<VertexId> ta, tb;
                    bool conflict = false;
                    for (std::size_t j = 0; j < tlist.size(); ++j) {
                        const GraphEdge& e = g1.edge(tlist[j]);
                        VertexId to_a = (omask & (std::uint64_t{1} << j)) ? e.u : e.v;
                        VertexId to_b = (omask & (std::uint64_t{1} << j)) ? e.v : e.u;
                        ta.insert(to_a);
                        tb.insert(to_b);
                    }
                    if (core.z) {
                        for (const auto& lab : core.z->first) {
                            if (lab == core.z->second) continue;
                            const GraphEdge& e = g1.edge(lab);
                            tb.insert(vmap.at(g.edge(lab).u));
                            tb.insert(vmap.at(g.edge(lab).v));
                            (void)e;
                        }
                    }
                    for (VertexId v : ta)
                        if (tb.count(v)) conflict = true;
                    if (conflict) continue;
                    // Exhaustive 2-colorings with connected sides.
                    const std::size_t nn = g1.n();
                    if (nn > 24) throw std::invalid_argument("cographic search capped at 24 vertices");
                    for (std::uint64_t am = 0; am < (std::uint64_t{1} << nn); ++am) {
                        std::set<VertexId> a;
                        for (std::size_t vi = 0; vi < nn; ++vi)
                            if (am & (std::uint64_t{1} << vi)) a.insert(g1.verts[vi]);
                        if (a.empty() || a.size() == nn) continue;
                        bool ok = true;
                        for (VertexId v : ta)
                            if (!a.count(v)) ok = false;
                        for (VertexId v : tb)
                            if (a.count(v)) ok = false;
                        if (!ok) continue;
                        auto cut = crossing_edges(g1, a);
                        if (cut.empty()) continue;
                        if (!is_minimal_cutset(g1, cut)) continue;
                        LabelSet c(cut.begin(), cut.end());
                        if (!esc_feasible(node.matroid, core, c)) continue;
                        result = SolveOutcome::found(c, static_cast<Weight>(c.size()));
                        return;
                    }
                }
                return;
            }
            for (const auto& s : core.menus.at(core.triples[i])) {
                pick[i] = s;
                rec(i + 1);
            }
        };
        rec(0);
        return result;
    };
    return cographic_by_component(node, anchors, solve_connected);
}

// ---------------------------------------------------------------------------
// Conflict-tree machinery shared by both problems.
// ---------------------------------------------------------------------------

namespace {

struct LeafInfo {
    std::size_t parent = 0;
    LabelSet shared;
};

LeafInfo leaf_info(const ConflictTree& t, std::size_t leaf) {
    std::optional<LeafInfo> found;
    for (const auto& e : t.edges) {
        if (e.a != leaf && e.b != leaf) continue;
        if (found) throw std::invalid_argument("node is not a leaf");
        found = LeafInfo{e.a == leaf ? e.b : e.a, LabelSet(e.shared.begin(), e.shared.end())};
    }
    if (!found) throw std::invalid_argument("node has no tree edge");
    return *found;
}

SolveOutcome dispatch_wmsc(const BasicNode& node, const WmscCore& core, const SolveOptions& opts) {
    switch (node.kind) {
        case NodeKind::r10_derived: return ewmsc_r10(node, core);
        case NodeKind::graphic: return ewmsc_graphic(node, core, opts);
        case NodeKind::cographic: return ewmsc_cographic(node, core, opts);
    }
    throw std::logic_error("unreachable");
}

SolveOutcome dispatch_esc(const BasicNode& node, const ScCore& core, const SolveOptions& opts) {
    switch (node.kind) {
        case NodeKind::r10_derived: return esc_r10(node, core);
        case NodeKind::graphic: return esc_graphic(node, core, opts);
        case NodeKind::cographic: return esc_cographic(node, core, opts);
    }
    throw std::logic_error("unreachable");
}

// Minimum budget in [lo, hi] making the basic instance feasible.
struct Sweep {
    std::optional<std::int64_t> budget;
    LabelSet witness;
};

Sweep sweep_min_budget(const BasicNode& node, WmscCore core, std::int64_t lo, std::int64_t hi,
                       const SolveOptions& opts) {
    for (std::int64_t b = lo; b <= hi; ++b) {
        core.budget = b;
        SolveOutcome r = dispatch_wmsc(node, core, opts);
        if (r.yes) return Sweep{b, *r.witness};
    }
    return {};
}

std::map<std::string, Weight> restrict_weights(const std::map<std::string, Weight>& w,
                                               const LabelSet& keep) {
    std::map<std::string, Weight> out;
    for (const auto& [k, v] : w)
        if (keep.count(k)) out[k] = v;
    return out;
}

}  // namespace

std::size_t pick_leaf(const ConflictTree& t, std::size_t root) {
    if (t.nodes.size() < 2) throw std::invalid_argument("tree has no removable leaf");
    std::vector<int> depth(t.nodes.size(), -1);
    std::vector<int> degree(t.nodes.size(), 0);
    for (const auto& e : t.edges) {
        degree[e.a] += 1;
        degree[e.b] += 1;
    }
    std::vector<std::size_t> queue{root};
    depth[root] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        std::size_t at = queue[i];
        for (const auto& e : t.edges) {
            std::size_t other = e.a == at ? e.b : e.a == at || e.b == at ? e.a : at;
            if (e.a != at && e.b != at) continue;
            other = e.a == at ? e.b : e.a;
            if (depth[other] == -1) {
                depth[other] = depth[at] + 1;
                queue.push_back(other);
            }
        }
    }
    std::size_t best = SIZE_MAX;
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        if (i == root || degree[i] != 1) continue;
        if (best == SIZE_MAX || depth[i] > depth[best]) best = i;
    }
    if (best == SIZE_MAX) throw std::logic_error("no leaf found");
    return best;
}

// ---------------------------------------------------------------------------
// Leaf reduction rules: Extended Minimum Spanning Circuit.
// ---------------------------------------------------------------------------

WmscRuleResult apply_wmsc_leaf_rule(const WmscTreeInstance& inst, std::size_t leaf,
                                    const SolveOptions& opts) {
    const ConflictTree& tree = inst.tree;
    const WmscCore& core = inst.core;
    if (core.z) throw std::invalid_argument("tree instances must have an empty pivot");
    LeafInfo info = leaf_info(tree, leaf);
    const BasicNode& ml = tree.nodes[leaf];
    const LabelSet leaf_ground = node_labels(ml);
    const LabelSet lset = union_of(core.triples);

    bool has_t = !ls_and(core.terminals, leaf_ground).empty();
    std::vector<LabelSet> leaf_triples, other_triples;
    for (const auto& x : core.triples)
        (ls_subset(x, leaf_ground) ? leaf_triples : other_triples).push_back(x);
    bool has_x = !leaf_triples.empty();

    ConflictTree tree2 = remove_node(tree, leaf);
    LabelSet m2_ground;
    for (const auto& n : tree2.nodes) {
        auto nl = node_labels(n);
        m2_ground.insert(nl.begin(), nl.end());
    }

    WmscRuleResult res;

    if (info.shared.empty()) {
        // 1-leaf.
        if (has_t || has_x) {
            res.decided = true;
            res.outcome = SolveOutcome::no();
            return res;
        }
        res.reduced.tree = std::move(tree2);
        res.reduced.core = core;
        res.reduced.core.weights = restrict_weights(core.weights, m2_ground);
        res.lift = [](const LabelSet& c) { return c; };
        return res;
    }

    if (info.shared.size() == 1) {
        // 2-leaf.
        const std::string e = *info.shared.begin();
        if (!has_t && !has_x) {
            WmscCore lc;
            lc.terminals = {e};
            lc.weights = restrict_weights(core.weights, leaf_ground);
            lc.weights[e] = 1;
            Sweep s = sweep_min_budget(ml, lc, 0, core.budget, opts);
            if (s.budget && *s.budget == 0) {
                // The shared element is a loop of the leaf: crossing circuits
                // shrink by {e} for free, i.e. the remaining matroid is M'/e.
                // Contraction stays inside the graphic/cographic classes.
                std::size_t parent2 = info.parent > leaf ? info.parent - 1 : info.parent;
                BasicNode& pn = tree2.nodes[parent2];
                switch (pn.kind) {
                    case NodeKind::graphic:
                        pn = BasicNode::make_graphic(contract_edge(pn.graph, e).graph);
                        break;
                    case NodeKind::cographic:
                        pn = BasicNode::make_cographic(delete_edges(pn.graph, {e}));
                        break;
                    case NodeKind::r10_derived:
                        throw std::invalid_argument(
                            "2-sum on a loop shared with an r10 node is not supported");
                }
                for (auto& te : tree2.edges) {
                    std::erase(te.shared, e);
                }
                res.reduced.tree = std::move(tree2);
                res.reduced.core = core;
                res.reduced.core.weights = restrict_weights(core.weights, m2_ground);
                res.reduced.core.weights.erase(e);
                res.lift = [](const LabelSet& c) { return c; };
                return res;
            }
            res.reduced.tree = std::move(tree2);
            res.reduced.core = core;
            res.reduced.core.weights = restrict_weights(core.weights, m2_ground);
            res.reduced.core.weights[e] = s.budget ? *s.budget : core.budget + 1;
            LabelSet ce = s.witness;
            res.lift = [e, ce](const LabelSet& c) {
                if (!c.count(e)) return c;
                if (ce.empty()) throw std::logic_error("2-leaf lift without a stored circuit");
                return ls_xor(c, ce);
            };
            return res;
        }
        // Case ii: terminals or a triple inside the leaf.
        WmscCore lc;
        lc.terminals = ls_and(core.terminals, leaf_ground);
        lc.terminals.insert(e);
        lc.triples = leaf_triples;
        for (const auto& x : leaf_triples) {
            lc.menus[x] = core.menus.at(x);
            lc.menu_weights[x] = core.menu_weights.at(x);
        }
        lc.weights = restrict_weights(core.weights, leaf_ground);
        lc.weights[e] = 1;
        Sweep s = sweep_min_budget(ml, lc, 0, core.budget, opts);
        if (!s.budget) {
            res.decided = true;
            res.outcome = SolveOutcome::no();
            return res;
        }
        res.reduced.tree = std::move(tree2);
        res.reduced.core.terminals = ls_and(core.terminals, m2_ground);
        res.reduced.core.terminals.insert(e);
        res.reduced.core.triples = other_triples;
        for (const auto& x : other_triples) {
            res.reduced.core.menus[x] = core.menus.at(x);
            res.reduced.core.menu_weights[x] = core.menu_weights.at(x);
        }
        res.reduced.core.weights = restrict_weights(core.weights, m2_ground);
        res.reduced.core.weights[e] = 1;
        res.reduced.core.budget = core.budget - *s.budget;
        LabelSet c2 = s.witness;
        res.lift = [c2](const LabelSet& c) { return ls_xor(c, c2); };
        return res;
    }

    // 3-leaf.
    const std::vector<std::string> s3(info.shared.begin(), info.shared.end());
    const LabelSet sset = info.shared;
    const BinaryMatroid& lm = ml.matroid;
    auto leaf_set = [&](const LabelSet& c) { return to_eset(lm, c); };

    if (!has_t && !has_x) {
        // Case i: price each shared element by its cheapest pivoting circuit.
        std::map<std::string, Weight> wprime;
        std::map<std::string, LabelSet> stored;
        for (const auto& ei : s3) {
            WmscCore lc;
            lc.z = {sset, ei};
            lc.weights = restrict_weights(core.weights, leaf_ground);
            for (const auto& ee : s3) lc.weights[ee] = 1;
            Sweep s = sweep_min_budget(ml, lc, 1, core.budget + 1, opts);
            if (s.budget) {
                wprime[ei] = *s.budget - 1;
                stored[ei] = s.witness;
            } else {
                wprime[ei] = core.budget + 1;
            }
        }
        res.reduced.tree = std::move(tree2);
        res.reduced.core = core;
        res.reduced.core.weights = restrict_weights(core.weights, m2_ground);
        for (const auto& ei : s3) res.reduced.core.weights[ei] = wprime.at(ei);
        BinaryMatroid leaf_matroid = lm;
        res.lift = [sset, stored, leaf_matroid, s3](const LabelSet& c) {
            LabelSet i = ls_and(c, sset);
            if (i.empty()) return c;
            if (i.size() == 1) {
                auto st = stored.find(*i.begin());
                if (st == stored.end()) throw std::logic_error("3-leaf lift without circuit");
                return ls_xor(c, st->second);
            }
            if (i.size() != 2) throw std::logic_error("solution meets the shared triple fully");
            std::string eh;
            for (const auto& ee : s3)
                if (!i.count(ee)) eh = ee;
            auto sa = stored.find(*i.begin()), sb = stored.find(*std::next(i.begin()));
            if (sa == stored.end() || sb == stored.end())
                throw std::logic_error("3-leaf lift without circuits");
            LabelSet cercle = ls_xor(ls_xor(sa->second, sb->second),
                                     LabelSet(s3.begin(), s3.end()));
            ElementSet cyc = leaf_matroid.set_of(
                std::vector<std::string>(cercle.begin(), cercle.end()));
            for (const auto& part : decompose_cycle(leaf_matroid, cyc)) {
                auto labs = leaf_matroid.labels_of(part);
                LabelSet pl(labs.begin(), labs.end());
                if (pl.count(eh)) {
                    return ls_xor(ls_xor(c, sset), pl);
                }
            }
            throw std::logic_error("3-leaf lift found no circuit through the third element");
        };
        return res;
    }

    if (!has_x && has_t) {
        LabelSet tl = ls_and(core.terminals, leaf_ground);
        std::optional<std::string> icirc;
        for (const auto& ei : s3) {
            LabelSet cl = tl;
            cl.insert(ei);
            if (is_circuit(lm, leaf_set(cl))) icirc = ei;
        }
        if (icirc) {
            // Case ii.
            const std::string ei = *icirc;
            LabelSet cl = tl;
            cl.insert(ei);
            bool cl_split = is_circuit(lm, set_xor(leaf_set(cl), leaf_set(sset)));
            if (cl_split) {
                // C_l ^ S is a circuit.
                std::map<std::string, Weight> wprime;
                std::map<std::string, LabelSet> stored;
                for (const auto& ej : s3) {
                    if (ej == ei) continue;
                    std::string eh;
                    for (const auto& ee : s3)
                        if (ee != ei && ee != ej) eh = ee;
                    WmscCore lc;
                    lc.terminals = tl;
                    lc.triples = {sset};
                    lc.menus[sset] = {{eh}};
                    lc.menu_weights[sset][{eh}] = 1;
                    lc.weights = restrict_weights(core.weights, leaf_ground);
                    Sweep s = sweep_min_budget(ml, lc, 1, core.budget + 1, opts);
                    if (s.budget) {
                        wprime[ej] = *s.budget - 1;
                        stored[ej] = s.witness;
                    } else {
                        wprime[ej] = core.budget + 1;
                    }
                }
                res.reduced.tree = std::move(tree2);
                res.reduced.core = core;
                res.reduced.core.terminals = ls_and(core.terminals, m2_ground);
                res.reduced.core.terminals.insert(ei);
                res.reduced.core.weights = restrict_weights(core.weights, m2_ground);
                res.reduced.core.weights[ei] = 1;
                for (const auto& [ej, w] : wprime) res.reduced.core.weights[ej] = w;
                LabelSet clv = cl;
                res.lift = [sset, ei, clv, stored](const LabelSet& c) {
                    LabelSet i = ls_and(c, sset);
                    if (i == LabelSet{ei}) return ls_xor(c, clv);
                    if (i.size() != 2 || !i.count(ei))
                        throw std::logic_error("unexpected shared intersection in 3-leaf lift");
                    std::string ej;
                    for (const auto& ee : i)
                        if (ee != ei) ej = ee;
                    auto st = stored.find(ej);
                    if (st == stored.end())
                        throw std::logic_error("3-leaf lift without stored circuit");
                    return ls_xor(ls_xor(c, sset), st->second);
                };
                return res;
            }
            // C_l ^ S is not a circuit.
            res.reduced.tree = std::move(tree2);
            res.reduced.core = core;
            res.reduced.core.terminals = ls_and(core.terminals, m2_ground);
            for (const auto& ee : s3)
                if (ee != ei) res.reduced.core.terminals.insert(ee);
            res.reduced.core.weights = restrict_weights(core.weights, m2_ground);
            res.reduced.core.weights[ei] = core.budget + 1;
            for (const auto& ee : s3)
                if (ee != ei) res.reduced.core.weights[ee] = 1;
            LabelSet clv = cl;
            res.lift = [sset, ei, clv](const LabelSet& c) {
                LabelSet i = ls_and(c, sset);
                LabelSet expect = sset;
                expect.erase(ei);
                if (i != expect)
                    throw std::logic_error("unexpected shared intersection in 3-leaf lift");
                return ls_xor(ls_xor(c, sset), clv);
            };
            return res;
        }
    }

    // Case iii: build the menu over S.
    LabelSet tl = ls_and(core.terminals, leaf_ground);
    std::set<LabelSet> menu;
    std::map<LabelSet, Weight> menu_w;
    std::map<std::string, LabelSet> stored_single, stored_pair;
    for (const auto& ei : s3) {
        WmscCore lc;
        lc.terminals = tl;
        lc.triples = leaf_triples;
        for (const auto& x : leaf_triples) {
            lc.menus[x] = core.menus.at(x);
            lc.menu_weights[x] = core.menu_weights.at(x);
        }
        lc.z = {sset, ei};
        lc.weights = restrict_weights(core.weights, leaf_ground);
        for (const auto& ee : s3) lc.weights[ee] = 1;
        Sweep s = sweep_min_budget(ml, lc, 1, core.budget + 1, opts);
        if (s.budget) {
            menu.insert({ei});
            menu_w[{ei}] = *s.budget - 1;
            stored_single[ei] = s.witness;
        }
    }
    for (const auto& ei : s3) {
        WmscCore lc;
        lc.terminals = tl;
        lc.triples = leaf_triples;
        for (const auto& x : leaf_triples) {
            lc.menus[x] = core.menus.at(x);
            lc.menu_weights[x] = core.menu_weights.at(x);
        }
        lc.triples.push_back(sset);
        lc.menus[sset] = {{ei}};
        lc.menu_weights[sset][{ei}] = 1;
        lc.weights = restrict_weights(core.weights, leaf_ground);
        Sweep s = sweep_min_budget(ml, lc, 1, core.budget + 1, opts);
        if (s.budget) {
            LabelSet pair = sset;
            pair.erase(ei);
            menu.insert(pair);
            menu_w[pair] = *s.budget - 1;
            stored_pair[ei] = s.witness;
        }
    }
    if (menu.empty()) {
        res.decided = true;
        res.outcome = SolveOutcome::no();
        return res;
    }
    res.reduced.tree = std::move(tree2);
    res.reduced.core.terminals = ls_and(core.terminals, m2_ground);
    res.reduced.core.triples = other_triples;
    for (const auto& x : other_triples) {
        res.reduced.core.menus[x] = core.menus.at(x);
        res.reduced.core.menu_weights[x] = core.menu_weights.at(x);
    }
    res.reduced.core.triples.push_back(sset);
    res.reduced.core.menus[sset] = menu;
    res.reduced.core.menu_weights[sset] = menu_w;
    res.reduced.core.weights = restrict_weights(core.weights, m2_ground);
    for (const auto& ee : s3) res.reduced.core.weights.erase(ee);
    res.reduced.core.budget = core.budget;
    res.lift = [sset, s3, stored_single, stored_pair](const LabelSet& c) {
        LabelSet i = ls_and(c, sset);
        if (i.size() == 1) {
            auto st = stored_single.find(*i.begin());
            if (st == stored_single.end()) throw std::logic_error("missing stored leaf circuit");
            return ls_xor(c, st->second);
        }
        if (i.size() == 2) {
            std::string eh;
            for (const auto& ee : s3)
                if (!i.count(ee)) eh = ee;
            auto st = stored_pair.find(eh);
            if (st == stored_pair.end()) throw std::logic_error("missing stored leaf circuit");
            return ls_xor(ls_xor(c, sset), st->second);
        }
        throw std::logic_error("solution does not meet the shared triple properly");
    };
    return res;
}

// ---------------------------------------------------------------------------
// Leaf reduction rules: Extended Spanning Circuit.
// ---------------------------------------------------------------------------

ScRuleResult apply_scir_leaf_rule(const ScTreeInstance& inst, std::size_t leaf,
                                  const SolveOptions& opts) {
    const ConflictTree& tree = inst.tree;
    const ScCore& core = inst.core;
    if (core.z) throw std::invalid_argument("tree instances must have an empty pivot");
    LeafInfo info = leaf_info(tree, leaf);
    const BasicNode& ml = tree.nodes[leaf];
    const LabelSet leaf_ground = node_labels(ml);

    std::vector<LabelSet> leaf_triples, other_triples;
    for (const auto& x : core.triples)
        (ls_subset(x, leaf_ground) ? leaf_triples : other_triples).push_back(x);
    bool has_x = !leaf_triples.empty();

    ScRuleResult res;

    if (info.shared.empty()) {
        if (has_x) {
            res.decided = true;
            res.outcome = SolveOutcome::no();
            return res;
        }
        res.reduced.tree = remove_node(tree, leaf);
        res.reduced.core = core;
        res.lift = [](const LabelSet& c) { return c; };
        return res;
    }

    if (info.shared.size() == 1) {
        const std::string e = *info.shared.begin();
        if (!has_x) {
            ScCore lc;
            lc.triples = {{e}};
            lc.menus[{e}] = {{e}};
            SolveOutcome leaf_out = dispatch_esc(ml, lc, opts);
            ConflictTree tree2 = remove_node(tree, leaf);
            std::size_t parent2 = info.parent > leaf ? info.parent - 1 : info.parent;
            if (!leaf_out.yes)
                tree2.nodes[parent2] = node_delete_element(tree2.nodes[parent2], e);
            res.reduced.tree = std::move(tree2);
            res.reduced.core = core;
            LabelSet w = leaf_out.yes ? *leaf_out.witness : LabelSet{};
            res.lift = [e, w](const LabelSet& c) {
                if (!c.count(e)) return c;
                if (w.empty()) throw std::logic_error("2-leaf lift without stored circuit");
                return ls_xor(c, w);
            };
            return res;
        }
        ScCore lc;
        lc.triples = leaf_triples;
        for (const auto& x : leaf_triples) lc.menus[x] = core.menus.at(x);
        lc.triples.push_back({e});
        lc.menus[{e}] = {{e}};
        SolveOutcome leaf_out = dispatch_esc(ml, lc, opts);
        if (!leaf_out.yes) {
            res.decided = true;
            res.outcome = SolveOutcome::no();
            return res;
        }
        res.reduced.tree = remove_node(tree, leaf);
        res.reduced.core.triples = other_triples;
        for (const auto& x : other_triples) res.reduced.core.menus[x] = core.menus.at(x);
        res.reduced.core.triples.push_back({e});
        res.reduced.core.menus[{e}] = {{e}};
        LabelSet w = *leaf_out.witness;
        res.lift = [w](const LabelSet& c) { return ls_xor(c, w); };
        return res;
    }

    // 3-leaf.
    const std::vector<std::string> s3(info.shared.begin(), info.shared.end());
    const LabelSet sset = info.shared;
    const BinaryMatroid lm = ml.matroid;

    if (!has_x) {
        std::map<std::string, LabelSet> stored;
        ConflictTree tree2 = remove_node(tree, leaf);
        std::size_t parent2 = info.parent > leaf ? info.parent - 1 : info.parent;
        for (const auto& ei : s3) {
            ScCore lc;
            lc.z = {sset, ei};
            SolveOutcome r = dispatch_esc(ml, lc, opts);
            if (r.yes) stored[ei] = *r.witness;
            else tree2.nodes[parent2] = node_delete_element(tree2.nodes[parent2], ei);
        }
        res.reduced.tree = std::move(tree2);
        res.reduced.core = core;
        res.lift = [sset, s3, stored, lm](const LabelSet& c) {
            LabelSet i = ls_and(c, sset);
            if (i.empty()) return c;
            if (i.size() == 1) {
                auto st = stored.find(*i.begin());
                if (st == stored.end()) throw std::logic_error("missing stored leaf circuit");
                return ls_xor(c, st->second);
            }
            if (i.size() != 2) throw std::logic_error("solution meets the shared triple fully");
            std::string ec;
            for (const auto& ee : s3)
                if (!i.count(ee)) ec = ee;
            auto sa = stored.find(*i.begin()), sb = stored.find(*std::next(i.begin()));
            if (sa == stored.end() || sb == stored.end())
                throw std::logic_error("missing stored leaf circuits");
            LabelSet cercle = ls_xor(ls_xor(sa->second, sb->second),
                                     LabelSet(s3.begin(), s3.end()));
            ElementSet cyc = lm.set_of(std::vector<std::string>(cercle.begin(), cercle.end()));
            for (const auto& part : decompose_cycle(lm, cyc)) {
                auto labs = lm.labels_of(part);
                LabelSet pl(labs.begin(), labs.end());
                if (pl.count(ec)) return ls_xor(ls_xor(c, sset), pl);
            }
            throw std::logic_error("no circuit through the third shared element");
        };
        return res;
    }

    // Case ii: build the menu R over S.
    std::set<LabelSet> rmenu;
    std::map<std::string, LabelSet> stored_single, stored_pair;
    for (const auto& ei : s3) {
        ScCore lc;
        lc.triples = leaf_triples;
        for (const auto& x : leaf_triples) lc.menus[x] = core.menus.at(x);
        lc.z = {sset, ei};
        SolveOutcome r = dispatch_esc(ml, lc, opts);
        if (r.yes) {
            rmenu.insert({ei});
            stored_single[ei] = *r.witness;
        }
    }
    for (const auto& ei : s3) {
        ScCore lc;
        lc.triples = leaf_triples;
        for (const auto& x : leaf_triples) lc.menus[x] = core.menus.at(x);
        lc.triples.push_back(sset);
        lc.menus[sset] = {{ei}};
        SolveOutcome r = dispatch_esc(ml, lc, opts);
        if (r.yes) {
            LabelSet pair = sset;
            pair.erase(ei);
            rmenu.insert(pair);
            stored_pair[ei] = *r.witness;
        }
    }
    if (rmenu.empty()) {
        res.decided = true;
        res.outcome = SolveOutcome::no();
        return res;
    }
    res.reduced.tree = remove_node(tree, leaf);
    res.reduced.core.triples = other_triples;
    for (const auto& x : other_triples) res.reduced.core.menus[x] = core.menus.at(x);
    res.reduced.core.triples.push_back(sset);
    res.reduced.core.menus[sset] = rmenu;
    res.lift = [sset, s3, stored_single, stored_pair](const LabelSet& c) {
        LabelSet i = ls_and(c, sset);
        if (i.size() == 1) {
            auto st = stored_single.find(*i.begin());
            if (st == stored_single.end()) throw std::logic_error("missing stored leaf circuit");
            return ls_xor(c, st->second);
        }
        if (i.size() == 2) {
            std::string eh;
            for (const auto& ee : s3)
                if (!i.count(ee)) eh = ee;
            auto st = stored_pair.find(eh);
            if (st == stored_pair.end()) throw std::logic_error("missing stored leaf circuit");
            return ls_xor(ls_xor(c, sset), st->second);
        }
        throw std::logic_error("solution does not meet the shared triple properly");
    };
    return res;
}

// ---------------------------------------------------------------------------
// Entry points.
// ---------------------------------------------------------------------------

namespace {

void validate_wmsc_entry(const MatroidRef& m, const WmscCore& core) {
    LabelSet ground = m.ground_labels();
    LabelSet l = union_of(core.triples);
    for (const auto& t : core.terminals) {
        if (!ground.count(t)) throw std::invalid_argument("terminal outside the ground set: " + t);
        if (l.count(t)) throw std::invalid_argument("terminal inside a prescribed triple: " + t);
    }
    LabelSet seen;
    for (const auto& x : core.triples) {
        if (x.size() != 3) throw std::invalid_argument("prescribed sets must be triples");
        for (const auto& e : x) {
            if (!ground.count(e)) throw std::invalid_argument("triple element outside ground");
            if (!seen.insert(e).second) throw std::invalid_argument("triples must be disjoint");
        }
        auto menu = core.menus.find(x);
        if (menu == core.menus.end() || menu->second.empty())
            throw std::invalid_argument("every triple needs a nonempty menu");
        for (const auto& y : menu->second) {
            if (y.empty() || y.size() > 2 || !ls_subset(y, x))
                throw std::invalid_argument("menu entries are subsets of the triple of size 1 or 2");
            if (core.menu_weights.at(x).at(y) < 1)
                throw std::invalid_argument("menu weights must be positive");
        }
    }
    if (core.z) {
        const auto& [zset, zt] = *core.z;
        if (zset.size() != 3 || !zset.count(zt))
            throw std::invalid_argument("pivot must be a triple containing its element");
        for (const auto& e : zset) {
            if (!ground.count(e)) throw std::invalid_argument("pivot element outside ground");
            if (l.count(e) || core.terminals.count(e))
                throw std::invalid_argument("pivot must avoid triples and terminals");
        }
    }
    for (const auto& g : ground) {
        if (l.count(g)) continue;
        auto it = core.weights.find(g);
        if (it == core.weights.end())
            throw std::invalid_argument("weight missing for element " + g);
        if (it->second < 1) throw std::invalid_argument("weights must be positive");
    }
    if (m.is_tree()) {
        if (core.z) throw std::invalid_argument("inconsistent tree instance: pivot present");
        for (const auto& x : core.triples) {
            bool inside = false;
            for (const auto& n : m.tree->nodes)
                if (ls_subset(x, node_labels(n))) inside = true;
            if (!inside)
                throw std::invalid_argument("inconsistent tree instance: triple crosses nodes");
        }
    }
}

std::size_t wmsc_root(const ConflictTree& tree, const WmscCore& core) {
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        auto nl = node_labels(tree.nodes[i]);
        for (const auto& t : core.terminals)
            if (nl.count(t)) return i;
    }
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        auto nl = node_labels(tree.nodes[i]);
        for (const auto& x : core.triples)
            if (ls_subset(x, nl)) return i;
    }
    return 0;
}

}  // namespace

SolveOutcome solve_ewmsc(const MatroidRef& m, const WmscCore& core, const SolveOptions& opts) {
    validate_wmsc_entry(m, core);
    if (!m.is_tree()) {
        SolveOutcome r = dispatch_wmsc(*m.node, core, opts);
        if (r.yes && !wmsc_feasible(m.node->matroid, core, *r.witness))
            throw std::logic_error("witness fails feasibility");
        return r;
    }
    const ConflictTree& tree0 = *m.tree;
    if (tree0.nodes.size() == 1) {
        SolveOutcome r = dispatch_wmsc(tree0.nodes[0], core, opts);
        if (r.yes && !wmsc_feasible(tree0.nodes[0].matroid, core, *r.witness))
            throw std::logic_error("witness fails feasibility");
        return r;
    }
    if (core.terminals.empty() && core.triples.empty()) {
        // Nothing anchors a solution to the root; try every element as the
        // mandatory one.
        for (const auto& g : m.ground_labels()) {
            Weight wg = core.weights.at(g);
            if (wg > core.budget) continue;
            WmscCore sub = core;
            sub.terminals = {g};
            sub.budget = core.budget - wg;  // g itself now counts as a terminal
            SolveOutcome r = solve_ewmsc(m, sub, opts);
            if (r.yes) {
                Weight omega = wmsc_weight(core, *r.witness);
                if (omega > core.budget) throw std::logic_error("anchored witness over budget");
                return SolveOutcome::found(*r.witness, omega);
            }
        }
        return SolveOutcome::no();
    }

    WmscTreeInstance cur{tree0, core};
    cur.tree.root = wmsc_root(tree0, core);
    std::vector<WitnessLift> lifts;
    while (cur.tree.nodes.size() > 1) {
        std::size_t leaf = pick_leaf(cur.tree, cur.tree.root);
        WmscRuleResult r = apply_wmsc_leaf_rule(cur, leaf, opts);
        if (r.decided) return r.outcome;
        lifts.push_back(r.lift);
        cur = std::move(r.reduced);
    }
    SolveOutcome base = dispatch_wmsc(cur.tree.nodes[0], cur.core, opts);
    if (!base.yes) return base;
    LabelSet witness = *base.witness;
    for (auto it = lifts.rbegin(); it != lifts.rend(); ++it) witness = (*it)(witness);
    BinaryMatroid full = compose(tree0);
    if (!wmsc_feasible(full, core, witness))
        throw std::logic_error("lifted witness fails feasibility");
    return SolveOutcome::found(witness, wmsc_weight(core, witness));
}

namespace {

void validate_esc_entry(const MatroidRef& m, const ScCore& core) {
    LabelSet ground = m.ground_labels();
    LabelSet seen;
    for (const auto& x : core.triples) {
        if (x.empty() || x.size() > 3)
            throw std::invalid_argument("prescribed sets must have size 1..3");
        for (const auto& e : x) {
            if (!ground.count(e)) throw std::invalid_argument("set element outside ground");
            if (!seen.insert(e).second) throw std::invalid_argument("sets must be disjoint");
        }
        auto menu = core.menus.find(x);
        if (menu == core.menus.end() || menu->second.empty())
            throw std::invalid_argument("every set needs a nonempty menu");
        for (const auto& y : menu->second)
            if (y.empty() || y.size() > 2 || !ls_subset(y, x))
                throw std::invalid_argument("menu entries are subsets of size 1 or 2");
    }
    if (core.z) {
        const auto& [zset, zt] = *core.z;
        if (zset.size() != 3 || !zset.count(zt))
            throw std::invalid_argument("pivot must be a triple containing its element");
        for (const auto& e : zset) {
            if (!ground.count(e)) throw std::invalid_argument("pivot element outside ground");
            if (seen.count(e)) throw std::invalid_argument("pivot must avoid the prescribed sets");
        }
    }
    if (m.is_tree()) {
        if (core.z) throw std::invalid_argument("inconsistent tree instance: pivot present");
        for (const auto& x : core.triples) {
            bool inside = false;
            for (const auto& n : m.tree->nodes)
                if (ls_subset(x, node_labels(n))) inside = true;
            if (!inside)
                throw std::invalid_argument("inconsistent tree instance: set crosses nodes");
        }
    }
}

std::size_t esc_root(const ConflictTree& tree, const ScCore& core) {
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        auto nl = node_labels(tree.nodes[i]);
        for (const auto& x : core.triples)
            if (ls_subset(x, nl)) return i;
    }
    return 0;
}

}  // namespace

SolveOutcome solve_esc(const MatroidRef& m, const ScCore& core, const SolveOptions& opts) {
    validate_esc_entry(m, core);
    if (!m.is_tree()) {
        SolveOutcome r = dispatch_esc(*m.node, core, opts);
        if (r.yes && !esc_feasible(m.node->matroid, core, *r.witness))
            throw std::logic_error("witness fails feasibility");
        return r;
    }
    const ConflictTree& tree0 = *m.tree;
    if (tree0.nodes.size() == 1) {
        SolveOutcome r = dispatch_esc(tree0.nodes[0], core, opts);
        if (r.yes && !esc_feasible(tree0.nodes[0].matroid, core, *r.witness))
            throw std::logic_error("witness fails feasibility");
        return r;
    }
    if (core.triples.empty()) {
        for (const auto& g : m.ground_labels()) {
            ScCore sub = core;
            sub.triples = {{g}};
            sub.menus[{g}] = {{g}};
            SolveOutcome r = solve_esc(m, sub, opts);
            if (r.yes) return r;
        }
        return SolveOutcome::no();
    }

    ScTreeInstance cur{tree0, core};
    cur.tree.root = esc_root(tree0, core);
    std::vector<WitnessLift> lifts;
    while (cur.tree.nodes.size() > 1) {
        std::size_t leaf = pick_leaf(cur.tree, cur.tree.root);
        ScRuleResult r = apply_scir_leaf_rule(cur, leaf, opts);
        if (r.decided) return r.outcome;
        lifts.push_back(r.lift);
        cur = std::move(r.reduced);
    }
    SolveOutcome base = dispatch_esc(cur.tree.nodes[0], cur.core, opts);
    if (!base.yes) return base;
    LabelSet witness = *base.witness;
    for (auto it = lifts.rbegin(); it != lifts.rend(); ++it) witness = (*it)(witness);
    BinaryMatroid full = compose(tree0);
    if (!esc_feasible(full, core, witness))
        throw std::logic_error("lifted witness fails feasibility");
    return SolveOutcome::found(witness, static_cast<Weight>(witness.size()));
}

SolveOutcome solve_wmsc(const MatroidRef& m, const std::map<std::string, Weight>& w,
                        const LabelSet& terminals, Weight ell, const SolveOptions& opts) {
    Weight wt = 0;
    for (const auto& t : terminals) {
        auto it = w.find(t);
        if (it == w.end()) throw std::invalid_argument("weight missing for terminal " + t);
        wt += it->second;
    }
    if (ell - wt < 0) return SolveOutcome::no();
    WmscCore core;
    core.terminals = terminals;
    core.weights = w;
    core.budget = ell - wt;
    return solve_ewmsc(m, core, opts);
}

SolveOutcome solve_sc(const MatroidRef& m, const LabelSet& terminals, const SolveOptions& opts) {
    ScCore core;
    for (const auto& t : terminals) {
        core.triples.push_back({t});
        core.menus[{t}] = {{t}};
    }
    return solve_esc(m, core, opts);
}

}  // namespace spancirc
