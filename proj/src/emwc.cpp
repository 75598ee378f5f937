#include "spancirc/emwc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <random>
#include <stdexcept>

namespace spancirc {

ParamPair ParamPair::defaults(std::int64_t k) {
    ParamPair pp;
    pp.p = 2 * k;
    if (k <= 0) {
        pp.q = 1;
        return pp;
    }
    // q = k^2 * 2^(4k + 4k log(4k)) + 4k + 1, saturated; the paper states q
    // twice with different leading factors, we take the larger k^2 form.
    long double expo = 4.0L * k + 4.0L * k * std::log2(4.0L * k);
    long double q = expo > 60 ? 1e18L : static_cast<long double>(k) * k * std::pow(2.0L, expo);
    q += 4 * k + 1;
    pp.q = q > 1e9L ? static_cast<std::int64_t>(1e9) : static_cast<std::int64_t>(q);
    return pp;
}

std::int64_t ParamPair::pq() const {
    if (p <= 0 || q <= 0) return p * q;
    if (p > (INT64_MAX / 4) / q) return INT64_MAX / 4;
    return p * q;
}

bool emwc_solution_ok(const EmwcInstance& inst, const std::set<std::string>& cut) {
    const MultiGraph& g = inst.g;
    if (cut.empty()) return false;
    for (const auto& l : inst.terminals)
        if (!cut.count(l)) return false;
    for (const auto& l : cut)
        if (!g.has_edge_label(l)) return false;
    if (!is_minimal_cutset(g, cut)) return false;
    Weight extra = 0;
    for (const auto& l : cut)
        if (!inst.terminals.count(l)) extra += g.edge(l).weight;
    if (extra > inst.k) return false;
    auto comps = components(delete_edges(g, cut));
    if (comps.size() != 2) return false;
    auto within = [](const std::set<VertexId>& r, const std::set<VertexId>& side) {
        for (VertexId v : r)
            if (!side.count(v)) return false;
        return true;
    };
    return (within(inst.r1, comps[0]) && within(inst.r2, comps[1])) ||
           (within(inst.r1, comps[1]) && within(inst.r2, comps[0]));
}

namespace {

bool bipartite_coloring(const std::vector<std::vector<int>>& adj, std::vector<int>& color,
                        const std::vector<bool>& removed) {
    const int n = static_cast<int>(adj.size());
    color.assign(n, -1);
    for (int s = 0; s < n; ++s) {
        if (removed[s] || color[s] != -1) continue;
        color[s] = 0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int at = q.front();
            q.pop();
            for (int to : adj[at]) {
                if (removed[to]) continue;
                if (color[to] == -1) {
                    color[to] = 1 - color[at];
                    q.push(to);
                } else if (color[to] == color[at]) {
                    return false;
                }
            }
        }
    }
    return true;
}

// Unit-vertex-capacity max-flow for the compression step's separation problem.
struct VertexCutSolver {
    int n;
    std::vector<std::vector<int>> cap;   // dense, small graphs only
    std::vector<std::vector<int>> nodes;

    explicit VertexCutSolver(int vertices) : n(2 * vertices + 2) {
        cap.assign(n, std::vector<int>(n, 0));
    }
    int src() const { return n - 2; }
    int snk() const { return n - 1; }
    static int in(int v) { return 2 * v; }
    static int out(int v) { return 2 * v + 1; }

    int maxflow(int limit) {
        int total = 0;
        while (total <= limit) {
            std::vector<int> prev(n, -1);
            std::queue<int> q;
            q.push(src());
            prev[src()] = src();
            while (!q.empty() && prev[snk()] == -1) {
                int at = q.front();
                q.pop();
                for (int to = 0; to < n; ++to)
                    if (prev[to] == -1 && cap[at][to] > 0) {
                        prev[to] = at;
                        q.push(to);
                    }
            }
            if (prev[snk()] == -1) break;
            for (int at = snk(); at != src(); at = prev[at]) {
                cap[prev[at]][at] -= 1;
                cap[at][prev[at]] += 1;
            }
            ++total;
        }
        return total;
    }

    std::vector<int> cut_vertices(int vertices) {
        std::vector<bool> reach(n, false);
        std::queue<int> q;
        q.push(src());
        reach[src()] = true;
        while (!q.empty()) {
            int at = q.front();
            q.pop();
            for (int to = 0; to < n; ++to)
                if (!reach[to] && cap[at][to] > 0) {
                    reach[to] = true;
                    q.push(to);
                }
        }
        std::vector<int> out_set;
        for (int v = 0; v < vertices; ++v)
            if (reach[in(v)] && !reach[out(v)]) out_set.push_back(v);
        return out_set;
    }
};

}  // namespace

std::optional<std::set<VertexId>> oct(const MultiGraph& g, std::int64_t k) {
    if (k < 0) return std::nullopt;
    std::set<VertexId> forced;
    for (const auto& e : g.edges)
        if (e.is_loop()) forced.insert(e.u);
    if (static_cast<std::int64_t>(forced.size()) > k) return std::nullopt;
    std::int64_t budget = k - static_cast<std::int64_t>(forced.size());

    std::vector<VertexId> verts;
    for (VertexId v : g.verts)
        if (!forced.count(v)) verts.push_back(v);
    const int n = static_cast<int>(verts.size());
    std::map<VertexId, int> idx;
    for (int i = 0; i < n; ++i) idx[verts[i]] = i;
    std::vector<std::set<int>> adjset(n);
    for (const auto& e : g.edges) {
        if (e.is_loop() || forced.count(e.u) || forced.count(e.v)) continue;
        adjset[idx[e.u]].insert(idx[e.v]);
        adjset[idx[e.v]].insert(idx[e.u]);
    }

    // Iterative compression over the vertex order.
    std::vector<int> sol;  // indices of the current transversal within prefix
    auto prefix_adj = [&](int upto, const std::vector<int>& skip_idx) {
        std::vector<std::vector<int>> adj(upto);
        std::vector<bool> removed(upto, false);
        for (int v : skip_idx) removed[v] = true;
        for (int v = 0; v < upto; ++v)
            for (int u : adjset[v])
                if (u < upto) adj[v].push_back(u);
        return std::pair{adj, removed};
    };

    for (int i = 0; i < n; ++i) {
        sol.push_back(i);
        if (static_cast<std::int64_t>(sol.size()) <= budget) continue;
        // Compress |sol| = budget+1 down to <= budget, if possible.
        const int upto = i + 1;
        std::vector<int> w = sol;
        bool compressed = false;
        const int wsz = static_cast<int>(w.size());
        std::vector<int> assign(wsz, 0);  // 0 delete, 1 left, 2 right
        std::function<bool(int)> rec = [&](int pos) -> bool {
            if (pos == wsz) {
                std::vector<int> wdel, wl, wr;
                for (int j = 0; j < wsz; ++j) {
                    if (assign[j] == 0) wdel.push_back(w[j]);
                    else if (assign[j] == 1) wl.push_back(w[j]);
                    else wr.push_back(w[j]);
                }
                if (static_cast<std::int64_t>(wdel.size()) > budget) return false;
                auto same_side_edge = [&](const std::vector<int>& side) {
                    for (std::size_t a = 0; a < side.size(); ++a)
                        for (std::size_t b = a + 1; b < side.size(); ++b)
                            if (adjset[side[a]].count(side[b])) return true;
                    return false;
                };
                if (same_side_edge(wl) || same_side_edge(wr)) return false;
                // 2-color G[prefix] - W.
                auto [adj, removed] = prefix_adj(upto, w);
                std::vector<int> color;
                if (!bipartite_coloring(adj, color, removed)) return false;
                // Demands on surviving vertices from kept W neighbors.
                std::vector<int> demand(upto, -1);  // -1 none, 0/1 flip value, 2 conflict
                auto add_demand = [&](int u, int f) {
                    if (demand[u] == -1) demand[u] = f;
                    else if (demand[u] != f) demand[u] = 2;
                };
                for (int wi : wl)
                    for (int u : adjset[wi])
                        if (u < upto && !removed[u]) add_demand(u, 1 ^ color[u]);
                for (int wi : wr)
                    for (int u : adjset[wi])
                        if (u < upto && !removed[u]) add_demand(u, color[u]);
                std::vector<int> conflicts;
                for (int u = 0; u < upto; ++u)
                    if (!removed[u] && demand[u] == 2) conflicts.push_back(u);
                std::int64_t rest =
                    budget - static_cast<std::int64_t>(wdel.size() + conflicts.size());
                if (rest < 0) return false;
                // Vertex cut separating flip-demand 0 from flip-demand 1.
                std::vector<int> live;  // dense reindex of surviving non-conflict vertices
                std::vector<int> live_id(upto, -1);
                for (int u = 0; u < upto; ++u) {
                    if (removed[u] || demand[u] == 2) continue;
                    live_id[u] = static_cast<int>(live.size());
                    live.push_back(u);
                }
                VertexCutSolver f(static_cast<int>(live.size()));
                const int INF = 1 << 20;
                for (int u : live) {
                    f.cap[VertexCutSolver::in(live_id[u])][VertexCutSolver::out(live_id[u])] = 1;
                    if (demand[u] == 0) f.cap[f.src()][VertexCutSolver::in(live_id[u])] = INF;
                    if (demand[u] == 1) f.cap[VertexCutSolver::out(live_id[u])][f.snk()] = INF;
                }
                for (int u : live)
                    for (int v : adjset[u])
                        if (v < upto && live_id[v] >= 0)
                            f.cap[VertexCutSolver::out(live_id[u])][VertexCutSolver::in(live_id[v])] = INF;
                int flow = f.maxflow(static_cast<int>(rest));
                if (flow > rest) return false;
                std::vector<int> cutv = f.cut_vertices(static_cast<int>(live.size()));
                std::vector<int> next;
                for (int v : wdel) next.push_back(v);
                for (int v : conflicts) next.push_back(v);
                for (int v : cutv) next.push_back(live[v]);
                if (static_cast<std::int64_t>(next.size()) > budget) return false;
                sol = next;
                return true;
            }
            for (int a = 0; a < 3; ++a) {
                assign[pos] = a;
                if (rec(pos + 1)) return true;
            }
            return false;
        };
        compressed = rec(0);
        if (!compressed) return std::nullopt;
    }

    std::set<VertexId> out = forced;
    for (int v : sol) out.insert(verts[v]);
    // Sanity: the result leaves the graph bipartite.
    {
        std::map<VertexId, int> full;
        std::vector<std::vector<int>> adj(g.n());
        for (std::size_t i = 0; i < g.verts.size(); ++i) full[g.verts[i]] = static_cast<int>(i);
        std::vector<bool> removed(g.n(), false);
        for (VertexId v : out) removed[full[v]] = true;
        for (const auto& e : g.edges) {
            if (e.is_loop()) continue;
            adj[full[e.u]].push_back(full[e.v]);
            adj[full[e.v]].push_back(full[e.u]);
        }
        std::vector<int> color;
        if (!bipartite_coloring(adj, color, removed))
            throw std::logic_error("oct produced a non-transversal");
    }
    return out;
}

std::optional<VertexCut> initial_cut(const MultiGraph& g, const std::set<std::string>& terminals,
                                     std::int64_t k) {
    if (k < 0) return std::nullopt;
    // Loop rule.
    std::set<std::string> drop;
    for (const auto& e : g.edges) {
        if (!e.is_loop()) continue;
        if (terminals.count(e.label)) return std::nullopt;
        drop.insert(e.label);
    }
    MultiGraph h = delete_edges(g, drop);
    // Parallel terminal rule: one terminal per endpoint pair.
    std::set<std::string> tkeep;
    std::set<std::pair<VertexId, VertexId>> seen;
    std::set<std::string> tdrop;
    for (const auto& e : h.edges) {
        if (!terminals.count(e.label)) continue;
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert(key).second) tdrop.insert(e.label);
        else tkeep.insert(e.label);
    }
    h = delete_edges(h, tdrop);

    // Auxiliary graph: k+1 twins per vertex, min(w,k+1) subdivision twins per
    // non-terminal edge, complete bipartite junctions.
    const std::int64_t twins = k + 1;
    std::vector<VertexId> aux_verts;
    std::map<VertexId, std::vector<VertexId>> u_of;
    VertexId next_id = 0;
    for (VertexId v : h.verts) {
        for (std::int64_t t = 0; t < twins; ++t) {
            u_of[v].push_back(next_id);
            aux_verts.push_back(next_id++);
        }
    }
    std::vector<GraphEdge> aux_edges;
    int elabel = 0;
    auto add_aux_edge = [&](VertexId a, VertexId b) {
        aux_edges.push_back({"x" + std::to_string(elabel++), a, b, 1});
    };
    for (const auto& e : h.edges) {
        if (tkeep.count(e.label)) {
            for (VertexId a : u_of[e.u])
                for (VertexId b : u_of[e.v]) add_aux_edge(a, b);
            continue;
        }
        std::int64_t r = std::min<std::int64_t>(e.weight, k + 1);
        for (std::int64_t t = 0; t < r; ++t) {
            VertexId z = next_id++;
            aux_verts.push_back(z);
            for (VertexId a : u_of[e.u]) add_aux_edge(a, z);
            for (VertexId b : u_of[e.v]) add_aux_edge(b, z);
        }
    }
    MultiGraph aux(aux_verts, aux_edges);
    auto s = oct(aux, k);
    if (!s) return std::nullopt;

    // Make the transversal inclusion-minimal so twin classes stay whole.
    std::map<VertexId, int> idx;
    for (std::size_t i = 0; i < aux.verts.size(); ++i) idx[aux.verts[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> adj(aux.n());
    for (const auto& e : aux.edges) {
        adj[idx[e.u]].push_back(idx[e.v]);
        adj[idx[e.v]].push_back(idx[e.u]);
    }
    std::set<VertexId> sol = *s;
    for (VertexId v : std::set<VertexId>(sol)) {
        std::vector<bool> removed(aux.n(), false);
        for (VertexId u : sol)
            if (u != v) removed[idx[u]] = true;
        std::vector<int> color;
        if (bipartite_coloring(adj, color, removed)) sol.erase(v);
    }
    for (VertexId v : h.verts)
        for (VertexId t : u_of[v])
            if (sol.count(t)) throw std::logic_error("vertex twin deleted by minimal transversal");

    std::vector<bool> removed(aux.n(), false);
    for (VertexId u : sol) removed[idx[u]] = true;
    std::vector<int> color;
    if (!bipartite_coloring(adj, color, removed))
        throw std::logic_error("transversal does not bipartize the auxiliary graph");

    VertexCut cut;
    for (VertexId v : h.verts) {
        int side = -1;
        for (VertexId t : u_of[v]) {
            bool anchored = false;
            for (int u : adj[idx[t]])
                if (!removed[u]) anchored = true;
            if (anchored) {
                side = color[idx[t]];
                break;
            }
        }
        if (side <= 0) cut.a.insert(v);
        else cut.b.insert(v);
    }
    // Decode check against the original instance.
    auto crossing = crossing_edges(g, cut.a);
    Weight extra = 0;
    for (const auto& l : terminals)
        if (!crossing.count(l)) throw std::logic_error("initial cut misses a terminal");
    for (const auto& l : crossing)
        if (!terminals.count(l)) extra += g.edge(l).weight;
    if (extra > k) throw std::logic_error("initial cut over budget");
    return cut;
}

namespace {

MultiGraph induced(const MultiGraph& g, const std::set<VertexId>& vs) {
    std::vector<VertexId> verts(vs.begin(), vs.end());
    std::vector<GraphEdge> edges;
    for (const auto& e : g.edges)
        if (vs.count(e.u) && vs.count(e.v)) edges.push_back(e);
    return MultiGraph(std::move(verts), std::move(edges));
}

}  // namespace

std::optional<VertexCut> good_separation(const MultiGraph& g, std::int64_t q, std::int64_t p) {
    if (!is_connected(g)) throw std::invalid_argument("graph must be connected");
    const std::int64_t n = static_cast<std::int64_t>(g.n());
    if (p <= 0 || n <= 2 * q + 1) return std::nullopt;
    const std::size_t m = g.m();
    std::vector<std::size_t> pick;
    std::optional<VertexCut> found;
    std::function<bool(std::size_t)> rec = [&](std::size_t from) -> bool {
        if (!pick.empty()) {
            std::set<std::string> s;
            for (std::size_t i : pick) s.insert(g.edges[i].label);
            auto comps = components(delete_edges(g, s));
            if (comps.size() == 2) {
                bool all_cross = true;
                for (std::size_t i : pick) {
                    const auto& e = g.edges[i];
                    if (comps[0].count(e.u) == comps[0].count(e.v)) all_cross = false;
                }
                if (all_cross && static_cast<std::int64_t>(comps[0].size()) > q &&
                    static_cast<std::int64_t>(comps[1].size()) > q) {
                    found = VertexCut{comps[0], comps[1]};
                    return true;
                }
            }
        }
        if (static_cast<std::int64_t>(pick.size()) == p) return false;
        for (std::size_t i = from; i < m; ++i) {
            pick.push_back(i);
            if (rec(i + 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    rec(0);
    return found;
}

std::vector<std::set<VertexId>> separation_family(const std::vector<VertexId>& universe,
                                                  std::int64_t a, std::int64_t b,
                                                  std::optional<std::uint64_t> seed) {
    const std::size_t n = universe.size();
    std::vector<std::set<VertexId>> fam;
    if (n <= 20) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            std::set<VertexId> s;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (std::uint64_t{1} << i)) s.insert(universe[i]);
            fam.push_back(std::move(s));
        }
        return fam;
    }
    // Seeded-random family; misses any fixed (A,B) pair with probability at
    // most exp(-40).
    std::int64_t t = std::min<std::int64_t>(a + b, 40);
    std::uint64_t reps = static_cast<std::uint64_t>(40) << t;
    reps = std::min<std::uint64_t>(reps, 1u << 22);
    std::mt19937_64 rng(seed.value_or(1));
    for (std::uint64_t i = 0; i < reps; ++i) {
        std::set<VertexId> s;
        for (VertexId v : universe)
            if (rng() & 1) s.insert(v);
        fam.push_back(std::move(s));
    }
    return fam;
}

namespace {

// Exhaustive solver: pick at most k weight of extra edges next to T.
std::optional<std::set<std::string>> solve_bruteforce(const EmwcInstance& inst) {
    const MultiGraph& g = inst.g;
    if (!is_connected(g)) throw std::invalid_argument("graph must be connected");
    std::set<VertexId> meet;
    for (VertexId v : inst.r1)
        if (inst.r2.count(v)) meet.insert(v);
    if (!meet.empty()) return std::nullopt;
    std::vector<std::size_t> extra_edges;
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        if (!inst.terminals.count(g.edges[i].label)) extra_edges.push_back(i);

    std::optional<std::set<std::string>> best;
    Weight best_w = INT64_MAX;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t, Weight)> rec = [&](std::size_t from, Weight used) {
        std::set<std::string> cand = inst.terminals;
        for (std::size_t i : pick) cand.insert(g.edges[i].label);
        if (!cand.empty() && emwc_solution_ok(inst, cand)) {
            if (used < best_w) {
                best_w = used;
                best = cand;
            }
        }
        for (std::size_t i = from; i < extra_edges.size(); ++i) {
            Weight w = g.edges[extra_edges[i]].weight;
            if (used + w > inst.k) continue;
            pick.push_back(extra_edges[i]);
            rec(i + 1, used + w);
            pick.pop_back();
        }
    };
    rec(0, 0);
    return best;
}

}  // namespace

std::optional<std::set<std::string>> solve_unbreakable(const EmwcInstance& inst, ParamPair pq,
                                                       const EmwcOptions& opts) {
    const MultiGraph& g = inst.g;
    if (!is_connected(g)) throw std::invalid_argument("graph must be connected");
    for (VertexId v : inst.r1)
        if (inst.r2.count(v)) return std::nullopt;
    const std::int64_t n = static_cast<std::int64_t>(g.n());
    if (n <= pq.pq()) return solve_bruteforce(inst);

    auto start = initial_cut(g, inst.terminals, inst.k);
    if (!start) return std::nullopt;
    const std::set<VertexId>& a0 = start->a;

    std::map<VertexId, std::size_t> idx;
    for (std::size_t i = 0; i < g.verts.size(); ++i) idx[g.verts[i]] = i;

    auto try_coloring = [&](const std::set<VertexId>& red0) -> std::optional<std::set<std::string>> {
        std::set<VertexId> red = red0;
        // Exhaust the T- and crossing-recoloring rules.
        for (;;) {
            MultiGraph red_sub = induced(g, red);
            auto red_comps = components(red_sub);
            bool changed = false;
            for (const auto& comp : red_comps) {
                bool t_violation = false;
                bool has_crossing = false;
                for (const auto& e : g.edges) {
                    bool ur = comp.count(e.u), vr = comp.count(e.v);
                    if (ur == vr) continue;
                    VertexId inside = ur ? e.u : e.v;
                    VertexId outside = ur ? e.v : e.u;
                    if (red.count(outside)) continue;  // joins another red comp? impossible
                    if (inst.terminals.count(e.label)) t_violation = true;
                    if (a0.count(e.u) != a0.count(e.v)) has_crossing = true;
                    (void)inside;
                }
                if (t_violation || !has_crossing) {
                    for (VertexId v : comp) red.erase(v);
                    changed = true;
                    break;
                }
            }
            if (!changed) break;
        }
        MultiGraph red_sub = induced(g, red);
        auto red_comps = components(red_sub);
        if (static_cast<std::int64_t>(red_comps.size()) > inst.k)
            throw std::logic_error("more red components than the budget permits");
        const std::size_t rc = red_comps.size();
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rc); ++mask) {
            std::set<VertexId> x;
            for (std::size_t i = 0; i < rc; ++i)
                if (mask & (std::uint64_t{1} << i)) x.insert(red_comps[i].begin(), red_comps[i].end());
            std::set<VertexId> a = a0;
            for (VertexId v : x) {
                if (a.count(v)) a.erase(v);
                else a.insert(v);
            }
            if (a.empty() || a.size() == g.n()) continue;
            auto cand = crossing_edges(g, a);
            if (!cand.empty() && emwc_solution_ok(inst, cand)) return cand;
        }
        return std::nullopt;
    };

    if (opts.mode == SearchMode::deterministic) {
        if (g.n() > 20) throw std::invalid_argument("deterministic coloring family capped at 20 vertices");
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.n()); ++mask) {
            std::set<VertexId> red;
            for (std::size_t i = 0; i < g.n(); ++i)
                if (mask & (std::uint64_t{1} << i)) red.insert(g.verts[i]);
            auto r = try_coloring(red);
            if (r) return r;
        }
        return std::nullopt;
    }
    if (g.n() > 16) throw std::invalid_argument("randomized coloring capped at 16 vertices");
    std::mt19937_64 rng(opts.seed);
    const std::uint64_t reps = std::uint64_t{46} << g.n();
    for (std::uint64_t it = 0; it < reps; ++it) {
        std::set<VertexId> red;
        for (VertexId v : g.verts)
            if (rng() & 1) red.insert(v);
        auto r = try_coloring(red);
        if (r) return r;
    }
    return std::nullopt;
}

EmwcInstance border_contract(const BorderInstance& b, const BorderKey& key) {
    EmwcInstance inst = b.inst;
    inst.k = key.khat;
    std::vector<VertexId> block_vertex(key.partition.size());
    for (std::size_t i = 0; i < key.partition.size(); ++i) {
        std::set<VertexId> block(key.partition[i].begin(), key.partition[i].end());
        // Map the block through previous contractions.
        std::set<VertexId> current;
        for (VertexId v : block)
            current.insert(v);
        Contraction c = contract_vertex_set(inst.g, current);
        inst.g = c.graph;
        auto remap = [&](std::set<VertexId>& s) {
            std::set<VertexId> out;
            for (VertexId v : s) out.insert(c.vertex_map.at(v));
            s = std::move(out);
        };
        remap(inst.r1);
        remap(inst.r2);
        for (std::size_t j = 0; j < i; ++j) block_vertex[j] = c.vertex_map.at(block_vertex[j]);
        block_vertex[i] = c.vertex_map.at(*current.begin());
    }
    for (std::size_t i = 0; i < key.partition.size(); ++i) {
        if (key.to_r1.count(i)) inst.r1.insert(block_vertex[i]);
        else inst.r2.insert(block_vertex[i]);
    }
    return inst;
}

namespace {

std::vector<std::vector<std::vector<VertexId>>> all_partitions(const std::set<VertexId>& x) {
    std::vector<VertexId> items(x.begin(), x.end());
    std::vector<std::vector<std::vector<VertexId>>> out;
    if (items.empty()) {
        out.push_back({});
        return out;
    }
    std::vector<std::size_t> assign(items.size(), 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t blocks) {
        if (i == items.size()) {
            std::vector<std::vector<VertexId>> part(blocks);
            for (std::size_t j = 0; j < items.size(); ++j) part[assign[j]].push_back(items[j]);
            out.push_back(part);
            return;
        }
        for (std::size_t b = 0; b <= blocks; ++b) {
            assign[i] = b;
            rec(i + 1, std::max(blocks, b + 1));
        }
    };
    rec(0, 0);
    return out;
}

std::vector<BorderKey> all_border_keys(const BorderInstance& b) {
    std::vector<BorderKey> keys;
    for (const auto& part : all_partitions(b.border)) {
        const std::size_t t = part.size();
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << t); ++mask) {
            for (std::int64_t khat = 0; khat <= b.inst.k; ++khat) {
                BorderKey key;
                key.partition = part;
                for (std::size_t i = 0; i < t; ++i)
                    if (mask & (std::uint64_t{1} << i)) key.to_r1.insert(i);
                key.khat = khat;
                keys.push_back(std::move(key));
            }
        }
    }
    return keys;
}

std::optional<std::set<std::string>> entry_check_terminals_only(const EmwcInstance& inst,
                                                                const std::set<std::string>& t) {
    if (!t.empty() && emwc_solution_ok(inst, t)) return t;
    return std::nullopt;
}

}  // namespace

BorderOutput border_solve(const BorderInstance& input, const EmwcOptions& opts) {
    BorderInstance b = input;
    if (static_cast<std::int64_t>(b.border.size()) > 4 * std::max<std::int64_t>(b.inst.k, 0))
        throw std::invalid_argument("border terminal set exceeds 4k");
    if (!is_connected(b.inst.g)) throw std::invalid_argument("graph must be connected");
    ParamPair pp = opts.params.value_or(ParamPair::defaults(b.inst.k));

    bool fallback = false;
    for (;;) {
        const MultiGraph& g = b.inst.g;
        // Stopping rule: with two terminal-free components after removing T,
        // only C = T itself can survive; emit it where it verifies.
        {
            auto comps = components(delete_edges(g, b.inst.terminals));
            std::size_t no_border = 0;
            for (const auto& c : comps) {
                bool has = false;
                for (VertexId v : c)
                    if (b.border.count(v)) has = true;
                if (!has) ++no_border;
            }
            if (no_border >= 2) {
                BorderOutput out;
                for (const auto& key : all_border_keys(b)) {
                    EmwcInstance sub = border_contract(b, key);
                    out.entries[key] = entry_check_terminals_only(sub, b.inst.terminals);
                }
                return out;
            }
        }

        std::optional<VertexCut> sep;
        if (!fallback) sep = good_separation(g, pp.q, pp.p);
        if (!sep) {
            BorderOutput out;
            for (const auto& key : all_border_keys(b)) {
                EmwcInstance sub = border_contract(b, key);
                std::optional<std::set<std::string>> r;
                if (fallback) r = solve_bruteforce(sub);
                else r = solve_unbreakable(sub, pp, opts);
                if (r && !emwc_solution_ok(sub, *r))
                    throw std::logic_error("border entry fails verification");
                out.entries[key] = r;
            }
            return out;
        }

        // Recurse into the side holding at most p border terminals.
        std::set<VertexId> u = sep->a, w = sep->b;
        auto count_border = [&](const std::set<VertexId>& side) {
            std::int64_t c = 0;
            for (VertexId v : side)
                if (b.border.count(v)) ++c;
            return c;
        };
        if (count_border(u) > pp.p) std::swap(u, w);
        if (count_border(u) > pp.p) {
            fallback = true;
            continue;
        }
        std::set<VertexId> xprime;
        for (VertexId v : u)
            if (b.border.count(v)) xprime.insert(v);
        for (const auto& e : g.edges)
            if (u.count(e.u) != u.count(e.v)) xprime.insert(u.count(e.u) ? e.u : e.v);
        if (static_cast<std::int64_t>(xprime.size()) > 4 * std::max<std::int64_t>(b.inst.k, 0)) {
            fallback = true;
            continue;
        }

        BorderInstance rec;
        rec.inst.g = induced(g, u);
        for (const auto& l : b.inst.terminals)
            if (rec.inst.g.has_edge_label(l)) rec.inst.terminals.insert(l);
        for (VertexId v : b.inst.r1)
            if (u.count(v)) rec.inst.r1.insert(v);
        for (VertexId v : b.inst.r2)
            if (u.count(v)) rec.inst.r2.insert(v);
        rec.inst.k = b.inst.k;
        rec.border = xprime;
        BorderOutput sub = border_solve(rec, opts);

        std::set<std::string> l;
        for (const auto& [key, val] : sub.entries)
            if (val) l.insert(val->begin(), val->end());

        // Contract everything in G[U] outside L u T.
        std::set<std::string> keep = l;
        keep.insert(b.inst.terminals.begin(), b.inst.terminals.end());
        std::vector<GraphEdge> contractible;
        for (const auto& e : rec.inst.g.edges)
            if (!keep.count(e.label)) contractible.push_back(e);
        // Group into connected chunks and contract chunk by chunk.
        std::map<VertexId, VertexId> parent;
        std::function<VertexId(VertexId)> find = [&](VertexId v) {
            if (!parent.count(v)) parent[v] = v;
            if (parent[v] == v) return v;
            return parent[v] = find(parent[v]);
        };
        for (const auto& e : contractible) parent[find(e.u)] = find(e.v);
        std::map<VertexId, std::set<VertexId>> groups;
        for (const auto& [v, _] : parent) groups[find(v)].insert(v);

        MultiGraph g2 = g;
        std::set<VertexId> r1 = b.inst.r1, r2 = b.inst.r2, border = b.border;
        for (auto& [root, grp] : groups) {
            if (grp.size() < 2) continue;
            Contraction c = contract_vertex_set(g2, grp);
            g2 = c.graph;
            auto remap = [&](std::set<VertexId>& s) {
                std::set<VertexId> out2;
                for (VertexId v : s) out2.insert(c.vertex_map.at(v));
                s = std::move(out2);
            };
            remap(r1);
            remap(r2);
            remap(border);
            // Every group shrinks through the map, the contracted one included,
            // so later contractions never see stale ids.
            for (auto& [root2, grp2] : groups) remap(grp2);
        }
        if (g2.n() >= g.n()) {
            fallback = true;
            continue;
        }
        b.inst.g = std::move(g2);
        b.inst.r1 = std::move(r1);
        b.inst.r2 = std::move(r2);
        b.border = std::move(border);
    }
}

std::optional<std::set<std::string>> solve_emwc(const EmwcInstance& inst, const EmwcOptions& opts) {
    if (inst.k < 0) return std::nullopt;
    if (!is_connected(inst.g)) throw std::invalid_argument("graph must be connected");
    for (const auto& l : inst.terminals) inst.g.edge(l);
    for (VertexId v : inst.r1)
        if (inst.r2.count(v)) return std::nullopt;

    BorderInstance b{inst, {}};
    BorderOutput out = border_solve(b, opts);
    BorderKey key;
    key.khat = inst.k;
    auto it = out.entries.find(key);
    if (it == out.entries.end()) throw std::logic_error("missing top-level border entry");
    if (it->second && !emwc_solution_ok(inst, *it->second))
        throw std::logic_error("emwc witness fails verification");
    return it->second;
}

}  // namespace spancirc
