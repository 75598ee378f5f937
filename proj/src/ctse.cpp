#include "spancirc/ctse.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>

namespace spancirc {

Weight ctse_extra_weight(const MultiGraph& g, const std::set<std::string>& terminals,
                         const std::set<std::string>& cycle) {
    Weight w = 0;
    for (const auto& l : cycle)
        if (!terminals.count(l)) w += g.edge(l).weight;
    return w;
}

namespace {

struct TDegree {
    std::map<VertexId, int> deg;
    std::map<VertexId, std::vector<std::string>> incident;
};

TDegree terminal_degrees(const MultiGraph& g, const std::set<std::string>& terminals) {
    TDegree t;
    for (const auto& l : terminals) {
        const GraphEdge& e = g.edge(l);
        t.deg[e.u] += 1;
        t.deg[e.v] += 1;
        t.incident[e.u].push_back(l);
        if (e.v != e.u) t.incident[e.v].push_back(l);
    }
    return t;
}

// G[T] must be a disjoint union of paths with at most k components.
bool stopping_rule_rejects(const MultiGraph& g, const std::set<std::string>& terminals,
                           std::int64_t k, std::size_t* component_count) {
    TDegree t = terminal_degrees(g, terminals);
    for (const auto& [v, d] : t.deg)
        if (d > 2) return true;
    for (const auto& l : terminals)
        if (g.edge(l).is_loop()) return true;
    // Count components and detect cycles among terminal edges.
    std::map<VertexId, VertexId> parent;
    std::function<VertexId(VertexId)> find = [&](VertexId x) {
        if (parent[x] == x) return x;
        return parent[x] = find(parent[x]);
    };
    for (const auto& [v, d] : t.deg) parent[v] = v;
    std::size_t comps = t.deg.size();
    for (const auto& l : terminals) {
        const GraphEdge& e = g.edge(l);
        VertexId a = find(e.u), b = find(e.v);
        if (a == b) return true;  // terminal edges close a cycle
        parent[a] = b;
        --comps;
    }
    *component_count = comps;
    return comps >= static_cast<std::size_t>(k) + 1;
}

struct Dissolved {
    MultiGraph g;
    std::set<std::string> terminals;
    std::map<std::string, std::pair<std::string, std::string>> expansion;
};

Dissolved dissolve(MultiGraph g, std::set<std::string> terminals) {
    Dissolved out;
    int synth = 0;
    for (;;) {
        TDegree t = terminal_degrees(g, terminals);
        VertexId v = INT32_MIN;
        for (const auto& [u, d] : t.deg) {
            if (d == 2) { v = u; break; }
        }
        if (v == INT32_MIN) break;
        const auto& inc = t.incident.at(v);
        std::string l1 = inc[0], l2 = inc[1];
        GraphEdge e1 = g.edge(l1), e2 = g.edge(l2);
        VertexId x = e1.u == v ? e1.v : e1.u;
        VertexId y = e2.u == v ? e2.v : e2.u;
        // Drop every non-terminal edge at v, then v itself, then bridge x and y.
        std::set<std::string> drop{l1, l2};
        for (const auto& e : g.edges)
            if ((e.u == v || e.v == v) && !terminals.count(e.label)) drop.insert(e.label);
        MultiGraph h = delete_edges(g, drop);
        h = delete_vertex(h, v);
        std::string label;
        do {
            label = "__d" + std::to_string(synth++);
        } while (h.has_edge_label(label));
        std::vector<GraphEdge> es = h.edges;
        es.push_back({label, x, y, 1});
        g = MultiGraph(h.verts, es);
        terminals.erase(l1);
        terminals.erase(l2);
        terminals.insert(label);
        out.expansion[label] = {l1, l2};
    }
    out.g = std::move(g);
    out.terminals = std::move(terminals);
    return out;
}

std::set<std::string> expand_labels(const std::set<std::string>& cycle,
                                    const std::map<std::string, std::pair<std::string, std::string>>& map) {
    std::set<std::string> out;
    std::vector<std::string> todo(cycle.begin(), cycle.end());
    while (!todo.empty()) {
        std::string l = todo.back();
        todo.pop_back();
        auto it = map.find(l);
        if (it == map.end()) {
            out.insert(l);
        } else {
            todo.push_back(it->second.first);
            todo.push_back(it->second.second);
        }
    }
    return out;
}

struct DijkstraResult {
    Weight dist = kInfWeight;
    std::set<std::string> path_edges;
};

// Shortest path avoiding a set of edges; multigraph-aware, returns path edges.
DijkstraResult shortest_path(const MultiGraph& g, VertexId from, VertexId to,
                             const std::set<std::string>& banned) {
    std::map<VertexId, std::size_t> idx;
    for (std::size_t i = 0; i < g.verts.size(); ++i) idx[g.verts[i]] = i;
    std::vector<Weight> dist(g.n(), kInfWeight);
    std::vector<std::int32_t> pvert(g.n(), -1), pedge(g.n(), -1);
    using Item = std::pair<Weight, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[idx.at(from)] = 0;
    pq.push({0, idx.at(from)});
    while (!pq.empty()) {
        auto [d, at] = pq.top();
        pq.pop();
        if (d > dist[at]) continue;
        for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
            const GraphEdge& e = g.edges[ei];
            if (e.is_loop() || banned.count(e.label)) continue;
            std::size_t iu = idx.at(e.u), iv = idx.at(e.v);
            std::size_t other;
            if (iu == at) other = iv;
            else if (iv == at) other = iu;
            else continue;
            if (dist[at] + e.weight < dist[other]) {
                dist[other] = dist[at] + e.weight;
                pvert[other] = static_cast<std::int32_t>(at);
                pedge[other] = static_cast<std::int32_t>(ei);
                pq.push({dist[other], other});
            }
        }
    }
    DijkstraResult res;
    std::size_t t = idx.at(to);
    res.dist = dist[t];
    if (res.dist < kInfWeight) {
        for (std::size_t at = t; pvert[at] >= 0; at = static_cast<std::size_t>(pvert[at]))
            res.path_edges.insert(g.edges[static_cast<std::size_t>(pedge[at])].label);
    }
    return res;
}

// Minimum-weight cycle of a multigraph: loops, then per-edge shortest-path closure.
std::optional<std::set<std::string>> minimum_cycle(const MultiGraph& g) {
    Weight best = kInfWeight;
    std::set<std::string> best_cycle;
    for (const auto& e : g.edges) {
        if (e.is_loop()) {
            if (e.weight < best) {
                best = e.weight;
                best_cycle = {e.label};
            }
            continue;
        }
        DijkstraResult r = shortest_path(g, e.u, e.v, {e.label});
        if (r.dist < kInfWeight && r.dist + e.weight < best) {
            best = r.dist + e.weight;
            best_cycle = r.path_edges;
            best_cycle.insert(e.label);
        }
    }
    if (best >= kInfWeight) return std::nullopt;
    return best_cycle;
}

}  // namespace

CtsePrepared ctse_prepare(const MultiGraph& g, const std::set<std::string>& terminals) {
    CtsePrepared p;
    p.g = g;
    std::set<VertexId> u;
    for (const auto& l : terminals) {
        p.terminals.push_back(g.edge(l));
        u.insert(g.edge(l).u);
        u.insert(g.edge(l).v);
    }
    std::sort(p.terminals.begin(), p.terminals.end(),
              [](const GraphEdge& a, const GraphEdge& b) { return a.label < b.label; });
    if (u.size() != 2 * p.terminals.size())
        throw std::invalid_argument("terminal edges must form a matching");
    for (std::size_t i = 0; i < g.verts.size(); ++i) p.vindex[g.verts[i]] = i;
    for (VertexId v : g.verts)
        if (!u.count(v)) p.off_u.push_back(v);
    return p;
}

PathTable dp_paths(const CtsePrepared& p, const std::map<VertexId, int>& color, int h,
                   std::size_t anchor, VertexId u) {
    const MultiGraph& g = p.g;
    const GraphEdge& t = p.terminals.at(anchor);
    if (u != t.u && u != t.v) throw std::invalid_argument("anchor endpoint mismatch");
    VertexId mate = u == t.u ? t.v : t.u;
    const std::size_t n = g.n();
    const std::size_t masks = std::size_t{1} << h;

    std::set<std::string> terminal_labels;
    std::set<VertexId> uset;
    for (const auto& e : p.terminals) {
        terminal_labels.insert(e.label);
        uset.insert(e.u);
        uset.insert(e.v);
    }

    PathTable tab;
    tab.val.assign(masks, std::vector<Weight>(n, kInfWeight));
    tab.parent_vertex.assign(masks, std::vector<std::int32_t>(n, -1));
    tab.parent_edge.assign(masks, std::vector<std::int32_t>(n, -1));
    const std::size_t ui = p.vindex.at(u);
    const std::size_t matei = p.vindex.at(mate);

    auto is_off_u = [&](VertexId v) { return !uset.count(v); };

    for (std::size_t mask = 0; mask < masks; ++mask) {
        tab.val[mask][ui] = 0;
        // Off-U targets first: they depend on strictly smaller masks.
        for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
            const GraphEdge& e = g.edges[ei];
            if (e.is_loop() || terminal_labels.count(e.label)) continue;
            for (int dir = 0; dir < 2; ++dir) {
                VertexId xv = dir ? e.v : e.u;
                VertexId zv = dir ? e.u : e.v;
                if (!is_off_u(zv)) continue;
                if (!(is_off_u(xv) || xv == u)) continue;
                int c = color.at(zv);
                if (c < 0 || c >= h || !(mask & (std::size_t{1} << c))) continue;
                std::size_t sub = mask ^ (std::size_t{1} << c);
                std::size_t xi = p.vindex.at(xv), zi = p.vindex.at(zv);
                if (tab.val[sub][xi] >= kInfWeight) continue;
                Weight cand = tab.val[sub][xi] + e.weight;
                if (cand < tab.val[mask][zi]) {
                    tab.val[mask][zi] = cand;
                    tab.parent_vertex[mask][zi] = static_cast<std::int32_t>(xi);
                    tab.parent_edge[mask][zi] = static_cast<std::int32_t>(ei);
                }
            }
        }
        // U targets close a path; they read same-mask off-U values.
        for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
            const GraphEdge& e = g.edges[ei];
            if (e.is_loop() || terminal_labels.count(e.label)) continue;
            for (int dir = 0; dir < 2; ++dir) {
                VertexId xv = dir ? e.v : e.u;
                VertexId zv = dir ? e.u : e.v;
                if (is_off_u(zv) || zv == u || zv == mate) continue;
                if (!(is_off_u(xv) || xv == u)) continue;
                std::size_t xi = p.vindex.at(xv), zi = p.vindex.at(zv);
                if (tab.val[mask][xi] >= kInfWeight) continue;
                Weight cand = tab.val[mask][xi] + e.weight;
                if (cand < tab.val[mask][zi]) {
                    tab.val[mask][zi] = cand;
                    tab.parent_vertex[mask][zi] = static_cast<std::int32_t>(xi);
                    tab.parent_edge[mask][zi] = static_cast<std::int32_t>(ei);
                }
            }
        }
        tab.val[mask][matei] = kInfWeight;
    }
    return tab;
}

namespace {

// Walks a PathTable back from (mask, target) to the anchor endpoint.
void collect_segment(const CtsePrepared& p, const PathTable& tab,
                     const std::map<VertexId, int>& color, std::size_t mask, VertexId target,
                     VertexId anchor_u, std::set<std::string>* out) {
    std::size_t zi = p.vindex.at(target);
    const std::size_t ui = p.vindex.at(anchor_u);
    std::size_t m = mask;
    if (tab.val[m][zi] >= kInfWeight)
        throw std::logic_error("segment reconstruction hit an infinite entry");
    while (zi != ui) {
        std::int32_t pv = tab.parent_vertex[m][zi];
        std::int32_t pe = tab.parent_edge[m][zi];
        if (pv < 0 || pe < 0) throw std::logic_error("broken parent chain in path table");
        out->insert(p.g.edges[static_cast<std::size_t>(pe)].label);
        VertexId zv = p.g.verts[zi];
        bool off_u = true;
        for (const auto& t : p.terminals)
            if (t.u == zv || t.v == zv) off_u = false;
        if (off_u) m ^= std::size_t{1} << color.at(zv);
        zi = static_cast<std::size_t>(pv);
    }
}

}  // namespace

Weight dp_stitch(const CtsePrepared& p, const std::map<VertexId, int>& color, int h,
                 std::set<std::string>* witness_out, CtseStats* stats) {
    const std::size_t r = p.terminals.size();
    if (r < 2) throw std::invalid_argument("dp_stitch needs at least two terminals");
    const std::size_t masks = std::size_t{1} << h;
    const std::size_t ysets = std::size_t{1} << (r - 1);

    // Tables for both endpoints of every terminal.
    std::vector<std::array<PathTable, 2>> s(r);
    for (std::size_t i = 0; i < r; ++i) {
        s[i][0] = dp_paths(p, color, h, i, p.terminals[i].u);
        s[i][1] = dp_paths(p, color, h, i, p.terminals[i].v);
    }
    // Slot encoding: 2i endpoint u of terminal i, 2i+1 endpoint v.
    auto slot_vertex = [&](std::size_t slot) {
        const GraphEdge& t = p.terminals[slot / 2];
        return slot % 2 == 0 ? t.u : t.v;
    };
    const std::size_t nslots = 2 * r;
    std::vector<std::vector<std::vector<Weight>>> c(
        masks, std::vector<std::vector<Weight>>(ysets, std::vector<Weight>(nslots, kInfWeight)));
    struct Choice {
        std::int32_t j = -1;
        std::uint32_t xprime = 0;
        std::int8_t side = 0;  // which endpoint of terminal j the previous path ended at
    };
    std::vector<std::vector<std::vector<Choice>>> choice(
        masks, std::vector<std::vector<Choice>>(ysets, std::vector<Choice>(nslots)));

    // Base: direct colorful path from the start endpoint (terminal 0, slot 1).
    const VertexId start = p.terminals[0].v;
    for (std::size_t mask = 0; mask < masks; ++mask) {
        for (std::size_t slot = 2; slot < nslots; ++slot) {
            VertexId v = slot_vertex(slot);
            c[mask][0][slot] = s[0][1].val[mask][p.vindex.at(v)];
        }
    }
    for (std::size_t yset = 1; yset < ysets; ++yset) {
        for (std::size_t mask = 0; mask < masks; ++mask) {
            for (std::size_t slot = 0; slot < nslots; ++slot) {
                // slot 0 (finish) is reachable; slot 1 (start) stays unused.
                if (slot == 1) continue;
                if (slot >= 2 && (yset & (std::size_t{1} << (slot / 2 - 1)))) continue;
                Weight best = kInfWeight;
                Choice bc;
                for (std::size_t j = 1; j < r; ++j) {
                    if (!(yset & (std::size_t{1} << (j - 1)))) continue;
                    std::size_t rest = yset ^ (std::size_t{1} << (j - 1));
                    const Weight tw = p.terminals[j].weight;
                    std::size_t sub = mask;
                    for (;;) {
                        // Arrive at x_j earlier, cross terminal j, continue from y_j (and
                        // symmetrically).
                        for (int side = 0; side < 2; ++side) {
                            std::size_t arrive_slot = 2 * j + (side == 0 ? 0 : 1);
                            std::size_t depart = side == 0 ? 1 : 0;
                            Weight pre = c[mask ^ sub][rest][arrive_slot];
                            if (pre < kInfWeight) {
                                Weight seg =
                                    s[j][depart].val[sub][p.vindex.at(slot_vertex(slot))];
                                if (seg < kInfWeight && pre + tw + seg < best) {
                                    best = pre + tw + seg;
                                    bc = Choice{static_cast<std::int32_t>(j),
                                                static_cast<std::uint32_t>(sub),
                                                static_cast<std::int8_t>(side)};
                                }
                            }
                        }
                        if (sub == 0) break;
                        sub = (sub - 1) & mask;
                    }
                }
                c[mask][yset][slot] = best;
                choice[mask][yset][slot] = bc;
                if (stats) stats->dp_cells += 1;
            }
        }
    }
    const std::size_t full_mask = masks - 1;
    const std::size_t full_y = ysets - 1;
    const Weight path = c[full_mask][full_y][0];
    const Weight total = path >= kInfWeight ? kInfWeight : path + p.terminals[0].weight;
    if (witness_out && total < kInfWeight) {
        witness_out->clear();
        witness_out->insert(p.terminals[0].label);
        std::size_t mask = full_mask, yset = full_y, slot = 0;
        while (yset != 0) {
            const Choice& ch = choice[mask][yset][slot];
            if (ch.j < 0) throw std::logic_error("broken stitch chain");
            std::size_t j = static_cast<std::size_t>(ch.j);
            int depart = ch.side == 0 ? 1 : 0;
            VertexId from = depart == 0 ? p.terminals[j].u : p.terminals[j].v;
            collect_segment(p, s[j][depart], color, ch.xprime, slot_vertex(slot), from,
                            witness_out);
            witness_out->insert(p.terminals[j].label);
            mask ^= ch.xprime;
            yset ^= std::size_t{1} << (j - 1);
            slot = 2 * j + (ch.side == 0 ? 0 : 1);
        }
        collect_segment(p, s[0][1], color, mask, slot_vertex(slot), start, witness_out);
    }
    return total;
}

std::optional<std::set<std::string>> solve_ctse(const CtseInstance& inst, const CtseOptions& opts,
                                                CtseStats* stats) {
    const MultiGraph& g0 = inst.g;
    if (inst.k < 0) return std::nullopt;
    for (const auto& l : inst.terminals) g0.edge(l);  // membership check

    // A terminal set that is itself a cycle is its own optimum.
    if (!inst.terminals.empty() && is_simple_cycle_edge_set(g0, inst.terminals))
        return inst.terminals;

    std::size_t comps = 0;
    if (!inst.terminals.empty() && stopping_rule_rejects(g0, inst.terminals, inst.k, &comps))
        return std::nullopt;

    Dissolved d = dissolve(g0, inst.terminals);
    const std::size_t r = d.terminals.size();

    auto finish = [&](std::set<std::string> cycle) -> std::optional<std::set<std::string>> {
        std::set<std::string> expanded = expand_labels(cycle, d.expansion);
        if (!is_simple_cycle_edge_set(g0, expanded))
            throw std::logic_error("ctse produced a non-cycle witness");
        for (const auto& l : inst.terminals)
            if (!expanded.count(l)) throw std::logic_error("ctse witness misses a terminal");
        if (ctse_extra_weight(g0, inst.terminals, expanded) > inst.k)
            throw std::logic_error("ctse witness over budget");
        return expanded;
    };

    if (r == 0) {
        auto cyc = minimum_cycle(d.g);
        if (!cyc) return std::nullopt;
        if (ctse_extra_weight(d.g, {}, *cyc) > inst.k) return std::nullopt;
        return finish(*cyc);
    }
    if (r == 1) {
        const GraphEdge t = d.g.edge(*d.terminals.begin());
        DijkstraResult res = shortest_path(d.g, t.u, t.v, {t.label});
        if (res.dist >= kInfWeight || res.dist > inst.k) return std::nullopt;
        std::set<std::string> cyc = res.path_edges;
        cyc.insert(t.label);
        return finish(cyc);
    }
    if (static_cast<std::int64_t>(r) > inst.k) return std::nullopt;

    CtsePrepared p = ctse_prepare(d.g, d.terminals);
    const int h = static_cast<int>(std::min<std::int64_t>(inst.k - static_cast<std::int64_t>(r),
                                                          static_cast<std::int64_t>(p.off_u.size())));
    Weight terminal_weight = 0;
    for (const auto& t : p.terminals) terminal_weight += t.weight;

    Weight best = kInfWeight;
    std::set<std::string> best_cycle;
    auto try_coloring = [&](const std::map<VertexId, int>& color) {
        if (stats) stats->colorings += 1;
        std::set<std::string> cyc;
        Weight w = dp_stitch(p, color, h, &cyc, stats);
        if (w < best) {
            best = w;
            best_cycle = std::move(cyc);
        }
    };

    if (h == 0 || h >= static_cast<int>(p.off_u.size()) ||
        opts.mode == SearchMode::deterministic) {
        if (h == 0) {
            // No internal vertices allowed; one inert coloring.
            std::map<VertexId, int> color;
            for (VertexId v : p.off_u) color[v] = 0;
            try_coloring(color);
        } else if (h >= static_cast<int>(p.off_u.size())) {
            // One injective coloring covers every candidate cycle.
            std::map<VertexId, int> color;
            int c = 0;
            for (VertexId v : p.off_u) color[v] = c++;
            try_coloring(color);
        } else {
            // All placements of h distinguished vertices; any solution uses at
            // most h off-U vertices, so some placement colors it injectively.
            std::vector<std::size_t> pick(h);
            for (int i = 0; i < h; ++i) pick[i] = i;
            for (;;) {
                std::map<VertexId, int> color;
                for (VertexId v : p.off_u) color[v] = 0;
                for (int i = 0; i < h; ++i) color[p.off_u[pick[i]]] = i;
                try_coloring(color);
                int i = h - 1;
                while (i >= 0 && pick[i] == p.off_u.size() - static_cast<std::size_t>(h - i)) --i;
                if (i < 0) break;
                ++pick[i];
                for (int j = i + 1; j < h; ++j) pick[j] = pick[j - 1] + 1;
            }
        }
    } else {
        std::mt19937_64 rng(opts.seed);
        const std::uint64_t reps = static_cast<std::uint64_t>(40.0 * std::exp(h)) + 10;
        for (std::uint64_t it = 0; it < reps; ++it) {
            std::map<VertexId, int> color;
            for (VertexId v : p.off_u) color[v] = static_cast<int>(rng() % h);
            try_coloring(color);
        }
    }

    if (best >= kInfWeight || best - terminal_weight > inst.k) return std::nullopt;
    return finish(best_cycle);
}

}  // namespace spancirc
