#include "spancirc/decomp.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace spancirc {

namespace {

BinaryMatroid r10_with_edits(const R10Edits& edits) {
    BinaryMatroid m = r10();
    for (const auto& [of, label] : edits.parallels) m = add_parallel(m, of, label);
    if (!edits.deleted.empty()) m = delete_elements(m, m.set_of(edits.deleted));
    return m;
}

}  // namespace

BasicNode BasicNode::make_graphic(MultiGraph g) {
    BasicNode n;
    n.kind = NodeKind::graphic;
    n.matroid = cycle_matroid(g);
    n.graph = std::move(g);
    return n;
}

BasicNode BasicNode::make_cographic(MultiGraph g) {
    BasicNode n;
    n.kind = NodeKind::cographic;
    n.matroid = bond_matroid(g);
    n.graph = std::move(g);
    return n;
}

BasicNode BasicNode::make_r10(R10Edits edits) {
    BasicNode n;
    n.kind = NodeKind::r10_derived;
    n.matroid = r10_with_edits(edits);
    n.edits = std::move(edits);
    return n;
}

BasicNode node_delete_element(const BasicNode& node, const std::string& label) {
    switch (node.kind) {
        case NodeKind::graphic:
            return BasicNode::make_graphic(delete_edges(node.graph, {label}));
        case NodeKind::cographic:
            // Deleting in M*(G) is contracting in G.
            return BasicNode::make_cographic(contract_edge(node.graph, label).graph);
        case NodeKind::r10_derived: {
            R10Edits e = node.edits;
            e.deleted.push_back(label);
            return BasicNode::make_r10(std::move(e));
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

LabelSet label_set(const std::vector<std::string>& v) { return LabelSet(v.begin(), v.end()); }

LabelSet ground_of(const BasicNode& n) { return label_set(n.matroid.labels); }

LabelSet intersect(const LabelSet& a, const LabelSet& b) {
    LabelSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.begin()));
    return out;
}

}  // namespace

Validation validate(const ConflictTree& t) {
    if (t.nodes.empty()) return {false, "tree has no nodes"};
    if (t.root >= t.nodes.size()) return {false, "root id out of range"};
    for (const auto& e : t.edges) {
        if (e.a >= t.nodes.size() || e.b >= t.nodes.size() || e.a == e.b)
            return {false, "tree edge endpoints invalid"};
    }
    // Tree shape: n-1 edges and connected.
    if (t.edges.size() != t.nodes.size() - 1)
        return {false, "node adjacency is not a tree (edge count)"};
    {
        std::vector<std::size_t> parent(t.nodes.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& e : t.edges) {
            std::size_t ra = find(e.a), rb = find(e.b);
            if (ra == rb) return {false, "node adjacency is not a tree (cycle)"};
            parent[ra] = rb;
        }
    }
    std::vector<LabelSet> grounds;
    grounds.reserve(t.nodes.size());
    for (const auto& n : t.nodes) grounds.push_back(ground_of(n));

    std::map<std::pair<std::size_t, std::size_t>, LabelSet> declared;
    for (const auto& e : t.edges) {
        auto key = std::minmax(e.a, e.b);
        declared[{key.first, key.second}] = label_set(e.shared);
    }
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < t.nodes.size(); ++j) {
            LabelSet common = intersect(grounds[i], grounds[j]);
            auto it = declared.find({i, j});
            if (it == declared.end()) {
                if (!common.empty())
                    return {false, "nonadjacent nodes " + std::to_string(i) + "," +
                                       std::to_string(j) + " share labels"};
                continue;
            }
            if (common != it->second)
                return {false, "declared shared set of edge " + std::to_string(i) + "," +
                                   std::to_string(j) + " does not match the actual intersection"};
            // Size 0 is a 1-sum edge; 2 or anything above 3 is out.
            if (common.size() != 0 && common.size() != 1 && common.size() != 3)
                return {false, "shared set of edge " + std::to_string(i) + "," +
                                   std::to_string(j) + " has forbidden size " +
                                   std::to_string(common.size())};
            if (common.size() == 3) {
                std::vector<std::string> zl(common.begin(), common.end());
                for (std::size_t n : {i, j}) {
                    const BinaryMatroid& m = t.nodes[n].matroid;
                    if (!is_circuit(m, m.set_of(zl)))
                        return {false, "shared triple of edge " + std::to_string(i) + "," +
                                           std::to_string(j) + " is not a circuit of node " +
                                           std::to_string(n)};
                }
            }
        }
    }
    return {true, ""};
}

BinaryMatroid sum(const BinaryMatroid& m1, const BinaryMatroid& m2) {
    LabelSet g1 = label_set(m1.labels), g2 = label_set(m2.labels);
    LabelSet shared = intersect(g1, g2);
    if (shared.size() != 0 && shared.size() != 1 && shared.size() != 3)
        throw std::invalid_argument("illegal shared-set size " + std::to_string(shared.size()));
    if (shared.size() == 3) {
        std::vector<std::string> zl(shared.begin(), shared.end());
        if (!is_circuit(m1, m1.set_of(zl)) || !is_circuit(m2, m2.set_of(zl)))
            throw std::invalid_argument("shared triple is not a circuit of both parts");
    }

    // Coordinates: E(M1) in order, then E(M2)\E(M1) in order.
    std::vector<std::string> union_labels = m1.labels;
    for (const auto& l : m2.labels)
        if (!g1.count(l)) union_labels.push_back(l);
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < union_labels.size(); ++i) pos[union_labels[i]] = i;
    const std::size_t nu = union_labels.size();

    auto embed = [&](const BinaryMatroid& m, const Bits& v) {
        Bits out(nu);
        for (std::size_t i = v.find_first(); i != Bits::npos; i = v.find_next(i))
            out.set(pos.at(m.labels[i]));
        return out;
    };
    std::vector<Bits> gens;
    for (const Bits& v : gf2_nullspace_basis(m1.matrix)) gens.push_back(embed(m1, v));
    for (const Bits& v : gf2_nullspace_basis(m2.matrix)) gens.push_back(embed(m2, v));

    // Keep only combinations vanishing on the shared coordinates.
    std::vector<std::size_t> shared_pos;
    for (const auto& l : shared) shared_pos.push_back(pos.at(l));
    std::vector<Bits> cycle_basis;
    if (shared_pos.empty()) {
        cycle_basis = gens;
    } else {
        Gf2Matrix a(shared_pos.size(), gens.size());
        for (std::size_t i = 0; i < shared_pos.size(); ++i)
            for (std::size_t j = 0; j < gens.size(); ++j)
                if (gens[j].test(shared_pos[i])) a.set(i, j, true);
        for (const Bits& combo : gf2_nullspace_basis(a)) {
            Bits v(nu);
            for (std::size_t j = combo.find_first(); j != Bits::npos; j = combo.find_next(j))
                v ^= gens[j];
            cycle_basis.push_back(v);
        }
    }

    // Drop the shared coordinates (all zero now) and rebuild a representation as
    // the orthogonal complement of the cycle space.
    std::vector<std::string> ground;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < nu; ++i) {
        if (!shared.count(union_labels[i])) {
            keep.push_back(i);
            ground.push_back(union_labels[i]);
        }
    }
    std::vector<Bits> projected;
    for (const Bits& v : cycle_basis) {
        Bits w(keep.size());
        for (std::size_t j = 0; j < keep.size(); ++j)
            if (v.test(keep[j])) w.set(j);
        projected.push_back(w);
    }
    projected = gf2_row_reduce(std::move(projected));

    Gf2Matrix cyc(projected.size(), ground.size());
    for (std::size_t i = 0; i < projected.size(); ++i) cyc.row_bits[i] = projected[i];
    std::vector<Bits> rep_rows = gf2_nullspace_basis(cyc);
    Gf2Matrix rep(rep_rows.size(), ground.size());
    for (std::size_t i = 0; i < rep_rows.size(); ++i) rep.row_bits[i] = rep_rows[i];
    return BinaryMatroid(std::move(rep), std::move(ground));
}

BinaryMatroid compose(const ConflictTree& t) {
    Validation v = validate(t);
    if (!v.ok) throw std::invalid_argument("invalid conflict tree: " + v.message);
    std::vector<bool> merged(t.nodes.size(), false);
    std::vector<bool> edge_done(t.edges.size(), false);
    BinaryMatroid acc = t.nodes[t.root].matroid;
    merged[t.root] = true;
    for (std::size_t step = 0; step + 1 < t.nodes.size(); ++step) {
        bool progressed = false;
        for (std::size_t i = 0; i < t.edges.size(); ++i) {
            if (edge_done[i]) continue;
            const auto& e = t.edges[i];
            if (merged[e.a] == merged[e.b]) continue;
            std::size_t next = merged[e.a] ? e.b : e.a;
            acc = sum(acc, t.nodes[next].matroid);
            merged[next] = true;
            edge_done[i] = true;
            progressed = true;
            break;
        }
        if (!progressed) throw std::logic_error("conflict tree fold did not progress");
    }
    return acc;
}

namespace {

LabelSet xor_labels(const LabelSet& a, const LabelSet& b) {
    LabelSet out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::inserter(out, out.begin()));
    return out;
}

// The assembled families are cycles of the sum; circuits are the minimal
// nonempty ones.  The filter only matters for degenerate extended sums (shared
// loops or parallels); elsewhere every family member is already a circuit.
std::set<LabelSet> minimal_members(const std::set<LabelSet>& family) {
    std::set<LabelSet> out;
    for (const auto& s : family) {
        if (s.empty()) continue;
        bool minimal = true;
        for (const auto& t : family) {
            if (t.empty() || t == s) continue;
            if (std::includes(s.begin(), s.end(), t.begin(), t.end())) { minimal = false; break; }
        }
        if (minimal) out.insert(s);
    }
    return out;
}

LabelSet to_labels(const BinaryMatroid& m, const ElementSet& s) {
    auto v = m.labels_of(s);
    return LabelSet(v.begin(), v.end());
}

}  // namespace

std::set<LabelSet> sum2_circuits(const BinaryMatroid& m1, const BinaryMatroid& m2,
                                 const std::string& e) {
    std::set<LabelSet> out;
    auto c1 = enumerate_circuits(m1);
    auto c2 = enumerate_circuits(m2);
    std::size_t e1 = m1.index_of(e), e2 = m2.index_of(e);
    for (const auto& c : c1)
        if (!c.test(e1)) out.insert(to_labels(m1, c));
    for (const auto& c : c2)
        if (!c.test(e2)) out.insert(to_labels(m2, c));
    for (const auto& a : c1) {
        if (!a.test(e1)) continue;
        for (const auto& b : c2) {
            if (!b.test(e2)) continue;
            LabelSet joined = xor_labels(to_labels(m1, a), to_labels(m2, b));
            out.insert(joined);
        }
    }
    return minimal_members(out);
}

std::set<LabelSet> sum3_circuits(const BinaryMatroid& m1, const BinaryMatroid& m2,
                                 const LabelSet& z) {
    if (z.size() != 3) throw std::invalid_argument("shared set must have size 3");
    std::vector<std::string> zl(z.begin(), z.end());
    ElementSet z1 = m1.set_of(zl), z2 = m2.set_of(zl);
    std::set<LabelSet> out;
    auto c1 = enumerate_circuits(m1);
    auto c2 = enumerate_circuits(m2);
    for (const auto& c : c1)
        if (set_and(c, z1).empty()) out.insert(to_labels(m1, c));
    for (const auto& c : c2)
        if (set_and(c, z2).empty()) out.insert(to_labels(m2, c));
    for (const auto& a : c1) {
        ElementSet az = set_and(a, z1);
        if (az.count() != 1) continue;
        std::string shared_elem = m1.labels[az.bits.find_first()];
        bool a_side = is_circuit(m1, set_xor(a, z1));
        for (const auto& b : c2) {
            ElementSet bz = set_and(b, z2);
            if (bz.count() != 1) continue;
            if (m2.labels[bz.bits.find_first()] != shared_elem) continue;
            if (!a_side && !is_circuit(m2, set_xor(b, z2))) continue;
            out.insert(xor_labels(to_labels(m1, a), to_labels(m2, b)));
        }
    }
    return minimal_members(out);
}

std::vector<ElementSet> triangle_split(const BinaryMatroid& m, const ElementSet& z,
                                       const ElementSet& c) {
    if (z.count() != 3 || !is_circuit(m, z))
        throw std::invalid_argument("Z must be a circuit of size 3");
    if (!is_circuit(m, c)) throw std::invalid_argument("C must be a circuit");
    if (set_and(c, z).count() != 1)
        throw std::invalid_argument("C must meet Z in exactly one element");
    ElementSet cz = set_xor(c, z);
    if (is_circuit(m, cz)) return {cz};
    auto parts = decompose_cycle(m, cz);
    if (parts.size() != 2) throw std::logic_error("split cycle is not two circuits");
    for (const auto& p : parts) {
        if (!is_circuit(m, set_xor(p, z)))
            throw std::logic_error("split part has non-circuit symmetric difference with Z");
    }
    return parts;
}

ElementSet triangle_merge(const BinaryMatroid& m, const ElementSet& z, const ElementSet& c) {
    if (z.count() != 3 || !is_circuit(m, z))
        throw std::invalid_argument("Z must be a circuit of size 3");
    if (!is_circuit(m, c)) throw std::invalid_argument("C must be a circuit");
    if (set_and(c, z).count() != 2)
        throw std::invalid_argument("C must meet Z in exactly two elements");
    ElementSet cz = set_xor(c, z);
    if (!is_circuit(m, cz)) throw std::logic_error("C^Z is not a circuit");
    return cz;
}

ConflictTree remove_node(const ConflictTree& t, std::size_t node) {
    if (node >= t.nodes.size()) throw std::invalid_argument("node id out of range");
    if (t.nodes.size() == 1) throw std::invalid_argument("cannot remove the last node");
    ConflictTree out;
    std::vector<std::size_t> remap(t.nodes.size(), SIZE_MAX);
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        if (i == node) continue;
        remap[i] = out.nodes.size();
        out.nodes.push_back(t.nodes[i]);
    }
    for (const auto& e : t.edges) {
        if (e.a == node || e.b == node) continue;
        out.edges.push_back(TreeEdge{remap[e.a], remap[e.b], e.shared});
    }
    out.root = t.root == node ? 0 : remap[t.root];
    return out;
}

std::set<std::string> tree_ground_labels(const ConflictTree& t) {
    std::map<std::string, int> count;
    for (const auto& n : t.nodes)
        for (const auto& l : n.matroid.labels) count[l] += 1;
    std::set<std::string> out;
    for (const auto& [l, c] : count)
        if (c == 1) out.insert(l);
    return out;
}

}  // namespace spancirc
