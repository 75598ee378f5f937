#pragma once

#include "spancirc/gf2.hpp"
#include "spancirc/graph.hpp"

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace spancirc {

enum class NodeKind { graphic, cographic, r10_derived };

// Edits applied to R10: parallels are added in list order, deletions last, so a
// later rule can retire any element (original or added) by appending to
// `deleted`.
struct R10Edits {
    std::vector<std::pair<std::string, std::string>> parallels;  // (of, new label)
    std::vector<std::string> deleted;
};

struct BasicNode {
    NodeKind kind = NodeKind::graphic;
    MultiGraph graph;   // realizing graph for graphic/cographic nodes
    R10Edits edits;     // for r10-derived nodes
    BinaryMatroid matroid;

    static BasicNode make_graphic(MultiGraph g);
    static BasicNode make_cographic(MultiGraph g);
    static BasicNode make_r10(R10Edits edits = {});
};

// Deletion of one element, staying inside the node's class: edge deletion for
// graphic, edge contraction for cographic, an edit entry for r10-derived.
BasicNode node_delete_element(const BasicNode& node, const std::string& label);

struct TreeEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    std::vector<std::string> shared;
};

struct ConflictTree {
    std::vector<BasicNode> nodes;
    std::vector<TreeEdge> edges;
    std::size_t root = 0;
};

struct Validation {
    bool ok = true;
    std::string message;
};

Validation validate(const ConflictTree& t);

// Extended 1/2/3-sum.  Shared labels are found by name; a shared triple must be
// a circuit on both sides.
BinaryMatroid sum(const BinaryMatroid& m1, const BinaryMatroid& m2);

// Fold of `sum` over the tree edges; the result does not depend on the order.
BinaryMatroid compose(const ConflictTree& t);

using LabelSet = std::set<std::string>;

// Lemma-style circuit characterizations of 2- and 3-sums, assembled from the
// factor matroids' circuit lists (desk scale).
std::set<LabelSet> sum2_circuits(const BinaryMatroid& m1, const BinaryMatroid& m2,
                                 const std::string& e);
std::set<LabelSet> sum3_circuits(const BinaryMatroid& m1, const BinaryMatroid& m2,
                                 const LabelSet& z);

// For a 3-circuit Z and a circuit C with |C n Z| = 1: either C^Z is a circuit
// (returned alone), or it splits into two circuits through the other two
// elements of Z, each of which has a circuit symmetric difference with Z.
std::vector<ElementSet> triangle_split(const BinaryMatroid& m, const ElementSet& z,
                                       const ElementSet& c);

// For |C n Z| = 2: C^Z is always a circuit.
ElementSet triangle_merge(const BinaryMatroid& m, const ElementSet& z, const ElementSet& c);

ConflictTree remove_node(const ConflictTree& t, std::size_t node);

std::set<std::string> tree_ground_labels(const ConflictTree& t);

}  // namespace spancirc
