#pragma once

#include "spancirc/solvers.hpp"

#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace spancirc {

// Exhaustive ground truth, deliberately separate from the library's own
// enumeration paths.  Everything here is capped at desk scale.

struct OracleVerdict {
    bool yes = false;
    std::optional<Weight> optimum;
};

// Circuits by size-increasing subset search with Gaussian dependence tests.
std::vector<LabelSet> oracle_circuits(const BinaryMatroid& m);

// All simple cycles (loops and parallel pairs included) by DFS path extension.
std::set<std::set<std::string>> oracle_simple_cycles(const MultiGraph& g);

OracleVerdict oracle_wmsc(const BinaryMatroid& m, const std::map<std::string, Weight>& w,
                          const LabelSet& terminals, Weight ell);
OracleVerdict oracle_sc(const BinaryMatroid& m, const LabelSet& terminals);
OracleVerdict oracle_emwc(const EmwcInstance& inst);
OracleVerdict oracle_ctse(const CtseInstance& inst);
OracleVerdict oracle_ewmsc(const BinaryMatroid& m, const WmscCore& core);
OracleVerdict oracle_esc(const BinaryMatroid& m, const ScCore& core);

// Random instance generators.

MultiGraph gen_random_graph(std::uint64_t seed, int vertices, int extra_edges, int max_weight,
                            bool allow_loops);

// A valid conflict tree of random graphic/cographic/r10-derived nodes joined by
// legal 1/2/3-sums, with the composed ground set kept within `size_budget`.
ConflictTree gen_random_tree(std::uint64_t seed, int node_budget, int size_budget);

// The regular-multicolored-clique construction: a unit-weight minimum spanning
// circuit instance on the bond matroid of the assembled graph H.
struct CliqueReductionInstance {
    MultiGraph h;
    LabelSet terminals;
    Weight budget = 0;  // n + (n + d - k + 1) k
};

CliqueReductionInstance gen_clique_reduction(const MultiGraph& g, int k,
                                             const std::vector<std::set<VertexId>>& partition);

}  // namespace spancirc
