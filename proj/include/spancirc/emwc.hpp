#pragma once

#include "spancirc/ctse.hpp"
#include "spancirc/graph.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace spancirc {

// Minimal cut-set C containing all terminal edges with w(C) - w(T) <= k whose
// removal leaves distinct components covering R1 and R2.
struct EmwcInstance {
    MultiGraph g;
    std::set<std::string> terminals;
    std::set<VertexId> r1;
    std::set<VertexId> r2;
    std::int64_t k = 0;
};

// Separation parameters of the high-connectivity phase; the defaults follow
// the paper's choice with q saturated to keep products in range.  Tests may
// shrink them to drive the separation machinery on small graphs.
struct ParamPair {
    std::int64_t p = 0;
    std::int64_t q = 0;

    static ParamPair defaults(std::int64_t k);
    std::int64_t pq() const;
};

struct EmwcOptions {
    SearchMode mode = SearchMode::deterministic;
    std::uint64_t seed = 1;
    std::optional<ParamPair> params;  // defaults(k) when absent
};

std::optional<std::set<std::string>> solve_emwc(const EmwcInstance& inst,
                                                const EmwcOptions& opts = {});

bool emwc_solution_ok(const EmwcInstance& inst, const std::set<std::string>& cut);

// Odd cycle transversal by iterative compression: a set S, |S| <= k, with
// G - S bipartite.
std::optional<std::set<VertexId>> oct(const MultiGraph& g, std::int64_t k);

// A cut (A,B) with T <= E(A,B) and w(E(A,B)\T) <= k, found through the odd
// cycle transversal reduction (loop and parallel-terminal rules, subdivision
// twins, vertex twins).
std::optional<VertexCut> initial_cut(const MultiGraph& g, const std::set<std::string>& terminals,
                                     std::int64_t k);

// A (q,p)-good edge separation, or nothing -- in which case the graph is
// (pq,p)-unbreakable (exact enumeration).
std::optional<VertexCut> good_separation(const MultiGraph& g, std::int64_t q, std::int64_t p);

// Family of vertex subsets splitting every disjoint (A,B) with |A|<=a, |B|<=b.
std::vector<std::set<VertexId>> separation_family(const std::vector<VertexId>& universe,
                                                  std::int64_t a, std::int64_t b,
                                                  std::optional<std::uint64_t> seed = std::nullopt);

// Random-separation solver; the caller guarantees (pq,p)-unbreakability.
std::optional<std::set<std::string>> solve_unbreakable(const EmwcInstance& inst, ParamPair pq,
                                                       const EmwcOptions& opts = {});

struct BorderInstance {
    EmwcInstance inst;
    std::set<VertexId> border;  // |X| <= 4k
};

struct BorderKey {
    std::vector<std::vector<VertexId>> partition;  // canonical blocks
    std::set<std::size_t> to_r1;                   // indexes of blocks joining R1
    std::int64_t khat = 0;

    auto operator<=>(const BorderKey&) const = default;
};

struct BorderOutput {
    std::map<BorderKey, std::optional<std::set<std::string>>> entries;
};

// The contracted instance a border key denotes.
EmwcInstance border_contract(const BorderInstance& b, const BorderKey& key);

BorderOutput border_solve(const BorderInstance& b, const EmwcOptions& opts = {});

}  // namespace spancirc
