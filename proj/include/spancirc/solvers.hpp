#pragma once

#include "spancirc/ctse.hpp"
#include "spancirc/decomp.hpp"
#include "spancirc/emwc.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace spancirc {

// The matroid a constraint lives on: one basic node, or a conflict tree.
struct MatroidRef {
    std::optional<BasicNode> node;
    std::optional<ConflictTree> tree;

    static MatroidRef of(BasicNode n) { return MatroidRef{std::move(n), std::nullopt}; }
    static MatroidRef of(ConflictTree t) { return MatroidRef{std::nullopt, std::move(t)}; }

    bool is_tree() const { return tree.has_value(); }
    BinaryMatroid full_matroid() const;
    std::set<std::string> ground_labels() const;
};

// The weighted circuit constraint: terminals, prescribed triples with menus,
// an optional pivot triple (Z,t), weights off L, per-triple menu weights, and
// the budget.
struct WmscCore {
    LabelSet terminals;
    std::vector<LabelSet> triples;                       // X
    std::map<LabelSet, std::set<LabelSet>> menus;        // P
    std::optional<std::pair<LabelSet, std::string>> z;   // (Z, t)
    std::map<std::string, Weight> weights;               // w on E \ L
    std::map<LabelSet, std::map<LabelSet, Weight>> menu_weights;  // W
    std::int64_t budget = 0;                             // k
};

// The unweighted restriction used for spanning circuits.
struct ScCore {
    std::vector<LabelSet> triples;                      // X, sizes 1..3
    std::map<LabelSet, std::set<LabelSet>> menus;       // P
    std::optional<std::pair<LabelSet, std::string>> z;  // (Z, t)
};

struct SolveOutcome {
    bool yes = false;
    std::optional<LabelSet> witness;
    std::optional<Weight> weight;  // the constraint weight of the witness

    static SolveOutcome no() { return {}; }
    static SolveOutcome found(LabelSet w, Weight omega) {
        return SolveOutcome{true, std::move(w), omega};
    }
};

struct SolveOptions {
    SearchMode mode = SearchMode::deterministic;
    std::uint64_t seed = 1;
    std::optional<ParamPair> emwc_params;
};

// Constraint weight of a circuit: w(C \ (T u L)) + sum of menu weights.
Weight wmsc_weight(const WmscCore& core, const LabelSet& c);

// Full feasibility of a candidate against an explicit matroid.
bool wmsc_feasible(const BinaryMatroid& m, const WmscCore& core, const LabelSet& c);
bool esc_feasible(const BinaryMatroid& m, const ScCore& core, const LabelSet& c);

// Basic-case solvers (Extended Minimum Spanning Circuit).
SolveOutcome ewmsc_r10(const BasicNode& node, const WmscCore& core);
SolveOutcome ewmsc_graphic(const BasicNode& node, const WmscCore& core,
                           const SolveOptions& opts = {});
SolveOutcome ewmsc_cographic(const BasicNode& node, const WmscCore& core,
                             const SolveOptions& opts = {});

// Basic-case solvers (Extended Spanning Circuit).
SolveOutcome esc_r10(const BasicNode& node, const ScCore& core);
SolveOutcome esc_graphic(const BasicNode& node, const ScCore& core, const SolveOptions& opts = {});
SolveOutcome esc_cographic(const BasicNode& node, const ScCore& core,
                           const SolveOptions& opts = {});

// Tree instances and one application of a leaf reduction rule, exposed so the
// rules can be exercised in isolation.
struct WmscTreeInstance {
    ConflictTree tree;
    WmscCore core;
};
struct ScTreeInstance {
    ConflictTree tree;
    ScCore core;
};

using WitnessLift = std::function<LabelSet(const LabelSet&)>;

struct WmscRuleResult {
    bool decided = false;
    SolveOutcome outcome;        // when decided
    WmscTreeInstance reduced;    // otherwise
    WitnessLift lift;
};
struct ScRuleResult {
    bool decided = false;
    SolveOutcome outcome;
    ScTreeInstance reduced;
    WitnessLift lift;
};

WmscRuleResult apply_wmsc_leaf_rule(const WmscTreeInstance& inst, std::size_t leaf,
                                    const SolveOptions& opts = {});
ScRuleResult apply_scir_leaf_rule(const ScTreeInstance& inst, std::size_t leaf,
                                  const SolveOptions& opts = {});

// Deepest non-root leaf under the instance's root ordering.
std::size_t pick_leaf(const ConflictTree& t, std::size_t root);

// Entry points.
SolveOutcome solve_ewmsc(const MatroidRef& m, const WmscCore& core, const SolveOptions& opts = {});
SolveOutcome solve_esc(const MatroidRef& m, const ScCore& core, const SolveOptions& opts = {});

// Minimum Spanning Circuit: circuit C, T <= C, w(C) <= ell.
SolveOutcome solve_wmsc(const MatroidRef& m, const std::map<std::string, Weight>& w,
                        const LabelSet& terminals, Weight ell, const SolveOptions& opts = {});

// Spanning Circuit: circuit C with T <= C.
SolveOutcome solve_sc(const MatroidRef& m, const LabelSet& terminals,
                      const SolveOptions& opts = {});

}  // namespace spancirc
