#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kbp/ctlk.hpp"
#include "kbp/kernel.hpp"

namespace kbp {

struct GuardedAction {
  std::string name;
  FormulaPtr guard;  // CTLK formula; evaluated where the basis is reachable
  Relation rel;      // candidate transitions
};

struct GuardedSystem {
  BasisPtr basis;
  std::vector<GuardedAction> actions;

  Relation union_of_actions() const;
};

// One evaluation round: keep a candidate edge (s,s') when s is reachable and
// the guard holds at s.
TransitionStructure interpret(const GuardedSystem& g, const TransitionStructure& m);

// Must/can round: must-edges need the guard constructively true from a
// lower-reachable source, can-edges survive unless the guard is constructively
// false (source upper-reachable).
MustCanStructure interpret_mc(const GuardedSystem& g, const MustCanStructure& y);

struct ActionEdges {
  std::vector<Edge> must, can;
};

struct FixpointTrace {
  std::vector<MustCanStructure> iterates;          // Y_0 .. Y_k, last two equal
  std::vector<std::vector<ActionEdges>> per_step;  // per iterate (from Y_1 on), per action
  std::size_t steps = 0;                           // applications of interpret_mc
};

// Least fixed point of interpret_mc from (empty, full); diverging past
// 2*|union of candidates|+4 rounds is an internal error.
FixpointTrace lfp_constructive(const GuardedSystem& g);

enum class IterationStatus { FixedPoint, NonMonotoneStop };

struct IterationResult {
  std::vector<Relation> iterates;  // N_0 = full, N_1, ...
  std::size_t eta = 0;             // first index whose value recurs
  std::size_t alpha = 0;           // index the semantics is read off at
  IterationStatus status = IterationStatus::FixedPoint;
  TransitionStructure semantics;
};

// Plain-interpretation iteration from the full relation; stops at the first
// index >= eta where the next iterate is equal or not included.
IterationResult iteration_semantics(const GuardedSystem& g);

enum class SolutionStatus { Decided, FallbackSolved, Unresolved };

struct Classification {
  SolutionStatus status = SolutionStatus::Unresolved;
  MustCanStructure bounds;
  std::optional<TransitionStructure> solution;
  std::string diagnostic;
};

// Runs the constructive fixed point; if undecided, tries the fallback:
// interpreting both bounds as plain structures must reproduce the upper bound.
Classification classify(const GuardedSystem& g);

// Opt-in variant: edges whose guard is constructively true from an
// upper-reachable source. y must be an interpret_mc fixed point.
TransitionStructure liberal_reinterpretation(const GuardedSystem& g, const MustCanStructure& y);

// All subsets T of the candidate union with interpret(g, T) == T, in edge-mask
// order. Refuses when the candidate union exceeds max_edges.
std::vector<TransitionStructure> enumerate_solutions(const GuardedSystem& g,
                                                     std::size_t max_edges = 20);

// At every depth k, a failed K_a f at a state of RS^k must be refuted by an
// accessible state already in RS^k.
bool structure_provides_witnesses(const TransitionStructure& m,
                                  const std::vector<FormulaPtr>& know_formulas);

// Accessibility never relates states of different minimal depth.
bool structure_is_synchronous(const TransitionStructure& m);

struct SystemAnalysis {
  bool provides_witnesses = true;
  bool synchronous = true;
};

// Quantifies over every structure shape: each reachable-state set between S0
// and S is realized by a canonical structure and the interpretation of g over
// it is analyzed. Refuses when |S \ S0| exceeds max_free.
SystemAnalysis system_epistemic_analysis(const GuardedSystem& g, std::size_t max_free = 16);

}  // namespace kbp
