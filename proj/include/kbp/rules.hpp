#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kbp/bitset.hpp"
#include "kbp/guarded.hpp"
#include "kbp/kernel.hpp"

namespace kbp {

// A rule derives `conclusion` from positive premisses `pos` provided no
// element of `neg` is accepted. Indices refer to the universe.
struct Rule {
  std::vector<int> pos, neg;
  int conclusion = 0;
};

struct RuleSystem {
  std::vector<std::string> universe;
  std::vector<Rule> rules;

  int element_index(const std::string& name) const;
};

struct MustCanPair {
  Bitset must, can;

  bool decided() const { return must == can; }
  friend bool operator==(const MustCanPair&, const MustCanPair&) = default;
};

// One evaluation round on a pair: conclusions whose positive premisses hold in
// `must` and whose negative premisses miss `can` (must side), respectively
// positive premisses in `can` and negatives missing `must` (can side).
MustCanPair apply_mc(const RuleSystem& r, const MustCanPair& p);

struct RulesTrace {
  std::vector<MustCanPair> iterates;  // from (empty, universe); last two equal
  std::size_t steps = 0;
};

RulesTrace lfp_mc(const RuleSystem& r);

// Forward closure: least set of conclusions derivable while blocking every
// rule with a negative premiss in `blocked`.
Bitset closure(const RuleSystem& r, const Bitset& blocked);

// All B with closure(r, B) == B, in subset-mask order.
std::vector<Bitset> enumerate_closure_fixpoints(const RuleSystem& r, std::size_t max_universe = 20);

struct Derivation {
  int element = 0;
  int rule = -1;  // index into rules
  std::vector<Derivation> children;
};

// A minimal-height closed derivation of `target` avoiding negative premisses
// in `blocked`, if one exists.
std::optional<Derivation> explain(const RuleSystem& r, const Bitset& blocked, int target);

// Rule encoding of a guarded system: the universe pairs each state with each
// formula from the guard closure; (s, true) marks reachability.
struct GeneralEncoding {
  RuleSystem system;
  std::vector<FormulaPtr> formulas;  // closure, index = formula id
  std::size_t num_states = 0;

  int judgement(std::size_t state, std::size_t formula_id) const {
    return static_cast<int>(formula_id * num_states + state);
  }
  int truth_id = -1;  // formula id of `true`
};

GeneralEncoding encode_general(const GuardedSystem& g);

// Depth-stratified evaluation: each layer evaluates guards over the states
// known so far, then extends. Sound only for witness-providing systems.
struct StratifiedTrace {
  std::vector<Bitset> rs_layers;
  std::vector<std::vector<Bitset>> guard_sat;  // per layer, per action
};

StratifiedTrace encode_stratified(const GuardedSystem& g, std::size_t max_depth);

// Text format: one rule per line "y <- x1 x2 ; ! z1 z2", optional
// "universe a b c" line, '#' comments.
RuleSystem parse_rules(const std::string& text);

}  // namespace kbp
