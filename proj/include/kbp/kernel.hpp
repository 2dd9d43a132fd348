#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "kbp/bitset.hpp"
#include "kbp/formula.hpp"
#include "kbp/relation.hpp"

namespace kbp {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Signature {
  std::vector<std::string> props;
  std::vector<std::string> agents;

  int prop_index(const std::string& name) const;
  int agent_index(const std::string& name) const;
  friend bool operator==(const Signature&, const Signature&) = default;
};

// States, per-agent accessibility, labelling and initial states; everything a
// transition relation gets added to.
struct StateBasis {
  Signature sig;
  std::size_t num_states = 0;
  std::vector<Relation> access;     // one per agent
  std::vector<Bitset> prop_states;  // one per proposition: where it holds
  Bitset initial;

  bool label(std::size_t state, int prop) const { return prop_states[prop].test(state); }
  FormulaPtr prop_atom(int prop) const { return atom(sig.props[prop], prop_states[prop]); }

  friend bool operator==(const StateBasis&, const StateBasis&) = default;
};

using BasisPtr = std::shared_ptr<const StateBasis>;

// Accessibility relations are expected to be equivalences; returns one message
// per violation found. With strict=true the first violation throws.
std::vector<std::string> accessibility_warnings(const StateBasis& basis, bool strict = false);

struct TransitionStructure {
  BasisPtr basis;
  Relation trans;

  friend bool operator==(const TransitionStructure& a, const TransitionStructure& b) {
    return *a.basis == *b.basis && a.trans == b.trans;
  }
};

// Lower/upper transition bounds over a common basis (lower must stay inside upper).
struct MustCanStructure {
  BasisPtr basis;
  Relation lower, upper;

  MustCanStructure(BasisPtr b, Relation lo, Relation up)
      : basis(std::move(b)), lower(std::move(lo)), upper(std::move(up)) {
    if (!lower.subset_of(upper))
      throw error("must/can structure: lower bound not contained in upper bound");
  }

  bool decided() const { return lower == upper; }
  friend bool operator==(const MustCanStructure& a, const MustCanStructure& b) {
    return *a.basis == *b.basis && a.lower == b.lower && a.upper == b.upper;
  }
};

// Y1 refines to Y2: lower grows, upper shrinks.
bool mc_leq(const MustCanStructure& y1, const MustCanStructure& y2);

struct ReachabilityInfo {
  std::vector<Bitset> state_layers;    // RS^0, RS^1, ... up to stabilization
  std::vector<Relation> edge_layers;   // RT^0, RT^1, ...
  Bitset reachable;                    // final layer
  Relation reachable_edges;            // final edge layer
  std::vector<int> depth;              // minimal depth per state, -1 if unreachable
};

ReachabilityInfo compute_reachability(const StateBasis& basis, const Relation& trans);

// reachable set only, without the layer bookkeeping
Bitset reachable_states(const StateBasis& basis, const Relation& trans);

// copy of trans with all rows outside `sources` cleared
Relation restrict_sources(const Relation& trans, const Bitset& sources);

// Classical satisfaction at a reachable state; querying an unreachable state
// is an error, not "false".
bool kripke_sat(const TransitionStructure& m, std::size_t state, const FormulaPtr& f);

// Constructive satisfaction of an NNF formula at a state reachable in the
// upper bound.
bool mc_sat(const MustCanStructure& y, std::size_t state, const FormulaPtr& f);

// (positive, negative) verdicts for an arbitrary formula: satisfaction of
// nnf(f) and of nnf(!f). Never both true.
std::pair<bool, bool> mc_sat_posneg(const MustCanStructure& y, std::size_t state,
                                    const FormulaPtr& f);

}  // namespace kbp
