#pragma once

#include <memory>
#include <string>

#include "kbp/bitset.hpp"

namespace kbp {

enum class Op {
  Atom,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Know,   // K[a] f
  Maybe,  // M[a] f, dual of Know
  EX,
  AX,
  EF,
  AF,
  EG,
  AG,
  EU,
  AU,
  ER,
  AR,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable formula tree. Atoms are extensional: a named set of states.
struct Formula {
  Op op;
  std::string name;  // Atom: display name
  Bitset states;     // Atom: extension
  int agent = -1;    // Know/Maybe
  FormulaPtr lhs, rhs;
};

FormulaPtr atom(std::string name, Bitset states);
FormulaPtr truth();
FormulaPtr falsity();
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr know(int agent, FormulaPtr f);
FormulaPtr maybe(int agent, FormulaPtr f);
FormulaPtr unary(Op op, FormulaPtr f);                 // EX..AG
FormulaPtr binary(Op op, FormulaPtr a, FormulaPtr b);  // EU/AU/ER/AR

// Negation normal form: negation pushed to atoms, Implies/Iff eliminated,
// temporal and epistemic operators dualized as needed.
FormulaPtr nnf(const FormulaPtr& f);

bool is_nnf(const FormulaPtr& f);
bool temporal_free(const FormulaPtr& f);
bool epistemic_free(const FormulaPtr& f);

// Structural equality (atoms compared by extension).
bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);

std::string to_string(const FormulaPtr& f);

// All subformulae with op == Know, in discovery order, de-duplicated.
std::vector<FormulaPtr> know_subformulas(const FormulaPtr& f);

}  // namespace kbp
