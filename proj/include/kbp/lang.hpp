#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kbp/ctlk.hpp"
#include "kbp/guarded.hpp"
#include "kbp/kernel.hpp"

namespace kbp::lang {

struct Loc {
  int line = 0, col = 0;
};

struct parse_error : error {
  parse_error(const Loc& loc, const std::string& msg)
      : error("line " + std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + msg),
        loc(loc) {}
  Loc loc;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind {
  IntLit,
  BoolLit,
  Var,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Add,
  Sub,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Know,
  Maybe,
  EX,
  EF,
  EG,
  AX,
  AF,
  AG,
  EU,
  AU,
  Exists,
  Forall,
};

struct Expr {
  ExprKind kind;
  Loc loc;
  long value = 0;        // IntLit / BoolLit (0/1)
  std::string name;      // Var, Know/Maybe agent, quantifier binder
  bool binder_bool = false;
  long binder_lo = 0, binder_hi = 0;  // quantifier binder domain
  ExprPtr lhs, rhs;
};

struct VarDecl {
  std::vector<std::string> names;
  bool is_bool = true;
  long lo = 0, hi = 0;
  ExprPtr init;  // optional
  Loc loc;
};

struct AgentDecl {
  std::string name;
  std::vector<std::string> observed;
  Loc loc;
};

struct LetDecl {
  std::string name;
  ExprPtr body;
  Loc loc;
};

struct ActionDecl {
  std::string name;
  ExprPtr guard;  // optional, defaults to true
  std::vector<std::pair<std::string, ExprPtr>> assigns;
  Loc loc;
};

struct CheckDecl {
  bool reachable = false;
  ExprPtr body;
  Loc loc;
};

struct Spec {
  std::vector<VarDecl> vars;
  std::vector<AgentDecl> agents;
  std::vector<LetDecl> lets;
  std::vector<ActionDecl> actions;
  std::vector<CheckDecl> checks;
};

// Throws parse_error on the first syntax error.
Spec parse(const std::string& text);

struct Diagnostic {
  Loc loc;
  std::string message;
};

// Name resolution and type checking; empty result means well-typed.
std::vector<Diagnostic> typecheck(const Spec& spec);

// Canonical source form; parse(to_source(s)) is structurally equal to s.
std::string to_source(const Spec& spec);
std::string to_source(const ExprPtr& e);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);
bool spec_equal(const Spec& a, const Spec& b);

struct Model {
  BasisPtr basis;
  GuardedSystem system;
  std::vector<CheckRequest> checks;
  std::vector<std::string> warnings;
  std::vector<LetDecl> lets;

  // state decoding
  std::vector<std::string> var_names;
  std::vector<long> var_lo, var_hi;
  std::vector<std::size_t> strides;

  long var_value(std::size_t state, std::size_t var) const {
    return var_lo[var] + static_cast<long>((state / strides[var]) %
                                           static_cast<std::size_t>(var_hi[var] - var_lo[var] + 1));
  }
  std::string state_name(std::size_t state) const;
};

// Builds the state space and guarded system; typecheck must have passed.
Model elaborate(const Spec& spec, std::size_t max_states = 1u << 20);

// Let-inlining and quantifier expansion into an extensional kernel formula;
// exposed for direct use on closed expressions.
FormulaPtr expand_expr(const Model& m, const ExprPtr& e);

}  // namespace kbp::lang
