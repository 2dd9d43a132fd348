#include "kbp/formula.hpp"

#include <stdexcept>
#include <vector>

namespace kbp {

static FormulaPtr mk(Formula f) { return std::make_shared<Formula>(std::move(f)); }

FormulaPtr atom(std::string name, Bitset states) {
  Formula f;
  f.op = Op::Atom;
  f.name = std::move(name);
  f.states = std::move(states);
  return mk(std::move(f));
}
FormulaPtr truth() { return mk({Op::True}); }
FormulaPtr falsity() { return mk({Op::False}); }

static FormulaPtr mk1(Op op, FormulaPtr a) {
  Formula f;
  f.op = op;
  f.lhs = std::move(a);
  return mk(std::move(f));
}
static FormulaPtr mk2(Op op, FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.op = op;
  f.lhs = std::move(a);
  f.rhs = std::move(b);
  return mk(std::move(f));
}

FormulaPtr f_not(FormulaPtr f) { return mk1(Op::Not, std::move(f)); }
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return mk2(Op::And, std::move(a), std::move(b)); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return mk2(Op::Or, std::move(a), std::move(b)); }
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) { return mk2(Op::Implies, std::move(a), std::move(b)); }
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) { return mk2(Op::Iff, std::move(a), std::move(b)); }

FormulaPtr know(int agent, FormulaPtr f) {
  Formula g;
  g.op = Op::Know;
  g.agent = agent;
  g.lhs = std::move(f);
  return mk(std::move(g));
}
FormulaPtr maybe(int agent, FormulaPtr f) {
  Formula g;
  g.op = Op::Maybe;
  g.agent = agent;
  g.lhs = std::move(f);
  return mk(std::move(g));
}

FormulaPtr unary(Op op, FormulaPtr f) {
  switch (op) {
    case Op::EX: case Op::AX: case Op::EF: case Op::AF: case Op::EG: case Op::AG:
      return mk1(op, std::move(f));
    default:
      throw std::invalid_argument("unary: not a unary path operator");
  }
}
FormulaPtr binary(Op op, FormulaPtr a, FormulaPtr b) {
  switch (op) {
    case Op::EU: case Op::AU: case Op::ER: case Op::AR:
      return mk2(op, std::move(a), std::move(b));
    default:
      throw std::invalid_argument("binary: not a binary path operator");
  }
}

static FormulaPtr nnf_pos(const FormulaPtr& f);
static FormulaPtr nnf_neg(const FormulaPtr& f);

static FormulaPtr nnf_pos(const FormulaPtr& f) {
  switch (f->op) {
    case Op::Atom:
    case Op::True:
    case Op::False:
      return f;
    case Op::Not:
      return nnf_neg(f->lhs);
    case Op::And:
      return f_and(nnf_pos(f->lhs), nnf_pos(f->rhs));
    case Op::Or:
      return f_or(nnf_pos(f->lhs), nnf_pos(f->rhs));
    case Op::Implies:
      return f_or(nnf_neg(f->lhs), nnf_pos(f->rhs));
    case Op::Iff:
      return f_and(f_or(nnf_neg(f->lhs), nnf_pos(f->rhs)),
                   f_or(nnf_neg(f->rhs), nnf_pos(f->lhs)));
    case Op::Know:
      return know(f->agent, nnf_pos(f->lhs));
    case Op::Maybe:
      return maybe(f->agent, nnf_pos(f->lhs));
    case Op::EX: case Op::AX: case Op::EF: case Op::AF: case Op::EG: case Op::AG:
      return mk1(f->op, nnf_pos(f->lhs));
    case Op::EU: case Op::AU: case Op::ER: case Op::AR:
      return mk2(f->op, nnf_pos(f->lhs), nnf_pos(f->rhs));
  }
  throw std::logic_error("nnf_pos: unreachable");
}

static FormulaPtr nnf_neg(const FormulaPtr& f) {
  switch (f->op) {
    case Op::Atom:
      return f_not(f);
    case Op::True:
      return falsity();
    case Op::False:
      return truth();
    case Op::Not:
      return nnf_pos(f->lhs);
    case Op::And:
      return f_or(nnf_neg(f->lhs), nnf_neg(f->rhs));
    case Op::Or:
      return f_and(nnf_neg(f->lhs), nnf_neg(f->rhs));
    case Op::Implies:
      return f_and(nnf_pos(f->lhs), nnf_neg(f->rhs));
    case Op::Iff:
      return f_or(f_and(nnf_pos(f->lhs), nnf_neg(f->rhs)),
                  f_and(nnf_pos(f->rhs), nnf_neg(f->lhs)));
    case Op::Know:
      return maybe(f->agent, nnf_neg(f->lhs));
    case Op::Maybe:
      return know(f->agent, nnf_neg(f->lhs));
    case Op::EX:
      return mk1(Op::AX, nnf_neg(f->lhs));
    case Op::AX:
      return mk1(Op::EX, nnf_neg(f->lhs));
    case Op::EF:
      return mk1(Op::AG, nnf_neg(f->lhs));
    case Op::AG:
      return mk1(Op::EF, nnf_neg(f->lhs));
    case Op::AF:
      return mk1(Op::EG, nnf_neg(f->lhs));
    case Op::EG:
      return mk1(Op::AF, nnf_neg(f->lhs));
    case Op::EU:
      return mk2(Op::AR, nnf_neg(f->lhs), nnf_neg(f->rhs));
    case Op::AR:
      return mk2(Op::EU, nnf_neg(f->lhs), nnf_neg(f->rhs));
    case Op::AU:
      return mk2(Op::ER, nnf_neg(f->lhs), nnf_neg(f->rhs));
    case Op::ER:
      return mk2(Op::AU, nnf_neg(f->lhs), nnf_neg(f->rhs));
  }
  throw std::logic_error("nnf_neg: unreachable");
}

FormulaPtr nnf(const FormulaPtr& f) { return nnf_pos(f); }

bool is_nnf(const FormulaPtr& f) {
  switch (f->op) {
    case Op::Atom:
    case Op::True:
    case Op::False:
      return true;
    case Op::Not:
      return f->lhs->op == Op::Atom;
    case Op::Implies:
    case Op::Iff:
      return false;
    default:
      if (f->lhs && !is_nnf(f->lhs)) return false;
      if (f->rhs && !is_nnf(f->rhs)) return false;
      return true;
  }
}

bool temporal_free(const FormulaPtr& f) {
  switch (f->op) {
    case Op::EX: case Op::AX: case Op::EF: case Op::AF: case Op::EG: case Op::AG:
    case Op::EU: case Op::AU: case Op::ER: case Op::AR:
      return false;
    default:
      if (f->lhs && !temporal_free(f->lhs)) return false;
      if (f->rhs && !temporal_free(f->rhs)) return false;
      return true;
  }
}

bool epistemic_free(const FormulaPtr& f) {
  if (f->op == Op::Know || f->op == Op::Maybe) return false;
  if (f->lhs && !epistemic_free(f->lhs)) return false;
  if (f->rhs && !epistemic_free(f->rhs)) return false;
  return true;
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->op != b->op) return false;
  if (a->op == Op::Atom) return a->states == b->states;
  if (a->agent != b->agent) return false;
  if (!!a->lhs != !!b->lhs || !!a->rhs != !!b->rhs) return false;
  if (a->lhs && !formula_equal(a->lhs, b->lhs)) return false;
  if (a->rhs && !formula_equal(a->rhs, b->rhs)) return false;
  return true;
}

static const char* op_word(Op op) {
  switch (op) {
    case Op::EX: return "EX"; case Op::AX: return "AX";
    case Op::EF: return "EF"; case Op::AF: return "AF";
    case Op::EG: return "EG"; case Op::AG: return "AG";
    default: return "?";
  }
}

std::string to_string(const FormulaPtr& f) {
  switch (f->op) {
    case Op::Atom:
      return f->name.empty() ? "<atom>" : f->name;
    case Op::True:
      return "true";
    case Op::False:
      return "false";
    case Op::Not:
      return "!" + to_string(f->lhs);
    case Op::And:
      return "(" + to_string(f->lhs) + " & " + to_string(f->rhs) + ")";
    case Op::Or:
      return "(" + to_string(f->lhs) + " | " + to_string(f->rhs) + ")";
    case Op::Implies:
      return "(" + to_string(f->lhs) + " -> " + to_string(f->rhs) + ")";
    case Op::Iff:
      return "(" + to_string(f->lhs) + " <-> " + to_string(f->rhs) + ")";
    case Op::Know:
      return "K[" + std::to_string(f->agent) + "] " + to_string(f->lhs);
    case Op::Maybe:
      return "M[" + std::to_string(f->agent) + "] " + to_string(f->lhs);
    case Op::EX: case Op::AX: case Op::EF: case Op::AF: case Op::EG: case Op::AG:
      return std::string(op_word(f->op)) + " " + to_string(f->lhs);
    case Op::EU:
      return "E[" + to_string(f->lhs) + " U " + to_string(f->rhs) + "]";
    case Op::AU:
      return "A[" + to_string(f->lhs) + " U " + to_string(f->rhs) + "]";
    case Op::ER:
      return "E[" + to_string(f->lhs) + " R " + to_string(f->rhs) + "]";
    case Op::AR:
      return "A[" + to_string(f->lhs) + " R " + to_string(f->rhs) + "]";
  }
  return "?";
}

static void collect_know(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->op == Op::Know) {
    bool dup = false;
    for (auto& g : out)
      if (formula_equal(f, g)) { dup = true; break; }
    if (!dup) out.push_back(f);
  }
  if (f->lhs) collect_know(f->lhs, out);
  if (f->rhs) collect_know(f->rhs, out);
}

std::vector<FormulaPtr> know_subformulas(const FormulaPtr& f) {
  std::vector<FormulaPtr> out;
  collect_know(f, out);
  return out;
}

}  // namespace kbp
