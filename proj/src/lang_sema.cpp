#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "kbp/lang.hpp"

namespace kbp::lang {

namespace {

enum class Ty { Bool, Int, Bad };

struct VarInfo {
  bool is_bool = true;
  long lo = 0, hi = 0;
};

struct Scope {
  std::map<std::string, VarInfo> vars;
  std::map<std::string, ExprPtr> lets;
  std::map<std::string, Ty> let_type;
  std::map<std::string, VarInfo> binders;
  std::map<std::string, bool> agents;
  std::vector<Diagnostic>* diags = nullptr;

  void err(const Loc& loc, std::string msg) { diags->push_back({loc, std::move(msg)}); }
};

struct TcFlags {
  bool allow_epistemic = true;
  bool allow_temporal = true;
};

Ty type_of(Scope& sc, const ExprPtr& e, const TcFlags& flags);

Ty require(Scope& sc, const ExprPtr& e, const TcFlags& flags, Ty want, const char* what) {
  Ty t = type_of(sc, e, flags);
  if (t != Ty::Bad && t != want) {
    sc.err(e->loc, std::string(what) + " must be " + (want == Ty::Bool ? "boolean" : "numeric"));
    return Ty::Bad;
  }
  return t;
}

Ty type_of(Scope& sc, const ExprPtr& e, const TcFlags& flags) {
  switch (e->kind) {
    case ExprKind::IntLit:
      return Ty::Int;
    case ExprKind::BoolLit:
      return Ty::Bool;
    case ExprKind::Var: {
      if (auto it = sc.binders.find(e->name); it != sc.binders.end())
        return it->second.is_bool ? Ty::Bool : Ty::Int;
      if (auto it = sc.vars.find(e->name); it != sc.vars.end())
        return it->second.is_bool ? Ty::Bool : Ty::Int;
      if (auto it = sc.let_type.find(e->name); it != sc.let_type.end()) return it->second;
      sc.err(e->loc, "unknown name '" + e->name + "'");
      return Ty::Bad;
    }
    case ExprKind::Not:
      return require(sc, e->lhs, flags, Ty::Bool, "operand of 'not'");
    case ExprKind::And:
    case ExprKind::Or:
    case ExprKind::Implies:
    case ExprKind::Iff: {
      Ty a = require(sc, e->lhs, flags, Ty::Bool, "boolean operand");
      Ty b = require(sc, e->rhs, flags, Ty::Bool, "boolean operand");
      return a == Ty::Bad || b == Ty::Bad ? Ty::Bad : Ty::Bool;
    }
    case ExprKind::Add:
    case ExprKind::Sub: {
      Ty a = require(sc, e->lhs, flags, Ty::Int, "arithmetic operand");
      Ty b = require(sc, e->rhs, flags, Ty::Int, "arithmetic operand");
      return a == Ty::Bad || b == Ty::Bad ? Ty::Bad : Ty::Int;
    }
    case ExprKind::Eq:
    case ExprKind::Ne:
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge: {
      Ty a = require(sc, e->lhs, flags, Ty::Int, "comparison operand");
      Ty b = require(sc, e->rhs, flags, Ty::Int, "comparison operand");
      return a == Ty::Bad || b == Ty::Bad ? Ty::Bad : Ty::Bool;
    }
    case ExprKind::Know:
    case ExprKind::Maybe: {
      if (!flags.allow_epistemic) sc.err(e->loc, "knowledge operator not allowed here");
      if (!sc.agents.count(e->name)) sc.err(e->loc, "unknown agent '" + e->name + "'");
      return require(sc, e->lhs, flags, Ty::Bool, "knowledge operand");
    }
    case ExprKind::EX:
    case ExprKind::EF:
    case ExprKind::EG:
    case ExprKind::AX:
    case ExprKind::AF:
    case ExprKind::AG:
      if (!flags.allow_temporal) sc.err(e->loc, "path operator not allowed here");
      return require(sc, e->lhs, flags, Ty::Bool, "path operand");
    case ExprKind::EU:
    case ExprKind::AU: {
      if (!flags.allow_temporal) sc.err(e->loc, "path operator not allowed here");
      Ty a = require(sc, e->lhs, flags, Ty::Bool, "path operand");
      Ty b = require(sc, e->rhs, flags, Ty::Bool, "path operand");
      return a == Ty::Bad || b == Ty::Bad ? Ty::Bad : Ty::Bool;
    }
    case ExprKind::Exists:
    case ExprKind::Forall: {
      if (sc.binders.count(e->name) || sc.vars.count(e->name) || sc.let_type.count(e->name))
        sc.err(e->loc, "binder '" + e->name + "' shadows an existing name");
      sc.binders[e->name] = {e->binder_bool, e->binder_lo, e->binder_hi};
      Ty t = require(sc, e->lhs, flags, Ty::Bool, "quantifier body");
      sc.binders.erase(e->name);
      return t;
    }
  }
  return Ty::Bad;
}

Scope build_scope(const Spec& spec, std::vector<Diagnostic>& diags) {
  Scope sc;
  sc.diags = &diags;
  for (const auto& d : spec.vars)
    for (const auto& name : d.names) {
      if (sc.vars.count(name))
        sc.err(d.loc, "variable '" + name + "' declared twice");
      sc.vars[name] = {d.is_bool, d.lo, d.hi};
    }
  for (const auto& a : spec.agents) {
    if (sc.agents.count(a.name)) sc.err(a.loc, "agent '" + a.name + "' declared twice");
    sc.agents[a.name] = true;
    for (const auto& o : a.observed)
      if (!sc.vars.count(o))
        sc.err(a.loc, "agent '" + a.name + "' observes unknown variable '" + o + "'");
  }
  return sc;
}

}  // namespace

std::vector<Diagnostic> typecheck(const Spec& spec) {
  std::vector<Diagnostic> diags;
  Scope sc = build_scope(spec, diags);
  TcFlags state_pred{false, false};
  TcFlags full{true, true};

  for (const auto& d : spec.vars)
    if (d.init) require(sc, d.init, state_pred, Ty::Bool, "initial constraint");

  for (const auto& l : spec.lets) {
    if (sc.vars.count(l.name) || sc.let_type.count(l.name))
      sc.err(l.loc, "name '" + l.name + "' declared twice");
    Ty t = type_of(sc, l.body, full);  // lets may only use earlier lets
    sc.lets[l.name] = l.body;
    sc.let_type[l.name] = t;
  }

  for (const auto& a : spec.actions) {
    if (a.guard) require(sc, a.guard, full, Ty::Bool, "guard");
    for (const auto& [target, rhs] : a.assigns) {
      auto it = sc.vars.find(target);
      if (it == sc.vars.end()) {
        sc.err(a.loc, "assignment to unknown variable '" + target + "'");
        continue;
      }
      require(sc, rhs, state_pred, it->second.is_bool ? Ty::Bool : Ty::Int,
              "assigned value");
    }
  }

  for (const auto& c : spec.checks)
    require(sc, c.body, c.reachable ? state_pred : full, Ty::Bool, "check");

  return diags;
}

// ---------------------------------------------------------------------------
// printing and structural equality

namespace {

const char* kind_sym(ExprKind k) {
  switch (k) {
    case ExprKind::And: return "&";
    case ExprKind::Or: return "|";
    case ExprKind::Implies: return "->";
    case ExprKind::Iff: return "<->";
    case ExprKind::Add: return "+";
    case ExprKind::Sub: return "-";
    case ExprKind::Eq: return "=";
    case ExprKind::Ne: return "!=";
    case ExprKind::Lt: return "<";
    case ExprKind::Le: return "<=";
    case ExprKind::Gt: return ">";
    case ExprKind::Ge: return ">=";
    default: return "?";
  }
}

std::string type_source(bool is_bool, long lo, long hi) {
  if (is_bool) return "boolean";
  return std::to_string(lo) + ".." + std::to_string(hi);
}

}  // namespace

std::string to_source(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::IntLit:
      return std::to_string(e->value);
    case ExprKind::BoolLit:
      return e->value ? "true" : "false";
    case ExprKind::Var:
      return e->name;
    case ExprKind::Not:
      return "!" + to_source(e->lhs);
    case ExprKind::And:
    case ExprKind::Or:
    case ExprKind::Implies:
    case ExprKind::Iff:
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Eq:
    case ExprKind::Ne:
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge:
      return "(" + to_source(e->lhs) + " " + kind_sym(e->kind) + " " + to_source(e->rhs) + ")";
    case ExprKind::Know:
      return "K[" + e->name + "] (" + to_source(e->lhs) + ")";
    case ExprKind::Maybe:
      return "M[" + e->name + "] (" + to_source(e->lhs) + ")";
    case ExprKind::EX: return "EX (" + to_source(e->lhs) + ")";
    case ExprKind::EF: return "EF (" + to_source(e->lhs) + ")";
    case ExprKind::EG: return "EG (" + to_source(e->lhs) + ")";
    case ExprKind::AX: return "AX (" + to_source(e->lhs) + ")";
    case ExprKind::AF: return "AF (" + to_source(e->lhs) + ")";
    case ExprKind::AG: return "AG (" + to_source(e->lhs) + ")";
    case ExprKind::EU:
      return "E[" + to_source(e->lhs) + " U " + to_source(e->rhs) + "]";
    case ExprKind::AU:
      return "A[" + to_source(e->lhs) + " U " + to_source(e->rhs) + "]";
    case ExprKind::Exists:
    case ExprKind::Forall:
      return std::string(e->kind == ExprKind::Exists ? "exists " : "forall ") + e->name + ":" +
             type_source(e->binder_bool, e->binder_lo, e->binder_hi) + " . (" +
             to_source(e->lhs) + ")";
  }
  return "?";
}

std::string to_source(const Spec& spec) {
  std::ostringstream out;
  for (const auto& d : spec.vars) {
    out << "var ";
    for (std::size_t i = 0; i < d.names.size(); ++i)
      out << (i ? ", " : "") << d.names[i];
    out << " : " << type_source(d.is_bool, d.lo, d.hi);
    if (d.init) out << " initial " << to_source(d.init);
    out << ";\n";
  }
  for (const auto& a : spec.agents) {
    out << "agent " << a.name << " = { ";
    for (std::size_t i = 0; i < a.observed.size(); ++i)
      out << (i ? ", " : "") << a.observed[i];
    out << " };\n";
  }
  for (const auto& l : spec.lets)
    out << "let " << l.name << " = " << to_source(l.body) << ";\n";
  for (const auto& a : spec.actions) {
    out << "action " << a.name;
    if (a.guard) out << " guard " << to_source(a.guard);
    out << " do ";
    for (std::size_t i = 0; i < a.assigns.size(); ++i)
      out << (i ? ", " : "") << a.assigns[i].first << " := " << to_source(a.assigns[i].second);
    out << ";\n";
  }
  for (const auto& c : spec.checks)
    out << "check " << (c.reachable ? "reachable " : "initial ") << to_source(c.body) << ";\n";
  return out.str();
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a && !b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->value != b->value || a->name != b->name ||
      a->binder_bool != b->binder_bool || a->binder_lo != b->binder_lo ||
      a->binder_hi != b->binder_hi)
    return false;
  return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
}

bool spec_equal(const Spec& a, const Spec& b) {
  if (a.vars.size() != b.vars.size() || a.agents.size() != b.agents.size() ||
      a.lets.size() != b.lets.size() || a.actions.size() != b.actions.size() ||
      a.checks.size() != b.checks.size())
    return false;
  for (std::size_t i = 0; i < a.vars.size(); ++i) {
    const auto &x = a.vars[i], &y = b.vars[i];
    if (x.names != y.names || x.is_bool != y.is_bool || x.lo != y.lo || x.hi != y.hi ||
        !!x.init != !!y.init || (x.init && !expr_equal(x.init, y.init)))
      return false;
  }
  for (std::size_t i = 0; i < a.agents.size(); ++i)
    if (a.agents[i].name != b.agents[i].name || a.agents[i].observed != b.agents[i].observed)
      return false;
  for (std::size_t i = 0; i < a.lets.size(); ++i)
    if (a.lets[i].name != b.lets[i].name || !expr_equal(a.lets[i].body, b.lets[i].body))
      return false;
  for (std::size_t i = 0; i < a.actions.size(); ++i) {
    const auto &x = a.actions[i], &y = b.actions[i];
    if (x.name != y.name || !!x.guard != !!y.guard || (x.guard && !expr_equal(x.guard, y.guard)))
      return false;
    if (x.assigns.size() != y.assigns.size()) return false;
    for (std::size_t k = 0; k < x.assigns.size(); ++k)
      if (x.assigns[k].first != y.assigns[k].first ||
          !expr_equal(x.assigns[k].second, y.assigns[k].second))
        return false;
  }
  for (std::size_t i = 0; i < a.checks.size(); ++i)
    if (a.checks[i].reachable != b.checks[i].reachable ||
        !expr_equal(a.checks[i].body, b.checks[i].body))
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// elaboration

namespace {

struct Env {
  const Model* model;
  std::map<std::string, ExprPtr> lets;
  std::map<std::string, long> binders;  // bool binders as 0/1
};

int find_var(const Model& m, const std::string& name) {
  for (std::size_t i = 0; i < m.var_names.size(); ++i)
    if (m.var_names[i] == name) return static_cast<int>(i);
  return -1;
}

long eval_int(const Env& env, std::size_t state, const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::IntLit:
      return e->value;
    case ExprKind::BoolLit:
      return e->value;
    case ExprKind::Var: {
      if (auto it = env.binders.find(e->name); it != env.binders.end()) return it->second;
      int v = find_var(*env.model, e->name);
      if (v >= 0) return env.model->var_value(state, static_cast<std::size_t>(v));
      if (auto it = env.lets.find(e->name); it != env.lets.end())
        return eval_int(env, state, it->second);
      throw error("unknown name '" + e->name + "' in value position");
    }
    case ExprKind::Add:
      return eval_int(env, state, e->lhs) + eval_int(env, state, e->rhs);
    case ExprKind::Sub:
      return eval_int(env, state, e->lhs) - eval_int(env, state, e->rhs);
    default:
      throw error("expression is not a value: " + to_source(e));
  }
}

// display form of an expression with binder values substituted
std::string display(const Env& env, const ExprPtr& e) {
  if (e->kind == ExprKind::Var) {
    if (auto it = env.binders.find(e->name); it != env.binders.end())
      return std::to_string(it->second);
    return e->name;
  }
  if (e->kind == ExprKind::Add || e->kind == ExprKind::Sub)
    return "(" + display(env, e->lhs) + " " + kind_sym(e->kind) + " " + display(env, e->rhs) + ")";
  return to_source(e);
}

FormulaPtr expand(const Env& env, const ExprPtr& e);

FormulaPtr comparison_atom(const Env& env, const ExprPtr& e) {
  const Model& m = *env.model;
  std::size_t n = m.basis->num_states;
  Bitset set(n);
  for (std::size_t s = 0; s < n; ++s) {
    long a = eval_int(env, s, e->lhs), b = eval_int(env, s, e->rhs);
    bool hold = false;
    switch (e->kind) {
      case ExprKind::Eq: hold = a == b; break;
      case ExprKind::Ne: hold = a != b; break;
      case ExprKind::Lt: hold = a < b; break;
      case ExprKind::Le: hold = a <= b; break;
      case ExprKind::Gt: hold = a > b; break;
      case ExprKind::Ge: hold = a >= b; break;
      default: throw error("not a comparison");
    }
    if (hold) set.set(s);
  }
  std::string name =
      display(env, e->lhs) + " " + kind_sym(e->kind) + " " + display(env, e->rhs);
  return atom(std::move(name), std::move(set));
}

FormulaPtr expand(const Env& env, const ExprPtr& e) {
  const Model& m = *env.model;
  switch (e->kind) {
    case ExprKind::BoolLit:
      return e->value ? truth() : falsity();
    case ExprKind::IntLit:
      throw error("numeric expression used as a formula");
    case ExprKind::Var: {
      if (auto it = env.binders.find(e->name); it != env.binders.end())
        return it->second ? truth() : falsity();
      int v = find_var(m, e->name);
      if (v >= 0) {
        int p = m.basis->sig.prop_index(e->name);
        if (p < 0) throw error("variable '" + e->name + "' used as a formula is not boolean");
        return m.basis->prop_atom(p);
      }
      if (auto it = env.lets.find(e->name); it != env.lets.end()) {
        Env inner{env.model, env.lets, {}};  // let bodies are closed w.r.t. binders
        return expand(inner, it->second);
      }
      throw error("unknown name '" + e->name + "'");
    }
    case ExprKind::Not:
      return f_not(expand(env, e->lhs));
    case ExprKind::And:
      return f_and(expand(env, e->lhs), expand(env, e->rhs));
    case ExprKind::Or:
      return f_or(expand(env, e->lhs), expand(env, e->rhs));
    case ExprKind::Implies:
      return f_implies(expand(env, e->lhs), expand(env, e->rhs));
    case ExprKind::Iff:
      return f_iff(expand(env, e->lhs), expand(env, e->rhs));
    case ExprKind::Eq:
    case ExprKind::Ne:
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge:
      return comparison_atom(env, e);
    case ExprKind::Know:
    case ExprKind::Maybe: {
      int a = m.basis->sig.agent_index(e->name);
      if (a < 0) throw error("unknown agent '" + e->name + "'");
      FormulaPtr body = expand(env, e->lhs);
      return e->kind == ExprKind::Know ? know(a, std::move(body)) : maybe(a, std::move(body));
    }
    case ExprKind::EX: return unary(Op::EX, expand(env, e->lhs));
    case ExprKind::EF: return unary(Op::EF, expand(env, e->lhs));
    case ExprKind::EG: return unary(Op::EG, expand(env, e->lhs));
    case ExprKind::AX: return unary(Op::AX, expand(env, e->lhs));
    case ExprKind::AF: return unary(Op::AF, expand(env, e->lhs));
    case ExprKind::AG: return unary(Op::AG, expand(env, e->lhs));
    case ExprKind::EU:
      return binary(Op::EU, expand(env, e->lhs), expand(env, e->rhs));
    case ExprKind::AU:
      return binary(Op::AU, expand(env, e->lhs), expand(env, e->rhs));
    case ExprKind::Exists:
    case ExprKind::Forall: {
      long lo = e->binder_bool ? 0 : e->binder_lo;
      long hi = e->binder_bool ? 1 : e->binder_hi;
      FormulaPtr acc;
      Env inner = env;
      for (long v = lo; v <= hi; ++v) {
        inner.binders[e->name] = v;
        FormulaPtr part = expand(inner, e->lhs);
        if (!acc)
          acc = std::move(part);
        else
          acc = e->kind == ExprKind::Exists ? f_or(std::move(acc), std::move(part))
                                            : f_and(std::move(acc), std::move(part));
      }
      return acc;
    }
  }
  throw error("expand: unhandled expression");
}

}  // namespace

std::string Model::state_name(std::size_t state) const {
  std::string out;
  for (std::size_t v = 0; v < var_names.size(); ++v) {
    if (v) out += ",";
    long val = var_value(state, v);
    out += var_names[v] + "=";
    if (var_lo[v] == 0 && var_hi[v] == 1 && basis->sig.prop_index(var_names[v]) >= 0)
      out += val ? "true" : "false";
    else
      out += std::to_string(val);
  }
  return out;
}

FormulaPtr expand_expr(const Model& m, const ExprPtr& e) {
  Env env{&m, {}, {}};
  for (const auto& l : m.lets) env.lets[l.name] = l.body;
  return expand(env, e);
}

Model elaborate(const Spec& spec, std::size_t max_states) {
  Model m;
  m.lets = spec.lets;

  auto basis = std::make_shared<StateBasis>();
  for (const auto& d : spec.vars)
    for (const auto& name : d.names) {
      m.var_names.push_back(name);
      m.var_lo.push_back(d.is_bool ? 0 : d.lo);
      m.var_hi.push_back(d.is_bool ? 1 : d.hi);
    }
  std::size_t n = 1;
  m.strides.assign(m.var_names.size(), 1);
  for (std::size_t v = m.var_names.size(); v-- > 0;) {
    m.strides[v] = n;
    std::size_t dom = static_cast<std::size_t>(m.var_hi[v] - m.var_lo[v] + 1);
    if (n > max_states / dom + 1) throw error("state space exceeds the configured limit");
    n *= dom;
  }
  if (n > max_states) throw error("state space exceeds the configured limit");
  basis->num_states = n;

  // propositions: a boolean variable is itself one, a bounded one gets one per value
  std::vector<bool> var_is_bool;
  {
    std::size_t v = 0;
    for (const auto& d : spec.vars)
      for (std::size_t i = 0; i < d.names.size(); ++i, ++v) var_is_bool.push_back(d.is_bool);
  }
  m.basis = basis;  // var_value needs strides + basis during construction
  for (std::size_t v = 0; v < m.var_names.size(); ++v) {
    if (var_is_bool[v]) {
      Bitset set(n);
      for (std::size_t s = 0; s < n; ++s)
        if (m.var_value(s, v)) set.set(s);
      basis->sig.props.push_back(m.var_names[v]);
      basis->prop_states.push_back(std::move(set));
    } else {
      for (long val = m.var_lo[v]; val <= m.var_hi[v]; ++val) {
        Bitset set(n);
        for (std::size_t s = 0; s < n; ++s)
          if (m.var_value(s, v) == val) set.set(s);
        basis->sig.props.push_back(m.var_names[v] + "=" + std::to_string(val));
        basis->prop_states.push_back(std::move(set));
      }
    }
  }

  // accessibility: agreement on the observed variables
  for (const auto& a : spec.agents) {
    basis->sig.agents.push_back(a.name);
    std::vector<int> obs;
    for (const auto& o : a.observed) obs.push_back(find_var(m, o));
    std::map<std::vector<long>, std::vector<std::size_t>> classes;
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<long> key;
      for (int v : obs) key.push_back(m.var_value(s, static_cast<std::size_t>(v)));
      classes[key].push_back(s);
    }
    Relation e(n);
    for (const auto& [key, members] : classes) {
      Bitset cls(n);
      for (std::size_t s : members) cls.set(s);
      for (std::size_t s : members) {
        cls.for_each([&](std::size_t t) { e.set(s, t); });
      }
    }
    basis->access.push_back(std::move(e));
  }

  // initial states: conjunction of the declared constraints
  basis->initial = Bitset(n, true);
  {
    Env env{&m, {}, {}};
    for (const auto& l : spec.lets) env.lets[l.name] = l.body;
    for (const auto& d : spec.vars) {
      if (!d.init) continue;
      FormulaPtr f = expand(env, d.init);
      // a state predicate: evaluate extensionally via a structure-free walk
      Bitset sat = [&] {
        // temporal/epistemic-free by typecheck; reuse the rules-layer trick
        struct Rec {
          static Bitset go(const StateBasis& b, const FormulaPtr& f) {
            std::size_t n = b.num_states;
            switch (f->op) {
              case Op::Atom: return f->states;
              case Op::True: return Bitset(n, true);
              case Op::False: return Bitset(n);
              case Op::Not: return go(b, f->lhs).complement();
              case Op::And: return go(b, f->lhs) & go(b, f->rhs);
              case Op::Or: return go(b, f->lhs) | go(b, f->rhs);
              case Op::Implies: return go(b, f->lhs).complement() | go(b, f->rhs);
              case Op::Iff: {
                Bitset x = go(b, f->lhs), y = go(b, f->rhs);
                return (x & y) | (x.complement() & y.complement());
              }
              default: throw error("initial constraint must be a state predicate");
            }
          }
        };
        return Rec::go(*basis, f);
      }();
      basis->initial &= sat;
    }
  }

  // guarded actions
  m.system.basis = basis;
  {
    Env env{&m, {}, {}};
    for (const auto& l : spec.lets) env.lets[l.name] = l.body;
    for (const auto& a : spec.actions) {
      GuardedAction act;
      act.name = a.name;
      act.guard = a.guard ? expand(env, a.guard) : truth();
      act.rel = Relation(n);
      std::vector<int> targets;
      for (const auto& [tname, rhs] : a.assigns) targets.push_back(find_var(m, tname));
      std::size_t dropped = 0;
      for (std::size_t s = 0; s < n; ++s) {
        bool ok = true;
        std::size_t t = s;
        for (std::size_t i = 0; i < targets.size() && ok; ++i) {
          std::size_t v = static_cast<std::size_t>(targets[i]);
          long val = eval_int(env, s, a.assigns[i].second);
          if (val < m.var_lo[v] || val > m.var_hi[v]) {
            ok = false;
            break;
          }
          long old = m.var_value(t, v);
          t = t + static_cast<std::size_t>(val - old) * m.strides[v];
        }
        if (ok)
          act.rel.set(s, t);
        else
          ++dropped;
      }
      if (dropped)
        m.warnings.push_back("action " + a.name + ": dropped " + std::to_string(dropped) +
                             " out-of-range transitions");
      m.system.actions.push_back(std::move(act));
    }
  }

  // checks
  {
    Env env{&m, {}, {}};
    for (const auto& l : spec.lets) env.lets[l.name] = l.body;
    int idx = 0;
    for (const auto& c : spec.checks) {
      CheckRequest req;
      req.kind = c.reachable ? CheckRequest::Reachable : CheckRequest::Initial;
      req.name = std::to_string(++idx);
      req.formula = expand(env, c.body);
      m.checks.push_back(std::move(req));
    }
  }

  return m;
}

}  // namespace kbp::lang
