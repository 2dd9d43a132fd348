#include "kbp/rules.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace kbp {

int RuleSystem::element_index(const std::string& name) const {
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (universe[i] == name) return static_cast<int>(i);
  return -1;
}

MustCanPair apply_mc(const RuleSystem& r, const MustCanPair& p) {
  std::size_t n = r.universe.size();
  MustCanPair out{Bitset(n), Bitset(n)};
  for (const auto& rule : r.rules) {
    bool pos_must = true, pos_can = true;
    for (int x : rule.pos) {
      if (!p.must.test(x)) pos_must = false;
      if (!p.can.test(x)) pos_can = false;
    }
    bool neg_hits_can = false, neg_hits_must = false;
    for (int z : rule.neg) {
      if (p.can.test(z)) neg_hits_can = true;
      if (p.must.test(z)) neg_hits_must = true;
    }
    if (pos_must && !neg_hits_can) out.must.set(rule.conclusion);
    if (pos_can && !neg_hits_must) out.can.set(rule.conclusion);
  }
  return out;
}

RulesTrace lfp_mc(const RuleSystem& r) {
  std::size_t n = r.universe.size();
  RulesTrace trace;
  trace.iterates.push_back({Bitset(n), Bitset(n, true)});
  for (;;) {
    MustCanPair next = apply_mc(r, trace.iterates.back());
    bool done = next == trace.iterates.back();
    trace.iterates.push_back(next);
    ++trace.steps;
    if (done) return trace;
    if (trace.steps > 2 * n + 4)
      throw error("lfp_mc: fixed point not reached within bound (internal)");
  }
}

Bitset closure(const RuleSystem& r, const Bitset& blocked) {
  std::size_t n = r.universe.size();
  Bitset p(n);
  for (;;) {
    Bitset next(n);
    for (const auto& rule : r.rules) {
      bool ok = true;
      for (int z : rule.neg)
        if (blocked.test(z)) { ok = false; break; }
      if (ok)
        for (int x : rule.pos)
          if (!p.test(x)) { ok = false; break; }
      if (ok) next.set(rule.conclusion);
    }
    if (next == p) return p;
    p = next;
  }
}

std::vector<Bitset> enumerate_closure_fixpoints(const RuleSystem& r, std::size_t max_universe) {
  std::size_t n = r.universe.size();
  if (n > max_universe)
    throw error("enumerate_closure_fixpoints: universe of " + std::to_string(n) +
                " elements, above the limit of " + std::to_string(max_universe));
  std::vector<Bitset> out;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    Bitset b(n);
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) b.set(i);
    if (closure(r, b) == b) out.push_back(std::move(b));
  }
  return out;
}

std::optional<Derivation> explain(const RuleSystem& r, const Bitset& blocked, int target) {
  std::size_t n = r.universe.size();
  const long INF = std::numeric_limits<long>::max() / 2;
  std::vector<long> height(n, INF);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& rule : r.rules) {
      bool ok = true;
      for (int z : rule.neg)
        if (blocked.test(z)) { ok = false; break; }
      if (!ok) continue;
      long h = 1;
      for (int x : rule.pos) h = std::max(h, height[x] == INF ? INF : height[x] + 1);
      if (h < height[rule.conclusion]) {
        height[rule.conclusion] = h;
        changed = true;
      }
    }
  }
  if (height[target] == INF) return std::nullopt;

  // reconstruction picks the first rule achieving the minimal height
  auto build = [&](auto&& self, int y) -> Derivation {
    for (std::size_t i = 0; i < r.rules.size(); ++i) {
      const auto& rule = r.rules[i];
      if (rule.conclusion != y) continue;
      bool ok = true;
      for (int z : rule.neg)
        if (blocked.test(z)) { ok = false; break; }
      if (!ok) continue;
      long h = 1;
      for (int x : rule.pos) h = std::max(h, height[x] == INF ? INF : height[x] + 1);
      if (h != height[y]) continue;
      Derivation d{y, static_cast<int>(i), {}};
      for (int x : rule.pos) d.children.push_back(self(self, x));
      return d;
    }
    throw error("explain: reconstruction failed (internal)");
  };
  return build(build, target);
}

namespace {

struct FormulaTable {
  std::vector<FormulaPtr> list;

  int add(const FormulaPtr& f) {
    for (std::size_t i = 0; i < list.size(); ++i)
      if (formula_equal(list[i], f)) return static_cast<int>(i);
    list.push_back(f);
    return static_cast<int>(list.size() - 1);
  }
  int find(const FormulaPtr& f) const {
    for (std::size_t i = 0; i < list.size(); ++i)
      if (formula_equal(list[i], f)) return static_cast<int>(i);
    return -1;
  }
};

}  // namespace

GeneralEncoding encode_general(const GuardedSystem& g) {
  for (const auto& act : g.actions)
    if (!temporal_free(act.guard))
      throw error("encode_general: guard of action '" + act.name + "' uses path operators");

  GeneralEncoding enc;
  std::size_t n = g.basis->num_states;
  enc.num_states = n;

  FormulaTable tab;
  enc.truth_id = tab.add(truth());
  std::vector<int> guard_ids;
  for (const auto& act : g.actions) {
    guard_ids.push_back(tab.add(nnf(act.guard)));
    tab.add(nnf(f_not(act.guard)));
  }
  // close under subformulae, and under negated bodies of K
  for (std::size_t i = 0; i < tab.list.size(); ++i) {
    FormulaPtr f = tab.list[i];
    if (f->lhs) tab.add(f->lhs);
    if (f->rhs) tab.add(f->rhs);
    if (f->op == Op::Know) tab.add(nnf(f_not(f->lhs)));
  }
  enc.formulas = tab.list;

  RuleSystem& rs = enc.system;
  for (const auto& f : tab.list)
    for (std::size_t s = 0; s < n; ++s)
      rs.universe.push_back("s" + std::to_string(s) + " |= " + to_string(f));

  auto j = [&](std::size_t s, int fid) { return enc.judgement(s, fid); };

  g.basis->initial.for_each([&](std::size_t s0) {
    rs.rules.push_back({{}, {}, j(s0, enc.truth_id)});
  });
  for (std::size_t a = 0; a < g.actions.size(); ++a)
    for (auto [s, t] : g.actions[a].rel.edges())
      rs.rules.push_back({{j(s, guard_ids[a])}, {}, j(t, enc.truth_id)});

  for (std::size_t fid = 0; fid < tab.list.size(); ++fid) {
    const FormulaPtr& f = tab.list[fid];
    switch (f->op) {
      case Op::True:
        break;  // only initiality and steps conclude reachability
      case Op::False:
        break;
      case Op::Atom:
        for (std::size_t s = 0; s < n; ++s)
          if (f->states.test(s))
            rs.rules.push_back({{j(s, enc.truth_id)}, {}, j(s, static_cast<int>(fid))});
        break;
      case Op::Not:  // NNF: negated atom
        for (std::size_t s = 0; s < n; ++s)
          if (!f->lhs->states.test(s))
            rs.rules.push_back({{j(s, enc.truth_id)}, {}, j(s, static_cast<int>(fid))});
        break;
      case Op::And: {
        int l = tab.find(f->lhs), r = tab.find(f->rhs);
        for (std::size_t s = 0; s < n; ++s)
          rs.rules.push_back({{j(s, l), j(s, r)}, {}, j(s, static_cast<int>(fid))});
        break;
      }
      case Op::Or: {
        int l = tab.find(f->lhs), r = tab.find(f->rhs);
        for (std::size_t s = 0; s < n; ++s) {
          rs.rules.push_back({{j(s, l)}, {}, j(s, static_cast<int>(fid))});
          rs.rules.push_back({{j(s, r)}, {}, j(s, static_cast<int>(fid))});
        }
        break;
      }
      case Op::Maybe: {
        int body = tab.find(f->lhs);
        for (auto [s, t] : g.basis->access[f->agent].edges())
          rs.rules.push_back({{j(t, body)}, {}, j(s, static_cast<int>(fid))});
        break;
      }
      case Op::Know: {
        int negbody = tab.find(nnf(f_not(f->lhs)));
        for (std::size_t s = 0; s < n; ++s) {
          Rule rule{{j(s, enc.truth_id)}, {}, j(s, static_cast<int>(fid))};
          g.basis->access[f->agent].successors(s).for_each(
              [&](std::size_t t) { rule.neg.push_back(j(t, negbody)); });
          rs.rules.push_back(std::move(rule));
        }
        break;
      }
      default:
        throw error("encode_general: formula not in temporal-free NNF: " + to_string(f));
    }
  }
  return enc;
}

namespace {

// Classical temporal-free evaluation with epistemic operators confined to a
// given state set.
Bitset layer_eval(const StateBasis& basis, const Bitset& layer, const FormulaPtr& f) {
  std::size_t n = basis.num_states;
  switch (f->op) {
    case Op::Atom:
      return f->states;
    case Op::True:
      return Bitset(n, true);
    case Op::False:
      return Bitset(n);
    case Op::Not:
      return layer_eval(basis, layer, f->lhs).complement();
    case Op::And:
      return layer_eval(basis, layer, f->lhs) & layer_eval(basis, layer, f->rhs);
    case Op::Or:
      return layer_eval(basis, layer, f->lhs) | layer_eval(basis, layer, f->rhs);
    case Op::Implies:
      return layer_eval(basis, layer, f->lhs).complement() | layer_eval(basis, layer, f->rhs);
    case Op::Iff: {
      Bitset a = layer_eval(basis, layer, f->lhs), b = layer_eval(basis, layer, f->rhs);
      return (a & b) | (a.complement() & b.complement());
    }
    case Op::Know: {
      Bitset bad = layer - layer_eval(basis, layer, f->lhs);
      Bitset r(n);
      for (std::size_t s = 0; s < n; ++s)
        if (!basis.access[f->agent].row_intersects(s, bad)) r.set(s);
      return r;
    }
    case Op::Maybe: {
      Bitset good = layer & layer_eval(basis, layer, f->lhs);
      return basis.access[f->agent].pre_exists(good);
    }
    default:
      throw error("stratified evaluation: guard uses path operators");
  }
}

}  // namespace

StratifiedTrace encode_stratified(const GuardedSystem& g, std::size_t max_depth) {
  StratifiedTrace trace;
  Bitset rs = g.basis->initial;
  for (std::size_t k = 0;; ++k) {
    trace.rs_layers.push_back(rs);
    if (k >= max_depth) break;
    std::vector<Bitset> sats;
    Bitset next = rs;
    for (const auto& act : g.actions) {
      Bitset sat = layer_eval(*g.basis, rs, act.guard) & rs;
      next |= act.rel.post(sat);
      sats.push_back(std::move(sat));
    }
    trace.guard_sat.push_back(std::move(sats));
    if (next == rs) break;
    rs = next;
  }
  return trace;
}

RuleSystem parse_rules(const std::string& text) {
  RuleSystem rs;
  bool universe_declared = false;
  auto elem = [&](const std::string& name, int line) -> int {
    int i = rs.element_index(name);
    if (i >= 0) return i;
    if (universe_declared)
      throw error("rules line " + std::to_string(line) + ": '" + name +
                  "' is not in the declared universe");
    rs.universe.push_back(name);
    return static_cast<int>(rs.universe.size() - 1);
  };

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto pos = raw.find('#'); pos != std::string::npos) raw.erase(pos);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string w; ls >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    if (tok[0] == "universe") {
      if (universe_declared || !rs.universe.empty())
        throw error("rules line " + std::to_string(line_no) +
                    ": universe must be declared once, before any rule");
      for (std::size_t i = 1; i < tok.size(); ++i) rs.universe.push_back(tok[i]);
      universe_declared = true;
      continue;
    }
    if (tok.size() < 2 || tok[1] != "<-")
      throw error("rules line " + std::to_string(line_no) + ": expected 'y <- ...'");
    Rule rule;
    rule.conclusion = elem(tok[0], line_no);
    std::size_t i = 2;
    for (; i < tok.size() && tok[i] != ";"; ++i) rule.pos.push_back(elem(tok[i], line_no));
    if (i < tok.size()) {  // negatives after "; !"
      ++i;
      if (i >= tok.size() || tok[i] != "!")
        throw error("rules line " + std::to_string(line_no) + ": expected '!' after ';'");
      for (++i; i < tok.size(); ++i) rule.neg.push_back(elem(tok[i], line_no));
    }
    rs.rules.push_back(std::move(rule));
  }
  return rs;
}

}  // namespace kbp
