#include "kbp/kernel.hpp"

#include "kbp/ctlk.hpp"

namespace kbp {

int Signature::prop_index(const std::string& name) const {
  for (std::size_t i = 0; i < props.size(); ++i)
    if (props[i] == name) return static_cast<int>(i);
  return -1;
}

int Signature::agent_index(const std::string& name) const {
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (agents[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> accessibility_warnings(const StateBasis& basis, bool strict) {
  std::vector<std::string> out;
  auto report = [&](std::string msg) {
    if (strict) throw error(msg);
    out.push_back(std::move(msg));
  };
  for (std::size_t a = 0; a < basis.access.size(); ++a) {
    const Relation& r = basis.access[a];
    const std::string& ag = basis.sig.agents[a];
    bool refl = true, symm = true, trans = true;
    for (std::size_t s = 0; s < basis.num_states && refl; ++s)
      if (!r.test(s, s)) refl = false;
    for (std::size_t s = 0; s < basis.num_states && symm; ++s)
      for (std::size_t t = 0; t < basis.num_states && symm; ++t)
        if (r.test(s, t) != r.test(t, s)) symm = false;
    for (std::size_t s = 0; s < basis.num_states && trans; ++s) {
      Bitset succ = r.successors(s);
      bool ok = true;
      succ.for_each([&](std::size_t t) {
        if (ok && !r.row_subset_of(t, succ)) ok = false;
      });
      if (!ok) trans = false;
    }
    if (!refl) report("accessibility for agent " + ag + " is not reflexive");
    if (!symm) report("accessibility for agent " + ag + " is not symmetric");
    if (!trans) report("accessibility for agent " + ag + " is not transitive");
  }
  return out;
}

bool mc_leq(const MustCanStructure& y1, const MustCanStructure& y2) {
  if (!(*y1.basis == *y2.basis))
    throw error("mc_leq: structures over different bases are incomparable");
  return y1.lower.subset_of(y2.lower) && y2.upper.subset_of(y1.upper);
}

ReachabilityInfo compute_reachability(const StateBasis& basis, const Relation& trans) {
  ReachabilityInfo info;
  std::size_t n = basis.num_states;
  info.depth.assign(n, -1);

  Bitset rs = basis.initial;
  Relation rt(n);
  rs.for_each([&](std::size_t s) { info.depth[s] = 0; });
  info.state_layers.push_back(rs);
  info.edge_layers.push_back(rt);

  for (;;) {
    Relation rt_next = rt;
    Bitset rs_next = rs;
    rs.for_each([&](std::size_t s) {
      Bitset succ = trans.successors(s);
      succ.for_each([&](std::size_t t) {
        rt_next.set(s, t);
        if (info.depth[t] < 0)
          info.depth[t] = static_cast<int>(info.state_layers.size());
      });
      rs_next |= succ;
    });
    if (rs_next == rs && rt_next == rt) break;
    rs = rs_next;
    rt = rt_next;
    info.state_layers.push_back(rs);
    info.edge_layers.push_back(rt);
  }
  info.reachable = rs;
  info.reachable_edges = rt;
  return info;
}

Bitset reachable_states(const StateBasis& basis, const Relation& trans) {
  Bitset rs = basis.initial;
  Bitset frontier = rs;
  while (frontier.any()) {
    Bitset next = trans.post(frontier);
    next -= rs;
    rs |= next;
    frontier = std::move(next);
  }
  return rs;
}

Relation restrict_sources(const Relation& trans, const Bitset& sources) {
  Relation out = trans;
  for (std::size_t s = 0; s < trans.size(); ++s)
    if (!sources.test(s)) out.clear_row(s);
  return out;
}

bool kripke_sat(const TransitionStructure& m, std::size_t state, const FormulaPtr& f) {
  if (!reachable_states(*m.basis, m.trans).test(state))
    throw error("kripke_sat: state is not reachable; satisfaction is undefined there");
  return eval_ets(m, f).test(state);
}

bool mc_sat(const MustCanStructure& y, std::size_t state, const FormulaPtr& f) {
  if (!is_nnf(f)) throw error("mc_sat: formula must be in negation normal form");
  if (!reachable_states(*y.basis, y.upper).test(state))
    throw error("mc_sat: state is not reachable in the upper bound");
  return eval_mc(y, f).test(state);
}

std::pair<bool, bool> mc_sat_posneg(const MustCanStructure& y, std::size_t state,
                                    const FormulaPtr& f) {
  return {mc_sat(y, state, nnf(f)), mc_sat(y, state, nnf(f_not(f)))};
}

}  // namespace kbp
