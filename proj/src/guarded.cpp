#include "kbp/guarded.hpp"

#include <algorithm>

namespace kbp {

Relation GuardedSystem::union_of_actions() const {
  Relation u(basis->num_states);
  for (const auto& a : actions) u |= a.rel;
  return u;
}

TransitionStructure interpret(const GuardedSystem& g, const TransitionStructure& m) {
  std::size_t n = g.basis->num_states;
  if (!(*g.basis == *m.basis))
    throw error("interpret: structure does not share the system's basis");
  Relation out(n);
  EtsEvaluator ev(m);
  for (const auto& act : g.actions) {
    Bitset enabled = ev(act.guard);  // already cut to reachable states
    enabled.for_each([&](std::size_t s) {
      act.rel.successors(s).for_each([&](std::size_t t) { out.set(s, t); });
    });
  }
  return {g.basis, std::move(out)};
}

namespace {

struct McRound {
  MustCanStructure next;
  std::vector<ActionEdges> per_action;
};

McRound interpret_mc_round(const GuardedSystem& g, const MustCanStructure& y) {
  std::size_t n = g.basis->num_states;
  McEvaluator ev(y);
  Relation lo(n), up(n);
  std::vector<ActionEdges> per_action;
  per_action.reserve(g.actions.size());
  for (const auto& act : g.actions) {
    Bitset pos = ev(nnf(act.guard));
    Bitset neg = ev(nnf(f_not(act.guard)));
    Bitset must_src = ev.reachable_lower() & pos;
    Bitset can_src = ev.reachable_upper() - neg;
    ActionEdges ae;
    must_src.for_each([&](std::size_t s) {
      act.rel.successors(s).for_each([&](std::size_t t) {
        lo.set(s, t);
        ae.must.emplace_back(static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(t));
      });
    });
    can_src.for_each([&](std::size_t s) {
      act.rel.successors(s).for_each([&](std::size_t t) {
        up.set(s, t);
        ae.can.emplace_back(static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(t));
      });
    });
    per_action.push_back(std::move(ae));
  }
  return {MustCanStructure(g.basis, std::move(lo), std::move(up)), std::move(per_action)};
}

}  // namespace

MustCanStructure interpret_mc(const GuardedSystem& g, const MustCanStructure& y) {
  if (!(*g.basis == *y.basis))
    throw error("interpret_mc: structure does not share the system's basis");
  return interpret_mc_round(g, y).next;
}

FixpointTrace lfp_constructive(const GuardedSystem& g) {
  std::size_t n = g.basis->num_states;
  FixpointTrace trace;
  std::size_t cap = 2 * g.union_of_actions().edge_count() + 4;
  trace.iterates.emplace_back(g.basis, Relation(n), Relation(n, true));
  for (;;) {
    McRound round = interpret_mc_round(g, trace.iterates.back());
    if (!mc_leq(trace.iterates.back(), round.next))
      throw error("lfp_constructive: round is not monotone (internal)");
    bool done = round.next == trace.iterates.back();
    trace.iterates.push_back(std::move(round.next));
    trace.per_step.push_back(std::move(round.per_action));
    ++trace.steps;
    if (done) return trace;
    if (trace.steps > cap)
      throw error("lfp_constructive: fixed point not reached within bound (internal)");
  }
}

IterationResult iteration_semantics(const GuardedSystem& g) {
  std::size_t n = g.basis->num_states;
  std::vector<Relation> seq;
  seq.emplace_back(n, true);  // N_0: everything
  std::size_t eta = 0, repeat_at = 0;
  for (;;) {
    TransitionStructure cur{g.basis, seq.back()};
    Relation next = interpret(g, cur).trans;
    bool found = false;
    for (std::size_t j = 0; j < seq.size(); ++j) {
      if (seq[j] == next) {
        eta = j;
        repeat_at = seq.size();
        found = true;
        break;
      }
    }
    seq.push_back(std::move(next));
    if (found) break;
  }
  // after the first recurrence the sequence cycles; read iterates off the cycle
  std::size_t period = repeat_at - eta;
  auto at = [&](std::size_t i) -> const Relation& {
    if (i < seq.size()) return seq[i];
    return seq[eta + (i - eta) % period];
  };
  for (std::size_t a = eta;; ++a) {
    Relation cur = at(a);
    const Relation& next = at(a + 1);
    if (cur == next)
      return {std::move(seq), eta, a, IterationStatus::FixedPoint,
              TransitionStructure{g.basis, std::move(cur)}};
    if (!next.subset_of(cur))
      return {std::move(seq), eta, a, IterationStatus::NonMonotoneStop,
              TransitionStructure{g.basis, std::move(cur)}};
  }
}

Classification classify(const GuardedSystem& g) {
  FixpointTrace trace = lfp_constructive(g);
  MustCanStructure y = trace.iterates.back();
  if (y.decided()) {
    Classification c{SolutionStatus::Decided, y, TransitionStructure{g.basis, y.lower},
                     "bounds agree: unique solution"};
    return c;
  }
  TransitionStructure from_lower = interpret(g, TransitionStructure{g.basis, y.lower});
  TransitionStructure from_upper = interpret(g, TransitionStructure{g.basis, y.upper});
  if (from_lower.trans == y.upper && from_upper.trans == y.upper) {
    Classification c{SolutionStatus::FallbackSolved, y, TransitionStructure{g.basis, y.upper},
                     "bounds differ but both reinterpret to the upper bound"};
    return c;
  }
  Classification c{SolutionStatus::Unresolved, y, std::nullopt,
                   "bounds differ and the fallback reinterpretation does not close them"};
  return c;
}

TransitionStructure liberal_reinterpretation(const GuardedSystem& g, const MustCanStructure& y) {
  if (!(interpret_mc(g, y) == y))
    throw error("liberal_reinterpretation: structure is not an evaluation fixed point");
  std::size_t n = g.basis->num_states;
  McEvaluator ev(y);
  Relation out(n);
  for (const auto& act : g.actions) {
    Bitset src = ev(nnf(act.guard)) & ev.reachable_upper();
    src.for_each([&](std::size_t s) {
      act.rel.successors(s).for_each([&](std::size_t t) { out.set(s, t); });
    });
  }
  return {g.basis, std::move(out)};
}

std::vector<TransitionStructure> enumerate_solutions(const GuardedSystem& g,
                                                     std::size_t max_edges) {
  std::vector<Edge> pool = g.union_of_actions().edges();
  if (pool.size() > max_edges)
    throw error("enumerate_solutions: candidate union has " + std::to_string(pool.size()) +
                " edges, above the limit of " + std::to_string(max_edges));
  std::size_t n = g.basis->num_states;
  std::vector<TransitionStructure> out;
  for (std::uint64_t mask = 0; mask < (1ull << pool.size()); ++mask) {
    Relation t(n);
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (mask & (1ull << i)) t.set(pool[i].first, pool[i].second);
    TransitionStructure m{g.basis, std::move(t)};
    if (interpret(g, m).trans == m.trans) out.push_back(std::move(m));
  }
  return out;
}

bool structure_provides_witnesses(const TransitionStructure& m,
                                  const std::vector<FormulaPtr>& know_formulas) {
  ReachabilityInfo info = compute_reachability(*m.basis, m.trans);
  for (const auto& kf : know_formulas) {
    if (kf->op != Op::Know)
      throw error("structure_provides_witnesses: expected a K formula");
    Bitset sat_k = eval_ets(m, kf);
    Bitset sat_body = eval_ets(m, kf->lhs);
    const Relation& e = m.basis->access[kf->agent];
    for (const Bitset& layer : info.state_layers) {
      bool ok = true;
      layer.for_each([&](std::size_t s) {
        if (!ok || sat_k.test(s)) return;
        // failed knowledge needs a refuting accessible state at the same depth
        Bitset refuters = (layer - sat_body) & e.successors(s);
        if (refuters.none()) ok = false;
      });
      if (!ok) return false;
    }
  }
  return true;
}

bool structure_is_synchronous(const TransitionStructure& m) {
  ReachabilityInfo info = compute_reachability(*m.basis, m.trans);
  std::size_t n = m.basis->num_states;
  for (const auto& e : m.basis->access) {
    for (std::size_t s = 0; s < n; ++s) {
      if (info.depth[s] < 0) continue;
      bool ok = true;
      e.successors(s).for_each([&](std::size_t t) {
        if (ok && info.depth[t] >= 0 && info.depth[t] != info.depth[s]) ok = false;
      });
      if (!ok) return false;
    }
  }
  return true;
}

SystemAnalysis system_epistemic_analysis(const GuardedSystem& g, std::size_t max_free) {
  std::size_t n = g.basis->num_states;
  std::vector<std::size_t> free;
  for (std::size_t s = 0; s < n; ++s)
    if (!g.basis->initial.test(s)) free.push_back(s);
  if (free.size() > max_free)
    throw error("system_epistemic_analysis: " + std::to_string(free.size()) +
                " non-initial states, above the limit of " + std::to_string(max_free));

  std::vector<FormulaPtr> phis;
  for (const auto& act : g.actions)
    for (const auto& kf : know_subformulas(act.guard)) {
      bool dup = false;
      for (const auto& p : phis)
        if (formula_equal(p, kf)) { dup = true; break; }
      if (!dup) phis.push_back(kf);
    }

  SystemAnalysis res;
  for (std::uint64_t mask = 0; mask < (1ull << free.size()); ++mask) {
    // canonical structure whose reachable states are exactly S0 plus the subset
    Relation t(n);
    g.basis->initial.for_each([&](std::size_t s0) {
      g.basis->initial.for_each([&](std::size_t t1) { t.set(s0, t1); });
      for (std::size_t i = 0; i < free.size(); ++i)
        if (mask & (1ull << i)) t.set(s0, free[i]);
    });
    TransitionStructure m = interpret(g, TransitionStructure{g.basis, std::move(t)});
    if (!structure_provides_witnesses(m, phis)) res.provides_witnesses = false;
    if (!structure_is_synchronous(m)) res.synchronous = false;
    if (!res.provides_witnesses && !res.synchronous) break;
  }
  return res;
}

}  // namespace kbp
