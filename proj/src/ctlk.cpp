#include "kbp/ctlk.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "kbp/guarded.hpp"

namespace kbp {

namespace {

// States with at least one infinite outgoing path (greatest fixed point of
// "has a successor in Z").
Bitset live_states(const Relation& t, std::size_t n) {
  Bitset z(n, true);
  for (;;) {
    Bitset next = t.pre_exists(z);
    if (next == z) return z;
    z = next;
  }
}

struct EvalCtx {
  const StateBasis* basis = nullptr;
  const Relation* t_low = nullptr;  // E-quantified path operators, M
  const Relation* t_up = nullptr;   // A-quantified path operators, K
  Bitset rs_low, rs_up;             // reachable in lower / upper bound
  Bitset live_low, live_up;
  bool classical = false;  // permits Not/Implies/Iff via set complement
  // The memo keys nodes by address, so every evaluated tree must stay alive
  // for the lifetime of the context or freed nodes could alias new ones.
  std::vector<FormulaPtr> retained;
  std::unordered_map<const Formula*, Bitset> memo;
};

Bitset eval(EvalCtx& ctx, const FormulaPtr& f);

Bitset eu_states(const Relation& t, const Bitset& live, const Bitset& sat1, const Bitset& sat2) {
  Bitset z = sat2 & live;
  for (;;) {
    Bitset next = z | (sat1 & t.pre_exists(z));
    if (next == z) return z;
    z = next;
  }
}

Bitset eg_states(const Relation& t, const Bitset& sat) {
  Bitset z = sat;
  for (;;) {
    Bitset next = sat & t.pre_exists(z);
    if (next == z) return z;
    z = next;
  }
}

Bitset eval_raw(EvalCtx& ctx, const FormulaPtr& f) {
  std::size_t n = ctx.basis->num_states;
  switch (f->op) {
    case Op::Atom:
      return f->states;
    case Op::True:
      return Bitset(n, true);
    case Op::False:
      return Bitset(n);
    case Op::Not:
      if (!ctx.classical && f->lhs->op != Op::Atom)
        throw error("constructive evaluation needs negation normal form");
      return eval(ctx, f->lhs).complement();
    case Op::And:
      return eval(ctx, f->lhs) & eval(ctx, f->rhs);
    case Op::Or:
      return eval(ctx, f->lhs) | eval(ctx, f->rhs);
    case Op::Implies:
    case Op::Iff: {
      if (!ctx.classical)
        throw error("constructive evaluation needs negation normal form");
      Bitset a = eval(ctx, f->lhs), b = eval(ctx, f->rhs);
      if (f->op == Op::Implies) return a.complement() | b;
      return (a & b) | (a.complement() & b.complement());
    }
    case Op::Know: {
      Bitset sat = eval(ctx, f->lhs);
      Bitset bad = ctx.rs_up - sat;  // accessible counterexamples must be upper-reachable
      const Relation& e = ctx.basis->access[f->agent];
      Bitset r(n);
      for (std::size_t s = 0; s < n; ++s)
        if (!e.row_intersects(s, bad)) r.set(s);
      return r;
    }
    case Op::Maybe: {
      Bitset good = eval(ctx, f->lhs) & ctx.rs_low;
      return ctx.basis->access[f->agent].pre_exists(good);
    }
    case Op::EX:
      return ctx.t_low->pre_exists(eval(ctx, f->lhs) & ctx.live_low);
    case Op::AX:
      // no successor that both continues a path and violates the body
      return ctx.t_up->pre_exists(ctx.live_up - eval(ctx, f->lhs)).complement();
    case Op::EF:
      return eu_states(*ctx.t_low, ctx.live_low, Bitset(n, true), eval(ctx, f->lhs));
    case Op::AG:
      return eu_states(*ctx.t_up, ctx.live_up, Bitset(n, true),
                       eval(ctx, f->lhs).complement())
          .complement();
    case Op::EG:
      return eg_states(*ctx.t_low, eval(ctx, f->lhs));
    case Op::AF:
      return eg_states(*ctx.t_up, eval(ctx, f->lhs).complement()).complement();
    case Op::EU:
      return eu_states(*ctx.t_low, ctx.live_low, eval(ctx, f->lhs), eval(ctx, f->rhs));
    case Op::AU: {
      // dual: no path with !b until (!a & !b), and no path globally !b
      Bitset na = eval(ctx, f->lhs).complement();
      Bitset nb = eval(ctx, f->rhs).complement();
      Bitset viol = eu_states(*ctx.t_up, ctx.live_up, nb, na & nb) | eg_states(*ctx.t_up, nb);
      return viol.complement();
    }
    case Op::ER: {
      Bitset a = eval(ctx, f->lhs), b = eval(ctx, f->rhs);
      return eu_states(*ctx.t_low, ctx.live_low, b, a & b) | eg_states(*ctx.t_low, b);
    }
    case Op::AR: {
      Bitset na = eval(ctx, f->lhs).complement();
      Bitset nb = eval(ctx, f->rhs).complement();
      return eu_states(*ctx.t_up, ctx.live_up, na, nb).complement();
    }
  }
  throw error("eval: unknown operator");
}

Bitset eval(EvalCtx& ctx, const FormulaPtr& f) {
  auto it = ctx.memo.find(f.get());
  if (it != ctx.memo.end()) return it->second;
  Bitset r = eval_raw(ctx, f);
  ctx.memo.emplace(f.get(), r);
  return r;
}

}  // namespace

struct EtsEvaluator::Impl {
  Relation rt;
  EvalCtx ctx;
};

EtsEvaluator::EtsEvaluator(const TransitionStructure& m) : impl_(new Impl) {
  Bitset rs = reachable_states(*m.basis, m.trans);
  impl_->rt = restrict_sources(m.trans, rs);
  impl_->ctx.basis = m.basis.get();
  impl_->ctx.t_low = impl_->ctx.t_up = &impl_->rt;
  impl_->ctx.rs_low = impl_->ctx.rs_up = rs;
  impl_->ctx.live_low = impl_->ctx.live_up = live_states(impl_->rt, m.basis->num_states);
  impl_->ctx.classical = true;
}
EtsEvaluator::~EtsEvaluator() = default;
EtsEvaluator::EtsEvaluator(EtsEvaluator&&) noexcept = default;

Bitset EtsEvaluator::operator()(const FormulaPtr& f) {
  impl_->ctx.retained.push_back(f);
  return eval(impl_->ctx, f) & impl_->ctx.rs_up;
}
const Bitset& EtsEvaluator::reachable() const { return impl_->ctx.rs_up; }

struct McEvaluator::Impl {
  Relation low, up;
  EvalCtx ctx;
};

McEvaluator::McEvaluator(const MustCanStructure& y) : impl_(new Impl) {
  std::size_t n = y.basis->num_states;
  impl_->low = y.lower;
  impl_->up = y.upper;
  impl_->ctx.basis = y.basis.get();
  impl_->ctx.t_low = &impl_->low;
  impl_->ctx.t_up = &impl_->up;
  impl_->ctx.rs_low = reachable_states(*y.basis, y.lower);
  impl_->ctx.rs_up = reachable_states(*y.basis, y.upper);
  impl_->ctx.live_low = live_states(impl_->low, n);
  impl_->ctx.live_up = live_states(impl_->up, n);
  impl_->ctx.classical = false;
}
McEvaluator::~McEvaluator() = default;
McEvaluator::McEvaluator(McEvaluator&&) noexcept = default;

Bitset McEvaluator::operator()(const FormulaPtr& f) {
  if (!is_nnf(f)) throw error("eval_mc: formula must be in negation normal form");
  impl_->ctx.retained.push_back(f);
  return eval(impl_->ctx, f) & impl_->ctx.rs_up;
}
const Bitset& McEvaluator::reachable_lower() const { return impl_->ctx.rs_low; }
const Bitset& McEvaluator::reachable_upper() const { return impl_->ctx.rs_up; }

Bitset eval_ets(const TransitionStructure& m, const FormulaPtr& f) {
  EtsEvaluator ev(m);
  return ev(f);
}

Bitset eval_mc(const MustCanStructure& y, const FormulaPtr& f) {
  McEvaluator ev(y);
  return ev(f);
}

FormulaPtr ctlk_nnf(const FormulaPtr& f) { return nnf(f); }

Verdict run_check(const TransitionStructure& m, const std::vector<GuardedAction>& actions,
                  const CheckRequest& req) {
  Verdict v;
  if (req.kind == CheckRequest::Initial) {
    EtsEvaluator ev(m);
    Bitset sat = ev(req.formula);
    v.holds = true;
    m.basis->initial.for_each([&](std::size_t s) {
      if (v.holds && !sat.test(s)) {
        v.holds = false;
        v.failing_state = static_cast<std::uint32_t>(s);
      }
    });
    return v;
  }

  // reachable check: a pure state predicate, searched by graph reachability
  if (!temporal_free(req.formula) || !epistemic_free(req.formula))
    throw error("reachable check '" + req.name + "' must be a plain state predicate");
  Bitset reach = reachable_states(*m.basis, m.trans);
  EvalCtx ctx;
  ctx.basis = m.basis.get();
  Relation dummy(m.basis->num_states);
  ctx.t_low = ctx.t_up = &dummy;
  ctx.rs_low = ctx.rs_up = Bitset(m.basis->num_states, true);
  ctx.live_low = ctx.live_up = Bitset(m.basis->num_states);
  ctx.classical = true;
  Bitset goal = eval(ctx, req.formula) & reach;
  v.holds = goal.any();
  if (!v.holds) return v;

  // breadth-first search for a shortest witness, deterministic tie-breaking;
  // edges are attributed only to actions whose guard holds at the source
  std::size_t n = m.basis->num_states;
  EtsEvaluator guard_eval(m);
  std::vector<Bitset> enabled;
  enabled.reserve(actions.size());
  for (const auto& act : actions) enabled.push_back(guard_eval(act.guard));
  std::vector<int> parent(n, -1), via_action(n, -1);
  Bitset seen(n);
  std::deque<std::uint32_t> queue;
  std::int64_t found = -1;
  m.basis->initial.for_each([&](std::size_t s) {
    if (found < 0 && goal.test(s)) found = static_cast<std::int64_t>(s);
    if (!seen.test(s)) {
      seen.set(s);
      queue.push_back(static_cast<std::uint32_t>(s));
    }
  });
  while (found < 0 && !queue.empty()) {
    std::uint32_t s = queue.front();
    queue.pop_front();
    for (std::size_t a = 0; a < actions.size() && found < 0; ++a) {
      if (!enabled[a].test(s)) continue;
      Bitset succ = m.trans.successors(s) & actions[a].rel.successors(s);
      succ.for_each([&](std::size_t t) {
        if (found >= 0 || seen.test(t)) return;
        seen.set(t);
        parent[t] = static_cast<int>(s);
        via_action[t] = static_cast<int>(a);
        if (goal.test(t))
          found = static_cast<std::int64_t>(t);
        else
          queue.push_back(static_cast<std::uint32_t>(t));
      });
    }
  }
  if (found < 0) throw error("run_check: goal reachable but search failed (internal)");

  std::vector<WitnessStep> steps;
  std::int64_t cur = found;
  while (parent[cur] >= 0) {
    steps.push_back({actions[via_action[cur]].name, static_cast<std::uint32_t>(cur)});
    cur = parent[cur];
  }
  std::reverse(steps.begin(), steps.end());
  v.witness_start = static_cast<std::uint32_t>(cur);
  v.witness = std::move(steps);
  return v;
}

}  // namespace kbp
