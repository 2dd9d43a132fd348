#include "doctest.h"

#include <algorithm>

#include "fixtures.hpp"
#include "oracles.hpp"

#include "kbp/guarded.hpp"

using namespace kbp;

TEST_CASE("plain interpretation keeps guarded edges from reachable sources") {
  fx::BitTransmission bt;
  TransitionStructure sol{bt.basis, bt.solution};
  CHECK(interpret(bt.system, sol).trans == bt.solution);

  // over the full relation every state is reachable and R already knows the
  // bit wherever rcv holds, so only ack edges survive outside the send range
  TransitionStructure full{bt.basis, Relation(8, true)};
  TransitionStructure once = interpret(bt.system, full);
  CHECK(once.trans.subset_of(bt.system.union_of_actions()));
  for (auto [s, t] : once.trans.edges())
    CHECK(reachable_states(*bt.basis, full.trans).test(s));
}

TEST_CASE("must/can round from the trivial bounds on the cyclic system") {
  GuardedSystem g = fx::vs_system();
  MustCanStructure y0{g.basis, Relation(4), Relation(4, true)};
  MustCanStructure y1 = interpret_mc(g, y0);
  CHECK(y1.lower == Relation(4));
  CHECK(y1.upper == fx::rel(4, {{0, 1}, {0, 2}}));
  // already a fixed point: neither guard becomes decided
  CHECK(interpret_mc(g, y1) == y1);
}

TEST_CASE("constructive fixed point traces") {
  SUBCASE("cyclic system stays undecided") {
    FixpointTrace tr = lfp_constructive(fx::vs_system());
    const MustCanStructure& y = tr.iterates.back();
    CHECK(y.lower == Relation(4));
    CHECK(y.upper == fx::rel(4, {{0, 1}, {0, 2}}));
    CHECK(tr.steps == 2);
  }

  SUBCASE("broken cycle decides in four rounds") {
    GuardedSystem g = fx::vsb_system();
    FixpointTrace tr = lfp_constructive(g);
    REQUIRE(tr.iterates.size() == 5);
    CHECK(tr.iterates[0].lower == Relation(4));
    CHECK(tr.iterates[0].upper == Relation(4, true));
    CHECK(tr.iterates[1].lower == fx::rel(4, {{0, 2}}));
    CHECK(tr.iterates[1].upper == fx::rel(4, {{0, 1}, {0, 2}, {0, 3}}));
    // the unconditional edge makes s2 must-reachable, refuting a1's guard
    CHECK(tr.iterates[2].lower == fx::rel(4, {{0, 2}}));
    CHECK(tr.iterates[2].upper == fx::rel(4, {{0, 2}, {0, 3}}));
    // with s1 out of the picture a3's guard becomes settled
    CHECK(tr.iterates[3].lower == fx::rel(4, {{0, 2}, {0, 3}}));
    CHECK(tr.iterates[3].upper == fx::rel(4, {{0, 2}, {0, 3}}));
    CHECK(tr.iterates[4] == tr.iterates[3]);
    CHECK(tr.steps == 4);
  }

  SUBCASE("self-fulfilling possibility stays undecided") {
    FixpointTrace tr = lfp_constructive(fx::may_system());
    const MustCanStructure& y = tr.iterates.back();
    CHECK(y.lower == Relation(2));
    CHECK(y.upper == fx::rel(2, {{0, 1}}));
  }

  SUBCASE("iterates form an ascending refinement chain") {
    for (const GuardedSystem& g :
         {fx::vs_system(), fx::vsb_system(), fx::nc_system(), fx::may_system(), fx::nd_system()}) {
      FixpointTrace tr = lfp_constructive(g);
      for (std::size_t i = 0; i + 1 < tr.iterates.size(); ++i)
        CHECK(mc_leq(tr.iterates[i], tr.iterates[i + 1]));
      CHECK(tr.iterates[tr.iterates.size() - 2] == tr.iterates.back());
    }
  }
}

TEST_CASE("classification of the example systems") {
  SUBCASE("bit transmission is decided with the expected protocol") {
    fx::BitTransmission bt;
    Classification c = classify(bt.system);
    CHECK(c.status == SolutionStatus::Decided);
    REQUIRE(c.solution.has_value());
    CHECK(c.solution->trans == bt.solution);
  }
  SUBCASE("cyclic setting is unresolved") {
    Classification c = classify(fx::vs_system());
    CHECK(c.status == SolutionStatus::Unresolved);
    CHECK(!c.solution.has_value());
    CHECK(!c.diagnostic.empty());
  }
  SUBCASE("broken cycle is decided") {
    Classification c = classify(fx::vsb_system());
    CHECK(c.status == SolutionStatus::Decided);
    REQUIRE(c.solution.has_value());
    CHECK(c.solution->trans == fx::rel(4, {{0, 2}, {0, 3}}));
  }
  SUBCASE("no-closure system is unresolved despite a unique solution") {
    CHECK(classify(fx::nc_system()).status == SolutionStatus::Unresolved);
  }
  SUBCASE("self-fulfilling possibility fails the fallback") {
    // the upper bound is self-reproducing but the lower bound is not: over the
    // empty structure nothing makes p possible, so the edge disappears
    Classification c = classify(fx::may_system());
    CHECK(c.status == SolutionStatus::Unresolved);
  }
  SUBCASE("nested knowledge is recovered by the fallback") {
    Classification c = classify(fx::nd_system());
    CHECK(c.status == SolutionStatus::FallbackSolved);
    REQUIRE(c.solution.has_value());
    CHECK(c.solution->trans == fx::rel(2, {{0, 1}}));
  }
}

TEST_CASE("iteration semantics from the full relation") {
  SUBCASE("cyclic system oscillates and stops non-monotonically") {
    IterationResult r = iteration_semantics(fx::vs_system());
    REQUIRE(r.iterates.size() >= 3);
    CHECK(r.iterates[1] == Relation(4));
    CHECK(r.iterates[2] == fx::rel(4, {{0, 1}, {0, 2}}));
    CHECK(r.eta == 1);
    CHECK(r.alpha == 1);
    CHECK(r.status == IterationStatus::NonMonotoneStop);
    CHECK(r.semantics.trans == Relation(4));
  }
  SUBCASE("broken cycle converges") {
    IterationResult r = iteration_semantics(fx::vsb_system());
    CHECK(r.eta == 2);
    CHECK(r.alpha == 2);
    CHECK(r.status == IterationStatus::FixedPoint);
    CHECK(r.semantics.trans == fx::rel(4, {{0, 2}, {0, 3}}));
  }
  SUBCASE("self-fulfilling possibility converges under iteration") {
    // the full start relation already makes p reachable, so the possibility
    // sustains itself even though the constructive reading rejects it
    IterationResult r = iteration_semantics(fx::may_system());
    CHECK(r.status == IterationStatus::FixedPoint);
    CHECK(r.semantics.trans == fx::rel(2, {{0, 1}}));
  }
}

TEST_CASE("exhaustive solution enumeration") {
  auto trans_of = [](const std::vector<TransitionStructure>& v) {
    std::vector<Relation> r;
    for (const auto& m : v) r.push_back(m.trans);
    return r;
  };

  SUBCASE("cyclic system has the two one-sided solutions") {
    auto sols = trans_of(enumerate_solutions(fx::vs_system()));
    REQUIRE(sols.size() == 2);
    CHECK(std::count(sols.begin(), sols.end(), fx::rel(4, {{0, 1}})) == 1);
    CHECK(std::count(sols.begin(), sols.end(), fx::rel(4, {{0, 2}})) == 1);
  }
  SUBCASE("no-closure system has exactly one solution") {
    auto sols = trans_of(enumerate_solutions(fx::nc_system()));
    REQUIRE(sols.size() == 1);
    CHECK(sols[0] == fx::rel(4, {{0, 1}}));
  }
  SUBCASE("broken cycle has exactly one solution") {
    auto sols = trans_of(enumerate_solutions(fx::vsb_system()));
    REQUIRE(sols.size() == 1);
    CHECK(sols[0] == fx::rel(4, {{0, 2}, {0, 3}}));
  }
  SUBCASE("self-fulfilling possibility has the empty and the full answer") {
    auto sols = trans_of(enumerate_solutions(fx::may_system()));
    REQUIRE(sols.size() == 2);
    CHECK(std::count(sols.begin(), sols.end(), Relation(2)) == 1);
    CHECK(std::count(sols.begin(), sols.end(), fx::rel(2, {{0, 1}})) == 1);
  }
  SUBCASE("bit transmission has a unique solution") {
    fx::BitTransmission bt;
    auto sols = trans_of(enumerate_solutions(bt.system));
    REQUIRE(sols.size() == 1);
    CHECK(sols[0] == bt.solution);
  }
  SUBCASE("refuses oversized candidate unions") {
    fx::BitTransmission bt;
    CHECK_THROWS_AS(enumerate_solutions(bt.system, 4), const error&);
  }
}

TEST_CASE("liberal reinterpretation") {
  SUBCASE("requires a fixed point of the round operator") {
    GuardedSystem g = fx::vs_system();
    MustCanStructure not_fixed{g.basis, Relation(4), Relation(4, true)};
    CHECK_THROWS_AS(liberal_reinterpretation(g, not_fixed), const error&);
  }
  SUBCASE("does not rescue the self-fulfilling possibility") {
    GuardedSystem g = fx::may_system();
    MustCanStructure y = lfp_constructive(g).iterates.back();
    CHECK(liberal_reinterpretation(g, y).trans == Relation(2));
  }
  SUBCASE("agrees with the solution on decided systems") {
    fx::BitTransmission bt;
    MustCanStructure y = lfp_constructive(bt.system).iterates.back();
    REQUIRE(y.decided());
    CHECK(liberal_reinterpretation(bt.system, y).trans == bt.solution);
  }
}

TEST_CASE("structural properties of the bit transmission solution") {
  fx::BitTransmission bt;
  TransitionStructure m{bt.basis, bt.solution};

  std::vector<FormulaPtr> ks;
  for (const auto& act : bt.system.actions)
    for (const auto& k : know_subformulas(act.guard)) ks.push_back(k);
  CHECK(structure_provides_witnesses(m, ks));

  // R's accessibility links the depth-1 state 1 with the depth-2 state 3
  CHECK(!structure_is_synchronous(m));

  SystemAnalysis a = system_epistemic_analysis(bt.system);
  CHECK(a.provides_witnesses);
  CHECK(!a.synchronous);

  SystemAnalysis nd = system_epistemic_analysis(fx::nd_system());
  CHECK(nd.provides_witnesses);
}

TEST_CASE("union of candidate actions") {
  fx::BitTransmission bt;
  Relation u = bt.system.union_of_actions();
  CHECK(u.edge_count() == 16);
  for (const auto& act : bt.system.actions) CHECK(act.rel.subset_of(u));
}
