#pragma once

// Hand-built example systems used across the test suites.

#include <initializer_list>
#include <memory>
#include <vector>

#include "kbp/guarded.hpp"
#include "kbp/kernel.hpp"

namespace fx {

using namespace kbp;

// basis from explicit labels (one vector of prop ids per state) and explicit
// per-agent partitions into equivalence classes
inline BasisPtr make_basis(std::vector<std::string> props,
                           std::vector<std::string> agents,
                           std::vector<std::vector<int>> labels,
                           std::vector<std::vector<std::vector<int>>> partitions,
                           std::vector<int> initial) {
  auto b = std::make_shared<StateBasis>();
  std::size_t n = labels.size();
  b->num_states = n;
  b->sig.props = std::move(props);
  b->sig.agents = std::move(agents);
  for (std::size_t p = 0; p < b->sig.props.size(); ++p) {
    Bitset set(n);
    for (std::size_t s = 0; s < n; ++s)
      for (int q : labels[s])
        if (static_cast<std::size_t>(q) == p) set.set(s);
    b->prop_states.push_back(std::move(set));
  }
  for (const auto& classes : partitions) {
    Relation e(n);
    for (const auto& cls : classes)
      for (int s : cls)
        for (int t : cls) e.set(s, t);
    b->access.push_back(std::move(e));
  }
  b->initial = Bitset(n);
  for (int s : initial) b->initial.set(s);
  return b;
}

inline Relation rel(std::size_t n, std::initializer_list<Edge> edges) {
  Relation r(n);
  for (auto [s, t] : edges) r.set(s, t);
  return r;
}

inline FormulaPtr prop(const BasisPtr& b, const std::string& name) {
  int p = b->sig.prop_index(name);
  return b->prop_atom(p);
}

// --- bit transmission, abstract 8-state version ----------------------------
// state = sbit*4 + ack*2 + rcv; S observes (sbit, ack), R observes rcv and,
// once rcv holds, the transmitted bit
struct BitTransmission {
  BasisPtr basis;
  GuardedSystem system;
  FormulaPtr kr;  // "R knows the bit"
  Relation solution;  // expected unique solution

  BitTransmission() {
    std::vector<std::vector<int>> labels(8);
    for (int s = 0; s < 8; ++s) {
      if (s & 4) labels[s].push_back(0);  // sbit
      if (s & 2) labels[s].push_back(1);  // ack
      if (s & 1) labels[s].push_back(2);  // rcv
    }
    basis = make_basis(
        {"sbit", "ack", "rcv"}, {"S", "R"}, labels,
        {// S: agreement on sbit and ack
         {{0, 1}, {2, 3}, {4, 5}, {6, 7}},
         // R: nothing received is one blur; received states split by the bit
         {{0, 2, 4, 6}, {1, 3}, {5, 7}}},
        {0, 4});
    FormulaPtr sbit = prop(basis, "sbit");
    kr = f_or(know(1, f_not(sbit)), know(1, sbit));
    FormulaPtr g_send = f_not(know(0, kr));
    FormulaPtr g_ack = f_and(kr, f_not(know(1, know(0, kr))));
    Relation id(8);
    for (int s = 0; s < 8; ++s) id.set(s, s);
    system.basis = basis;
    system.actions.push_back({"send_bit_ok", g_send, rel(8, {{0, 1}, {2, 3}, {4, 5}, {6, 7}})});
    system.actions.push_back({"send_bit_failed", g_send, id});
    system.actions.push_back({"send_ack_ok", g_ack, rel(8, {{0, 2}, {1, 3}, {4, 6}, {5, 7}})});
    system.actions.push_back({"send_ack_failed", g_ack, id});
    solution = rel(8, {{0, 0}, {1, 1}, {3, 3}, {4, 4}, {5, 5}, {7, 7},
                       {0, 1}, {1, 3}, {4, 5}, {5, 7}});
  }
};

// --- cyclic variable setting ------------------------------------------------
// s0 = {}, s1 = {q2}, s2 = {q1}, s3 = {q1,q2}; the agent observes nothing
inline BasisPtr vs_basis() {
  return make_basis({"q1", "q2"}, {"a"}, {{}, {1}, {0}, {0, 1}},
                    {{{0, 1, 2, 3}}}, {0});
}

inline GuardedSystem vs_system() {
  BasisPtr b = vs_basis();
  FormulaPtr q1 = prop(b, "q1"), q2 = prop(b, "q2");
  GuardedSystem g;
  g.basis = b;
  g.actions.push_back({"a1", know(0, f_not(f_and(q1, f_not(q2)))), rel(4, {{0, 1}})});
  g.actions.push_back({"a2", know(0, f_not(f_and(f_not(q1), q2))), rel(4, {{0, 2}})});
  return g;
}

// broken cycle: an unconditional action decides the contest
inline GuardedSystem vsb_system() {
  BasisPtr b = vs_basis();
  FormulaPtr q1 = prop(b, "q1"), q2 = prop(b, "q2");
  GuardedSystem g;
  g.basis = b;
  g.actions.push_back({"a1", know(0, f_not(f_and(q1, f_not(q2)))), rel(4, {{0, 1}})});
  g.actions.push_back({"a2", truth(), rel(4, {{0, 2}})});
  g.actions.push_back({"a3", know(0, f_not(f_and(f_not(q1), q2))), rel(4, {{0, 3}})});
  return g;
}

// no closure: vs plus a third action killed by either solution
inline GuardedSystem nc_system() {
  GuardedSystem g = vs_system();
  FormulaPtr q2 = prop(g.basis, "q2");
  g.actions.push_back({"a3", know(0, f_not(q2)), rel(4, {{0, 3}})});
  return g;
}

// self-fulfilling possibility: M_a p enables the step that makes p reachable
inline GuardedSystem may_system() {
  BasisPtr b = make_basis({"p"}, {"a"}, {{}, {0}}, {{{0, 1}}}, {0});
  GuardedSystem g;
  g.basis = b;
  g.actions.push_back({"go", maybe(0, prop(b, "p")), rel(2, {{0, 1}})});
  return g;
}

// nested knowledge needing the fallback: u0 = {p}, u1 = {p,q}
inline GuardedSystem nd_system() {
  BasisPtr b = make_basis({"p", "q"}, {"a", "b"}, {{0}, {0, 1}},
                          {{{0}, {1}}, {{0, 1}}}, {0});
  GuardedSystem g;
  g.basis = b;
  g.actions.push_back({"step", know(1, maybe(0, prop(b, "p"))), rel(2, {{0, 1}})});
  return g;
}

}  // namespace fx
