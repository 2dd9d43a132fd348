// kbpc - interpret knowledge-based programs, check CTLK properties, export
// models and solve standalone rule files.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kbp/ctlk.hpp"
#include "kbp/guarded.hpp"
#include "kbp/kernel.hpp"
#include "kbp/lang.hpp"
#include "kbp/rules.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw kbp::error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Timer {
  bool enabled = false;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  void lap(const std::string& phase) {
    auto t1 = std::chrono::steady_clock::now();
    if (enabled) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
      std::cout << "TIME " << phase << " " << ms << "ms\n";
    }
    t0 = t1;
  }
};

struct LoadedSpec {
  kbp::lang::Model model;
  std::string source_hash;
};

LoadedSpec load_spec(const std::string& path, std::size_t max_states) {
  std::string text = read_file(path);
  kbp::lang::Spec spec = kbp::lang::parse(text);
  auto diags = kbp::lang::typecheck(spec);
  if (!diags.empty()) {
    std::ostringstream msg;
    for (std::size_t i = 0; i < diags.size(); ++i)
      msg << (i ? "; " : "") << "line " << diags[i].loc.line << ":" << diags[i].loc.col << ": "
          << diags[i].message;
    throw kbp::lang::parse_error(diags[0].loc, msg.str());
  }
  return {kbp::lang::elaborate(spec, max_states), fnv1a_hex(text)};
}

void print_warnings(const kbp::lang::Model& m) {
  for (const auto& w : m.warnings) std::cout << "WARNING " << w << "\n";
}

void warn_deadlocks(const kbp::lang::Model& m, const kbp::TransitionStructure& t) {
  kbp::Bitset rs = kbp::reachable_states(*m.basis, t.trans);
  std::vector<std::size_t> dead;
  rs.for_each([&](std::size_t s) {
    if (!t.trans.row_any(s)) dead.push_back(s);
  });
  if (!dead.empty())
    std::cout << "WARNING " << dead.size() << " reachable deadlock state(s), first: "
              << m.state_name(dead.front()) << "\n";
}

// Check names follow declaration order, like the elaborator assigns them.
int run_checks(const kbp::lang::Model& m, const kbp::TransitionStructure& t, bool witness) {
  int failed = 0;
  for (const auto& req : m.checks) {
    kbp::Verdict v = kbp::run_check(t, m.system.actions, req);
    std::cout << "CHECK " << req.name << (v.holds ? " PASS" : " FAIL") << "\n";
    if (!v.holds) ++failed;
    if (witness && v.witness) {
      std::cout << "WITNESS " << req.name << " ";
      if (v.witness->empty())
        std::cout << "(initial state " << m.state_name(*v.witness_start) << ")";
      for (std::size_t i = 0; i < v.witness->size(); ++i)
        std::cout << (i ? "," : "") << (*v.witness)[i].action;
      std::cout << "\n";
    }
    if (witness && !v.holds && v.failing_state)
      std::cout << "FAILS-AT " << req.name << " " << m.state_name(*v.failing_state) << "\n";
  }
  return failed;
}

void model_line(const std::string& tag, std::size_t states, std::size_t mu, std::size_t nu) {
  std::cout << "MODEL " << tag << " states=" << states << " mu=" << mu << " nu=" << nu << "\n";
}

int cmd_check(const std::string& path, const std::string& mode, bool no_fallback, bool liberal,
              bool witness, std::size_t max_states, bool timing) {
  Timer tm{timing};
  LoadedSpec ls = load_spec(path, max_states);
  const kbp::lang::Model& m = ls.model;
  print_warnings(m);
  tm.lap("elaborate");

  if (mode == "iteration") {
    kbp::IterationResult res = kbp::iteration_semantics(m.system);
    std::size_t edges = res.semantics.trans.edge_count();
    std::size_t states = kbp::reachable_states(*m.basis, res.semantics.trans).count();
    model_line(res.status == kbp::IterationStatus::FixedPoint ? "iteration-fixed-point"
                                                              : "iteration-nonmonotone",
               states, edges, edges);
    std::cout << "ITERATION eta=" << res.eta << " alpha=" << res.alpha << "\n";
    tm.lap("iterate");
    warn_deadlocks(m, res.semantics);
    int failed = run_checks(m, res.semantics, witness);
    tm.lap("check");
    return failed ? 1 : 0;
  }

  kbp::Classification cls = kbp::classify(m.system);
  if (no_fallback && cls.status == kbp::SolutionStatus::FallbackSolved) {
    cls.status = kbp::SolutionStatus::Unresolved;
    cls.solution.reset();
    cls.diagnostic = "bounds differ (fallback disabled)";
  }
  tm.lap("interpret");

  std::size_t mu = cls.bounds.lower.edge_count();
  std::size_t nu = cls.bounds.upper.edge_count();
  std::size_t states = kbp::reachable_states(*m.basis, cls.bounds.upper).count();

  if (cls.status == kbp::SolutionStatus::Unresolved) {
    if (!liberal) {
      model_line("unresolved", states, mu, nu);
      std::cout << "NOTE " << cls.diagnostic << "\n";
      return 2;
    }
    kbp::TransitionStructure lib = kbp::liberal_reinterpretation(m.system, cls.bounds);
    std::size_t e = lib.trans.edge_count();
    model_line("liberal", kbp::reachable_states(*m.basis, lib.trans).count(), e, e);
    warn_deadlocks(m, lib);
    int failed = run_checks(m, lib, witness);
    tm.lap("check");
    return failed ? 1 : 0;
  }

  model_line(cls.status == kbp::SolutionStatus::Decided ? "decided" : "fallback",
             kbp::reachable_states(*m.basis, cls.solution->trans).count(), mu, nu);
  warn_deadlocks(m, *cls.solution);
  int failed = run_checks(m, *cls.solution, witness);
  tm.lap("check");
  return failed ? 1 : 0;
}

json state_array(const kbp::lang::Model& m, const kbp::Bitset& keep) {
  json states = json::array();
  keep.for_each([&](std::size_t s) {
    json props = json::array();
    for (std::size_t p = 0; p < m.basis->sig.props.size(); ++p)
      if (m.basis->prop_states[p].test(s)) props.push_back(m.basis->sig.props[p]);
    states.push_back({{"id", s}, {"props", props}});
  });
  return states;
}

json edge_array(const kbp::Relation& rel, const kbp::Bitset& keep) {
  json edges = json::array();
  for (auto [s, t] : rel.edges())
    if (keep.test(s)) edges.push_back(json::array({s, t}));
  return edges;
}

json access_object(const kbp::lang::Model& m, const kbp::Bitset& keep) {
  json acc = json::object();
  for (std::size_t a = 0; a < m.basis->sig.agents.size(); ++a) {
    json pairs = json::array();
    for (auto [s, t] : m.basis->access[a].edges())
      if (keep.test(s) && keep.test(t)) pairs.push_back(json::array({s, t}));
    acc[m.basis->sig.agents[a]] = pairs;
  }
  return acc;
}

// attribute solved-model edges to the actions that produce them
std::vector<std::tuple<std::size_t, std::size_t, std::string>> attributed_edges(
    const kbp::lang::Model& m, const kbp::TransitionStructure& t) {
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> out;
  kbp::EtsEvaluator ev(t);
  for (const auto& act : m.system.actions) {
    kbp::Bitset enabled = ev(act.guard);
    enabled.for_each([&](std::size_t s) {
      act.rel.successors(s).for_each([&](std::size_t u) {
        if (t.trans.test(s, u)) out.emplace_back(s, u, act.name);
      });
    });
  }
  return out;
}

int cmd_export(const std::string& path, const std::string& format, bool bounds, bool acc,
               const std::string& dump, std::size_t max_states) {
  LoadedSpec ls = load_spec(path, max_states);
  const kbp::lang::Model& m = ls.model;

  kbp::Classification cls = kbp::classify(m.system);
  if (!bounds && cls.status == kbp::SolutionStatus::Unresolved) {
    std::cout << "NOTE " << cls.diagnostic << "\n";
    std::cerr << "ERROR export needs a solved model; use --bounds for the fixed-point bounds\n";
    return 2;
  }

  kbp::Bitset keep = bounds ? kbp::reachable_states(*m.basis, cls.bounds.upper)
                            : kbp::reachable_states(*m.basis, cls.solution->trans);
  std::ostringstream out;

  if (format == "json") {
    json j;
    j["states"] = state_array(m, keep);
    json init = json::array();
    m.basis->initial.for_each([&](std::size_t s) { init.push_back(s); });
    j["initial"] = init;
    if (bounds) {
      j["edges_mu"] = edge_array(cls.bounds.lower, keep);
      j["edges_nu"] = edge_array(cls.bounds.upper, keep);
    } else {
      json edges = json::array();
      for (auto& [s, t, name] : attributed_edges(m, *cls.solution))
        edges.push_back({{"from", s}, {"to", t}, {"action", name}});
      j["edges"] = edges;
    }
    j["accessibility"] = access_object(m, keep);
    j["meta"] = {{"spec-hash", ls.source_hash}, {"tool-version", kToolVersion}};
    out << j.dump(2) << "\n";
  } else {  // dot
    const kbp::Relation& mu = bounds ? cls.bounds.lower : cls.solution->trans;
    const kbp::Relation& nu = bounds ? cls.bounds.upper : cls.solution->trans;
    out << "digraph model {\n";
    keep.for_each([&](std::size_t s) {
      out << "  s" << s << " [label=\"" << m.state_name(s) << "\""
          << (m.basis->initial.test(s) ? ", shape=doublecircle" : "") << "];\n";
    });
    for (auto [s, t] : nu.edges()) {
      if (!keep.test(s)) continue;
      out << "  s" << s << " -> s" << t;
      if (!mu.test(s, t)) out << " [style=dashed]";
      out << ";\n";
    }
    if (acc) {
      for (std::size_t a = 0; a < m.basis->sig.agents.size(); ++a)
        for (auto [s, t] : m.basis->access[a].edges())
          if (keep.test(s) && keep.test(t) && s < t)
            out << "  s" << s << " -> s" << t << " [style=dotted, dir=none, label=\""
                << m.basis->sig.agents[a] << "\"];\n";
    }
    out << "}\n";
  }

  if (dump.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(dump, std::ios::binary);
    if (!f) throw kbp::error("cannot write '" + dump + "'");
    f << out.str();
  }
  return 0;
}

std::string set_to_string(const kbp::RuleSystem& r, const kbp::Bitset& b) {
  std::string s = "{";
  bool first = true;
  b.for_each([&](std::size_t i) {
    if (!first) s += ",";
    s += r.universe[i];
    first = false;
  });
  return s + "}";
}

void print_derivation(const kbp::RuleSystem& r, const kbp::Derivation& d, int indent) {
  std::cout << std::string(indent * 2, ' ') << r.universe[d.element];
  if (d.rule >= 0) {
    const kbp::Rule& rule = r.rules[d.rule];
    std::cout << "  (rule " << d.rule;
    if (!rule.neg.empty()) {
      std::cout << ", not";
      for (int z : rule.neg) std::cout << " " << r.universe[z];
    }
    std::cout << ")";
  }
  std::cout << "\n";
  for (const auto& c : d.children) print_derivation(r, c, indent + 1);
}

int cmd_rules(const std::string& path, bool enumerate, const std::string& explain_target) {
  kbp::RuleSystem r = kbp::parse_rules(read_file(path));
  kbp::RulesTrace trace = kbp::lfp_mc(r);
  const kbp::MustCanPair& p = trace.iterates.back();
  std::cout << "BOUNDS must=" << set_to_string(r, p.must) << " can=" << set_to_string(r, p.can)
            << (p.decided() ? " (decided)" : "") << "\n";

  std::vector<kbp::Bitset> sols;
  if (enumerate || !explain_target.empty()) sols = kbp::enumerate_closure_fixpoints(r);

  if (enumerate) {
    if (sols.empty()) {
      std::cout << "no coherent solution\n";
      return 2;
    }
    for (const auto& b : sols) std::cout << "SOLUTION " << set_to_string(r, b) << "\n";
  }

  if (!explain_target.empty()) {
    int y = r.element_index(explain_target);
    if (y < 0) throw kbp::error("'" + explain_target + "' is not in the universe");
    bool shown = false;
    for (const auto& b : sols) {
      if (!b.test(static_cast<std::size_t>(y))) continue;
      if (auto d = kbp::explain(r, b, y)) {
        std::cout << "EXPLAIN " << explain_target << " in " << set_to_string(r, b) << "\n";
        print_derivation(r, *d, 1);
        shown = true;
        break;
      }
    }
    if (!shown) std::cout << "no derivation of " << explain_target << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interpreter and model checker for knowledge-based programs"};
  app.require_subcommand(1);

  std::string path, mode = "constructive", format = "json", dump, explain_target;
  bool no_fallback = false, liberal = false, witness = false, bounds = false, acc = false;
  bool timing = false, enumerate = false;
  std::size_t jobs = 1, max_states = 1u << 20, max_edges = 20;

  CLI::App* check = app.add_subcommand("check", "interpret a specification and run its checks");
  check->add_option("path", path)->required();
  check->add_option("--mode", mode)->check(CLI::IsMember({"constructive", "iteration"}));
  check->add_flag("--no-fallback", no_fallback);
  check->add_flag("--liberal", liberal);
  check->add_flag("--witness", witness);
  check->add_option("--jobs", jobs);
  check->add_option("--max-states", max_states);
  check->add_option("--max-edges", max_edges);
  check->add_flag("--timing", timing);

  CLI::App* exp = app.add_subcommand("export", "export the interpreted model");
  exp->add_option("path", path)->required();
  exp->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}));
  exp->add_flag("--bounds", bounds);
  exp->add_flag("--acc", acc);
  exp->add_option("--dump", dump);
  exp->add_option("--jobs", jobs);
  exp->add_option("--max-states", max_states);

  CLI::App* rules = app.add_subcommand("rules", "solve a standalone rule file");
  rules->add_option("path", path)->required();
  rules->add_flag("--enumerate", enumerate);
  rules->add_option("--explain", explain_target);
  rules->add_option("--max-edges", max_edges);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(path, mode, no_fallback, liberal, witness, max_states, timing);
    if (exp->parsed()) return cmd_export(path, format, bounds, acc, dump, max_states);
    return cmd_rules(path, enumerate, explain_target);
  } catch (const std::exception& e) {
    std::cerr << "ERROR " << e.what() << "\n";
    return 3;
  }
}
