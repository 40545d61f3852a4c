#pragma once

// Property-suite runners shared by the unit tests and the acceptance gate.
// Each runner scans `count` seeded random structures and returns a list of
// violation descriptions; an empty list means the property held everywhere.
// Violation collection stops after a handful per suite to keep reports short.

#include "oracles.hpp"

#include <knowmc/reliability.hpp>

#include <sstream>

namespace suites {

using namespace knowmc;

constexpr size_t kMaxViolations = 5;

inline RandomStructureParams draw_params(oracle::Gen& g, bool complete, bool respect_neg,
                                         bool deterministic) {
  RandomStructureParams p;
  p.n_states = 1 + static_cast<int>(g.below(6));
  p.n_agents = 1 + static_cast<int>(g.below(2));
  p.n_tokens = 1 + static_cast<int>(g.below(4));
  p.n_props = 1 + static_cast<int>(g.below(3));
  p.force_complete = complete;
  p.force_respect_negation = respect_neg;
  p.deterministic = deterministic;
  return p;
}

inline std::string describe(uint64_t seed, const std::string& what) {
  std::ostringstream os;
  os << "seed " << seed << ": " << what;
  return os.str();
}

// Token-blind algorithms: truth is point-independent and matches the
// two-valued reference evaluator on Pr-free formulas.
inline std::vector<std::string> run_prop1(int count, uint64_t seed0 = 0x9a100) {
  std::vector<std::string> bad;
  for (int i = 0; i < count && bad.size() < kMaxViolations; ++i) {
    uint64_t seed = seed0 + static_cast<uint64_t>(i);
    oracle::Gen g(seed);
    ProbabilisticStructure s = random_structure(seed, draw_params(g, g.flip(), g.flip(), true));
    Evaluator ev(s);
    for (int k = 0; k < 3; ++k) {
      Formula f = oracle::gen_prfree(g, s.propositions, static_cast<int>(s.n_agents()), 3);
      for (const auto& st : s.states) {
        bool expected = oracle::static_truth(s, st, f, 0);
        for (size_t v = 0; v < s.derand.points.size(); ++v)
          if (ev.holds(st, v, f) != expected) {
            bad.push_back(describe(seed, "holds(" + st.id + ", " + std::to_string(v) + ", " +
                                             print_formula(f) + ") disagrees with the static " +
                                             "evaluator"));
            break;
          }
      }
    }
  }
  return bad;
}

// Objective formulas: point-independent, algorithm-independent, and equal to
// the two-valued reference evaluator.
inline std::vector<std::string> run_prop2(int count, uint64_t seed0 = 0x9a200) {
  std::vector<std::string> bad;
  for (int i = 0; i < count && bad.size() < kMaxViolations; ++i) {
    uint64_t seed = seed0 + static_cast<uint64_t>(i);
    oracle::Gen g(seed);
    ProbabilisticStructure s =
        random_structure(seed, draw_params(g, g.flip(), g.flip(), g.flip()));
    ProbabilisticStructure blinded = s;
    blinded.algorithms.assign(s.n_agents(), make_table_algorithm({}, Answer::Unknown));
    Evaluator ev(s);
    Evaluator ev2(blinded);
    for (int k = 0; k < 3; ++k) {
      Formula f = oracle::gen_objective(g, s.propositions, static_cast<int>(s.n_agents()), 3);
      for (const auto& st : s.states) {
        bool expected = oracle::static_truth(s, st, f);
        for (size_t v = 0; v < s.derand.points.size(); ++v) {
          if (ev.holds(st, v, f) != expected) {
            bad.push_back(describe(seed, "objective " + print_formula(f) +
                                             " disagrees with the static evaluator at " +
                                             st.id));
            break;
          }
          if (ev2.holds(st, v, f) != expected) {
            bad.push_back(describe(seed, "objective " + print_formula(f) +
                                             " changed when the algorithms were replaced"));
            break;
          }
        }
      }
    }
  }
  return bad;
}

// Every realized observation gets positive mass from some measure of the
// question's evidence space (so weights are well defined at realized points).
inline std::vector<std::string> run_prop5(int count, uint64_t seed0 = 0x9a500) {
  std::vector<std::string> bad;
  for (int i = 0; i < count && bad.size() < kMaxViolations; ++i) {
    uint64_t seed = seed0 + static_cast<uint64_t>(i);
    oracle::Gen g(seed);
    ProbabilisticStructure s =
        random_structure(seed, draw_params(g, g.flip(), g.flip(), g.flip()));
    Evaluator ev(s);
    std::vector<Formula> questions;
    for (const auto& p : s.propositions) questions.push_back(f_prop(p));
    questions.push_back(oracle::gen_objective(g, s.propositions,
                                              static_cast<int>(s.n_agents()), 2));
    for (size_t a = 1; a <= s.n_agents() && bad.size() < kMaxViolations; ++a)
      for (const auto& f : questions)
        for (const auto& st : s.states)
          for (const auto& pt : s.derand.points) {
            Answer ob = run_algorithm(s, static_cast<int>(a), f, st, pt);
            auto sp = ev.evidence_space(static_cast<int>(a), f,
                                        st.locals[s.agent_index(static_cast<int>(a))]);
            bool positive = false;
            for (const auto& h : sp->hypotheses())
              for (const auto& m : h.measures) positive = positive || m.dist.of(ob) > 0;
            if (!positive) {
              bad.push_back(describe(
                  seed, "observation " + answer_text(ob) + " realized at " + st.id +
                            " has zero mass in every measure for " + print_formula(f)));
              break;
            }
          }
  }
  return bad;
}

// Lower evidence weight 1 certifies the hypothesis.
inline std::vector<std::string> run_prop6(int count, uint64_t seed0 = 0x9a600) {
  std::vector<std::string> bad;
  for (int i = 0; i < count && bad.size() < kMaxViolations; ++i) {
    uint64_t seed = seed0 + static_cast<uint64_t>(i);
    oracle::Gen g(seed);
    ProbabilisticStructure s =
        random_structure(seed, draw_params(g, g.flip(), g.flip(), g.flip()));
    Evaluator ev(s);
    for (size_t a = 1; a <= s.n_agents(); ++a)
      for (int k = 0; k < 2; ++k) {
        Formula f = oracle::gen_objective(g, s.propositions, static_cast<int>(s.n_agents()), 2);
        Formula claim = f_implies(
            f_ev(EvBound::Lower, static_cast<int>(a), f, CmpOp::Eq, Rat(1)), f);
        ValidityResult r = ev.valid_in(claim);
        if (!r.valid) {
          bad.push_back(describe(seed, "EvLo = 1 did not certify " + print_formula(f) +
                                           " at state " + r.witness->state_id));
        }
      }
  }
  return bad;
}

// Evidence bounds from the tight reliability pair (complete algorithms).
inline std::vector<std::string> run_prop7(int count, uint64_t seed0 = 0x9a700) {
  std::vector<std::string> bad;
  for (int i = 0; i < count && bad.size() < kMaxViolations; ++i) {
    uint64_t seed = seed0 + static_cast<uint64_t>(i);
    oracle::Gen g(seed);
    ProbabilisticStructure s = random_structure(seed, draw_params(g, true, g.flip(), g.flip()));
    Evaluator ev(s);
    for (size_t a = 1; a <= s.n_agents(); ++a)
      for (const auto& p : s.propositions) {
        EvidenceAudit audit = audit_evidence_bounds(ev, static_cast<int>(a), f_prop(p));
        if (audit.skipped) {
          bad.push_back(describe(seed, "audit skipped on a forced-complete structure: " +
                                           audit.skip_reason));
          continue;
        }
        for (const auto& c : audit.clauses)
          if (c.applicable && !c.pass &&
              (c.name == "confirm-lo" || c.name == "confirm-one" || c.name == "refute-hi" ||
               c.name == "refute-zero"))
            bad.push_back(describe(seed, "clause " + c.name + " on " + p + ": " + c.detail));
      }
  }
  return bad;
}

// Tight-pair duality for complete negation-respecting algorithms.
inline std::vector<std::string> run_prop8(int count, uint64_t seed0 = 0x9a800) {
  std::vector<std::string> bad;
  for (int i = 0; i < count && bad.size() < kMaxViolations; ++i) {
    uint64_t seed = seed0 + static_cast<uint64_t>(i);
    oracle::Gen g(seed);
    ProbabilisticStructure s = random_structure(seed, draw_params(g, true, true, g.flip()));
    Evaluator ev(s);
    for (size_t a = 1; a <= s.n_agents(); ++a)
      for (const auto& p : s.propositions) {
        DualityAudit d = audit_duality(ev, static_cast<int>(a), f_prop(p));
        if (!d.match)
          bad.push_back(describe(
              seed, "dual of the tight pair for " + p + " is (" + format_rat(d.dual.first) +
                        ", " + format_rat(d.dual.second) + ") but direct recomputation gave (" +
                        format_rat(d.direct.alpha_star) + ", " +
                        format_rat(d.direct.beta_star) + ")"));
      }
  }
  return bad;
}

// Mirrored evidence bounds on the negated question.
inline std::vector<std::string> run_prop9(int count, uint64_t seed0 = 0x9a900) {
  std::vector<std::string> bad;
  for (int i = 0; i < count && bad.size() < kMaxViolations; ++i) {
    uint64_t seed = seed0 + static_cast<uint64_t>(i);
    oracle::Gen g(seed);
    ProbabilisticStructure s = random_structure(seed, draw_params(g, true, true, g.flip()));
    Evaluator ev(s);
    for (size_t a = 1; a <= s.n_agents(); ++a)
      for (const auto& p : s.propositions) {
        EvidenceAudit audit = audit_evidence_bounds(ev, static_cast<int>(a), f_prop(p));
        if (audit.skipped) {
          bad.push_back(describe(seed, "audit skipped: " + audit.skip_reason));
          continue;
        }
        for (const auto& c : audit.clauses) {
          if (c.name != "confirm-neg-hi" && c.name != "refute-neg-lo" &&
              c.name != "refute-neg-hi")
            continue;
          if (!c.applicable)
            bad.push_back(describe(seed, "clause " + c.name +
                                             " inapplicable on a negation-respecting " +
                                             "structure: " + c.detail));
          else if (!c.pass)
            bad.push_back(describe(seed, "clause " + c.name + " on " + p + ": " + c.detail));
        }
      }
  }
  return bad;
}

// X f is equivalent to !X !f for complete negation-respecting algorithms.
inline std::vector<std::string> run_flip(int count, uint64_t seed0 = 0x9af00) {
  std::vector<std::string> bad;
  for (int i = 0; i < count && bad.size() < kMaxViolations; ++i) {
    uint64_t seed = seed0 + static_cast<uint64_t>(i);
    oracle::Gen g(seed);
    ProbabilisticStructure s = random_structure(seed, draw_params(g, true, true, g.flip()));
    Evaluator ev(s);
    for (size_t a = 1; a <= s.n_agents(); ++a)
      for (const auto& p : s.propositions) {
        Formula xf = f_xknows(static_cast<int>(a), f_prop(p));
        Formula xnf = f_xknows(static_cast<int>(a), f_not(f_prop(p)));
        ValidityResult r = ev.valid_in(f_iff(xf, f_not(xnf)));
        if (!r.valid)
          bad.push_back(describe(seed, "X" + std::to_string(a) + " " + p +
                                           " <=> !X !" + p + " fails at " +
                                           r.witness->state_id));
      }
  }
  return bad;
}

// Intruder check against the saturation oracle, plus soundness inside the
// built structures (X has => has at every point).
inline std::vector<std::string> run_dy_equivalence(int count, uint64_t seed0 = 0x9ad00) {
  std::vector<std::string> bad;
  for (int i = 0; i < count && bad.size() < kMaxViolations; ++i) {
    uint64_t seed = seed0 + static_cast<uint64_t>(i);
    oracle::Gen g(seed);
    oracle::SecSetup setup = oracle::gen_security(g, false, false);
    AdversaryLocal local{setup.initkeys, setup.received};
    std::vector<MessageTerm> closure_input = setup.received;
    for (const auto& k : setup.initkeys) closure_input.push_back(m_key(k));
    std::vector<MessageTerm> goals = oracle::goal_menu(g, setup);
    for (const auto& goal : goals) {
      bool impl = dy_check(goal, local, setup.keys) == Answer::Yes;
      bool ref = oracle::naive_derives(closure_input, goal, setup.keys);
      if (impl != ref) {
        bad.push_back(describe(seed, "dy_check(" + print_message(goal) + ") = " +
                                         (impl ? "Yes" : "?") + " but the saturation oracle " +
                                         (ref ? "derives" : "does not derive") + " it"));
      }
    }
    int r = static_cast<int>(g.below(3));  // 0 = plain intruder
    ProbabilisticStructure s =
        guess_structure(setup.keys, setup.received, setup.initkeys, r);
    Evaluator ev(s);
    for (const auto& goal : goals) {
      Formula xhas = f_xknows(1, f_has(1, goal));
      Formula has = f_has(1, goal);
      for (size_t v = 0; v < s.derand.points.size(); ++v)
        if (ev.holds(s.states[0], v, xhas) && !ev.holds(s.states[0], v, has)) {
          bad.push_back(describe(seed, "unsound: X has(" + print_message(goal) +
                                           ") at point " + std::to_string(v) +
                                           " without possession"));
          break;
        }
    }
  }
  return bad;
}

// Guessing success mass stays strictly under the exponential bound whenever
// fewer than half the keys occur in the intercepts.
inline std::vector<std::string> run_prop4(int count, uint64_t seed0 = 0x9a400) {
  std::vector<std::string> bad;
  for (int i = 0; i < count && bad.size() < kMaxViolations; ++i) {
    uint64_t seed = seed0 + static_cast<uint64_t>(i);
    oracle::Gen g(seed);
    // At most 2 distinct keys in messages over a 6..8 key space keeps the
    // used fraction under 1/2; at least one used key keeps the bound positive.
    oracle::SecSetup setup = oracle::gen_security(g, false, true, 2);
    if (setup.keys.size() < 6) {
      size_t target = 6 + g.below(3);
      std::vector<std::pair<std::string, std::string>> decls;
      for (const auto& name : setup.keys.names())
        if (setup.keys.index_of(setup.keys.inverse(name)) >= setup.keys.index_of(name))
          decls.emplace_back(name, setup.keys.inverse(name));
      for (size_t extra = setup.keys.size(); extra < target; ++extra)
        decls.emplace_back("x" + std::to_string(extra), "x" + std::to_string(extra));
      setup.keys = KeySpace::make(decls);
    }
    size_t K = count_used_keys(setup.received, setup.keys);
    size_t n = setup.keys.size();
    if (K == 0 || 2 * K >= n) {
      bad.push_back(describe(seed, "generator broke its own promise: K=" +
                                       std::to_string(K) + ", n=" + std::to_string(n)));
      continue;
    }
    int r = 1 + static_cast<int>(g.below(2));
    ProbabilisticStructure s =
        guess_structure(setup.keys, setup.received, setup.initkeys, r);
    Evaluator ev(s);
    GuessBound gb = prop4_bound(r, K, n);
    std::vector<MessageTerm> goals = oracle::goal_menu(g, setup);
    for (const auto& goal : goals) {
      Formula xhas = f_xknows(1, f_has(1, goal));
      Formula guard = f_not(f_knows(1, xhas));
      if (!ev.holds(s.states[0], 0, guard)) continue;
      Rat mass = ev.probability(s.states[0], xhas);
      if (!(to_double(mass) < gb.bound - 1e-9))
        bad.push_back(describe(seed, "success mass " + format_rat(mass) + " for " +
                                         print_message(goal) + " not strictly below bound " +
                                         format_double(gb.bound, 5) + " (r=" +
                                         std::to_string(r) + ", K=" + std::to_string(K) +
                                         ", n=" + std::to_string(n) + ")"));
    }
  }
  return bad;
}

}  // namespace suites
