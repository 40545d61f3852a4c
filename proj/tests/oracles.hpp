#pragma once

// Independent reference implementations the tests check the engine against.
// Each oracle recomputes its result from the definitions by a different route
// than the library takes: fixpoint re-scans instead of worklists, explicit
// double loops instead of odometers, plain recursion instead of caches.

#include <knowmc/dolevyao.hpp>
#include <knowmc/evidence.hpp>
#include <knowmc/scenarios.hpp>
#include <knowmc/semantics.hpp>

#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using namespace knowmc;

// ---------------------------------------------------------------------------
// Two-valued evaluation with no derandomizer machinery: the valuation and the
// received messages decide atoms, K recurses over the indistinguishable
// states, X asks the algorithm with the token at `point`. Pr-free input only.
inline bool static_truth(const ProbabilisticStructure& s, const State& at, const Formula& f,
                         size_t point = 0) {
  switch (f.kind()) {
    case Formula::Kind::Prop:
      return at.valuation.at(f.prop());
    case Formula::Kind::HasMsg: {
      size_t idx = s.agent_index(f.agent());
      MessageTerm goal = normalize_message(f.msg(), s.keys);
      for (const auto& m : at.received[idx])
        if (msg_contains(goal, m)) return true;
      if (const auto* ik = s.algorithms[idx]->initial_keys())
        for (const auto& k : *ik)
          if (goal == m_key(k)) return true;
      return false;
    }
    case Formula::Kind::Not:
      return !static_truth(s, at, f.child(), point);
    case Formula::Kind::And:
      return static_truth(s, at, f.left(), point) &&
             static_truth(s, at, f.right(), point);
    case Formula::Kind::Knows:
      for (const State* st : indistinguishable(s, f.agent(), at))
        if (!static_truth(s, *st, f.child(), point)) return false;
      return true;
    case Formula::Kind::AlgKnows:
      return run_algorithm(s, f.agent(), f.child(), at, s.derand.points[point]) ==
             Answer::Yes;
    default:
      throw std::logic_error("static_truth handles Pr-free formulas only");
  }
}

// ---------------------------------------------------------------------------
// Dolev-Yao saturation by repeated full re-scans until nothing new appears.
inline bool naive_derives(const std::vector<MessageTerm>& hyps, const MessageTerm& goal,
                          const KeySpace& keys) {
  std::set<MessageTerm> xs;
  for (const auto& m : hyps) xs.insert(normalize_message(m, keys));
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<MessageTerm> found;
    for (const auto& m : xs) {
      if (m.kind() == MessageTerm::Kind::Concat) {
        found.push_back(m.left());
        found.push_back(m.right());
      } else if (m.kind() == MessageTerm::Kind::Encrypt && keys.has(m.key()) &&
                 xs.count(m_key(keys.inverse(m.key())))) {
        found.push_back(m.body());
      }
    }
    for (const auto& m : found)
      if (xs.insert(m).second) grew = true;
  }
  return xs.count(normalize_message(goal, keys)) != 0;
}

// ---------------------------------------------------------------------------
// Generalized weights by an explicit loop over the two measure lists of a
// binary space (one factor fixed per inhabited hypothesis).
inline std::vector<Rat> brute_weight_set(const EvidenceSpace& e, Answer ob, size_t hyp) {
  const auto& m0 = e.hypothesis(0).measures;
  const auto& m1 = e.hypothesis(1).measures;
  if (e.hypothesis(hyp).measures.empty()) return {};
  std::set<Rat> vals;
  if (m0.empty() || m1.empty()) {
    for (const auto& m : e.hypothesis(hyp).measures)
      if (m.dist.of(ob) != 0) vals.insert(Rat(1));
  } else {
    for (const auto& a : m0)
      for (const auto& b : m1) {
        Rat denom = a.dist.of(ob) + b.dist.of(ob);
        if (denom == 0) continue;
        vals.insert((hyp == 0 ? a.dist.of(ob) : b.dist.of(ob)) / denom);
      }
  }
  return {vals.begin(), vals.end()};
}

// ---------------------------------------------------------------------------
// Seeded draws for generators. The modulo bias is irrelevant for test data.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(uint64_t seed) : rng(seed) {}
  size_t below(size_t n) { return n ? static_cast<size_t>(rng()) % n : 0; }
  bool flip() { return below(2) == 0; }
};

// Formula families. `objective` draws over props, not, and, K; `prfree` adds
// X; `any` adds Pr and Ev with thresholds from a small rational menu.
inline Formula gen_objective(Gen& g, const std::vector<std::string>& props, int n_agents,
                             int depth) {
  if (depth <= 0 || g.below(3) == 0) return f_prop(props[g.below(props.size())]);
  switch (g.below(3)) {
    case 0:
      return f_not(gen_objective(g, props, n_agents, depth - 1));
    case 1:
      return f_and(gen_objective(g, props, n_agents, depth - 1),
                   gen_objective(g, props, n_agents, depth - 1));
    default:
      return f_knows(1 + static_cast<int>(g.below(static_cast<size_t>(n_agents))),
                     gen_objective(g, props, n_agents, depth - 1));
  }
}

inline Formula gen_prfree(Gen& g, const std::vector<std::string>& props, int n_agents,
                          int depth) {
  if (depth <= 0 || g.below(3) == 0) return f_prop(props[g.below(props.size())]);
  switch (g.below(4)) {
    case 0:
      return f_not(gen_prfree(g, props, n_agents, depth - 1));
    case 1:
      return f_and(gen_prfree(g, props, n_agents, depth - 1),
                   gen_prfree(g, props, n_agents, depth - 1));
    case 2:
      return f_knows(1 + static_cast<int>(g.below(static_cast<size_t>(n_agents))),
                     gen_prfree(g, props, n_agents, depth - 1));
    default:
      return f_xknows(1 + static_cast<int>(g.below(static_cast<size_t>(n_agents))),
                      gen_prfree(g, props, n_agents, depth - 1));
  }
}

inline Rat gen_threshold(Gen& g) {
  static const Rat menu[] = {Rat(0), Rat(1), Rat(1, 2), Rat(1, 3), Rat(3, 4), Rat(7, 10)};
  return menu[g.below(6)];
}

inline CmpOp gen_cmp(Gen& g) {
  static const CmpOp menu[] = {CmpOp::Ge, CmpOp::Le, CmpOp::Eq, CmpOp::Lt, CmpOp::Gt};
  return menu[g.below(5)];
}

inline MessageTerm gen_message(Gen& g, const std::vector<std::string>& atoms,
                               const KeySpace& keys, int depth) {
  if (depth <= 0 || g.below(3) == 0) {
    if (keys.size() > 0 && g.below(3) == 0) return m_key(keys.names()[g.below(keys.size())]);
    return m_plain(atoms[g.below(atoms.size())]);
  }
  if (keys.size() > 0 && g.flip())
    return m_encrypt(gen_message(g, atoms, keys, depth - 1),
                     keys.names()[g.below(keys.size())]);
  return m_concat(gen_message(g, atoms, keys, depth - 1),
                  gen_message(g, atoms, keys, depth - 1));
}

inline Formula gen_any(Gen& g, const std::vector<std::string>& props, int n_agents,
                       const KeySpace& keys, int depth) {
  if (depth <= 0 || g.below(4) == 0) {
    if (g.below(4) == 0) {
      static const std::vector<std::string> atoms = {"m", "a", "b"};
      return f_has(1 + static_cast<int>(g.below(static_cast<size_t>(n_agents))),
                   gen_message(g, atoms, keys, 2));
    }
    return f_prop(props[g.below(props.size())]);
  }
  switch (g.below(6)) {
    case 0:
      return f_not(gen_any(g, props, n_agents, keys, depth - 1));
    case 1:
      return f_and(gen_any(g, props, n_agents, keys, depth - 1),
                   gen_any(g, props, n_agents, keys, depth - 1));
    case 2:
      return f_knows(1 + static_cast<int>(g.below(static_cast<size_t>(n_agents))),
                     gen_any(g, props, n_agents, keys, depth - 1));
    case 3:
      return f_xknows(1 + static_cast<int>(g.below(static_cast<size_t>(n_agents))),
                      gen_any(g, props, n_agents, keys, depth - 1));
    case 4:
      return f_prob(gen_any(g, props, n_agents, keys, depth - 1), gen_cmp(g),
                    gen_threshold(g));
    default:
      return f_ev(g.flip() ? EvBound::Lower : EvBound::Upper,
                  1 + static_cast<int>(g.below(static_cast<size_t>(n_agents))),
                  gen_objective(g, props, n_agents, depth - 1), gen_cmp(g),
                  gen_threshold(g));
  }
}

// ---------------------------------------------------------------------------
// Random intruder setups. Key names k1..k6; a pair flip turns (k_i, k_{i+1})
// into an asymmetric pair, otherwise keys are self-inverse. With
// `need_used_key`, at least one declared key occurs in the intercepts.
struct SecSetup {
  KeySpace keys;
  std::vector<MessageTerm> received;
  std::vector<std::string> initkeys;
};

inline SecSetup gen_security(Gen& g, bool symmetric_only, bool need_used_key,
                             size_t max_distinct_message_keys = 6) {
  SecSetup setup;
  size_t n_keys = 3 + g.below(4);  // 3..6
  std::vector<std::pair<std::string, std::string>> decls;
  for (size_t i = 1; i <= n_keys;) {
    std::string a = "k" + std::to_string(i);
    if (!symmetric_only && i + 1 <= n_keys && g.below(3) == 0) {
      std::string b = "k" + std::to_string(i + 1);
      decls.emplace_back(a, b);
      i += 2;
    } else {
      decls.emplace_back(a, a);
      i += 1;
    }
  }
  setup.keys = KeySpace::make(decls);
  // Messages draw from a restricted key menu so the used-key count can be
  // kept under half the space when a test requires it. The cap bounds
  // distinct usable names, so an asymmetric pair costs two slots.
  std::vector<std::pair<std::string, std::string>> menu_decls;
  size_t menu_names = 0;
  for (const auto& name : setup.keys.names()) {
    const std::string& inv = setup.keys.inverse(name);
    bool listed = false;
    for (const auto& d : menu_decls) listed = listed || d.first == name || d.second == name;
    if (listed) continue;
    size_t width = inv == name ? 1 : 2;
    if (menu_names + width > max_distinct_message_keys) continue;
    menu_decls.emplace_back(name, inv);
    menu_names += width;
  }
  KeySpace menu = KeySpace::make(menu_decls);
  static const std::vector<std::string> atoms = {"m", "a", "b"};
  size_t n_msgs = 1 + g.below(4);
  for (size_t i = 0; i < n_msgs; ++i)
    setup.received.push_back(
        normalize_message(gen_message(g, atoms, menu, 1 + static_cast<int>(g.below(4))),
                          setup.keys));
  if (need_used_key && count_used_keys(setup.received, setup.keys) == 0)
    setup.received.push_back(m_encrypt(m_plain("m"), menu.names()[g.below(menu.size())]));
  size_t n_init = g.below(3);
  for (size_t i = 0; i < n_init; ++i) {
    std::string k = setup.keys.names()[g.below(setup.keys.size())];
    bool dup = false;
    for (const auto& have : setup.initkeys) dup = dup || have == k;
    if (!dup) setup.initkeys.push_back(k);
  }
  return setup;
}

// Goal menu for a setup: submessages of the intercepts, every declared key,
// and a few fresh terms that cannot be derived.
inline std::vector<MessageTerm> goal_menu(Gen& g, const SecSetup& setup) {
  std::vector<MessageTerm> goals;
  for (const auto& m : setup.received) {
    goals.push_back(m);
    MessageTerm cur = m;
    while (true) {
      if (cur.kind() == MessageTerm::Kind::Concat) {
        cur = g.flip() ? cur.left() : cur.right();
      } else if (cur.kind() == MessageTerm::Kind::Encrypt) {
        cur = cur.body();
      } else {
        break;
      }
      goals.push_back(cur);
    }
  }
  for (const auto& name : setup.keys.names()) goals.push_back(m_key(name));
  goals.push_back(m_plain("fresh"));
  goals.push_back(m_concat(m_plain("fresh"), m_plain("m")));
  return goals;
}

}  // namespace oracle
