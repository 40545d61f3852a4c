#include <knowmc/cli.hpp>

#include <knowmc/dolevyao.hpp>
#include <knowmc/evidence.hpp>
#include <knowmc/reliability.hpp>
#include <knowmc/semantics.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace knowmc {

namespace {

using nlohmann::json;

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

json dist_json(const AnswerDistribution& d) {
  return json{{"Yes", format_rat(d.yes)}, {"No", format_rat(d.no)}, {"?", format_rat(d.unknown)}};
}

json rats_json(const std::vector<Rat>& rs) {
  json a = json::array();
  for (const auto& r : rs) a.push_back(format_rat(r));
  return a;
}

KeySpace keyspace_from_decls(const std::vector<std::string>& decls) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& d : decls) {
    auto c = d.find(':');
    if (c == std::string::npos)
      pairs.emplace_back(d, d);
    else
      pairs.emplace_back(d.substr(0, c), d.substr(c + 1));
  }
  return KeySpace::make(pairs);
}

constexpr Answer kObservations[] = {Answer::Yes, Answer::No, Answer::Unknown};

}  // namespace

// ---------------------------------------------------------------------------

Outcome cmd_check(const CheckOptions& o) {
  if (o.point && !o.state) throw EvalError("--point needs --state");
  ProbabilisticStructure s = load_structure_file(o.model_path);
  Formula f = parse_formula(o.formula, &s.keys);
  Evaluator ev(s);
  Outcome out;
  out.data["command"] = "check";
  out.data["formula"] = print_formula(f);
  std::ostringstream t;
  t << "formula: " << print_formula(f) << "\n";
  if (o.state && o.point) {
    const State& st = s.state(*o.state);
    if (*o.point >= s.derand.points.size())
      throw EvalError("point index " + std::to_string(*o.point) + " out of range (" +
                      std::to_string(s.derand.points.size()) + " points)");
    bool h = ev.holds(st, *o.point, f);
    out.data["scope"] = "point";
    out.data["state"] = *o.state;
    out.data["point"] = *o.point;
    out.data["holds"] = h;
    t << "at state " << *o.state << ", point " << *o.point << ": " << (h ? "holds" : "fails")
      << "\n";
    out.exit_code = h ? 0 : 1;
  } else if (o.state) {
    const State& st = s.state(*o.state);
    bool all = true;
    json points = json::array();
    for (size_t v = 0; v < s.derand.points.size(); ++v) {
      bool h = ev.holds(st, v, f);
      points.push_back(json{{"point", v},
                            {"tokens", s.derand.points[v].tokens},
                            {"prob", format_rat(s.derand.points[v].prob)},
                            {"holds", h}});
      t << "  point " << v << " [" << join(s.derand.points[v].tokens, ",") << "] (prob "
        << format_rat(s.derand.points[v].prob) << "): " << (h ? "holds" : "fails") << "\n";
      all = all && h;
    }
    Rat mass = ev.probability(st, f);
    out.data["scope"] = "state";
    out.data["state"] = *o.state;
    out.data["points"] = points;
    out.data["mass"] = format_rat(mass);
    out.data["holds"] = all;
    t << "truth mass at " << *o.state << ": " << format_rat(mass) << "\n";
    out.exit_code = all ? 0 : 1;
  } else {
    ValidityResult r = ev.valid_in(f);
    out.data["scope"] = "structure";
    out.data["valid"] = r.valid;
    if (r.valid) {
      out.data["witness"] = nullptr;
      t << "valid: holds at every state and derandomizer point\n";
    } else {
      out.data["witness"] =
          json{{"state", r.witness->state_id}, {"point", r.witness->point_index}};
      t << "falsified at state " << r.witness->state_id << ", point " << r.witness->point_index
        << "\n";
    }
    out.exit_code = r.valid ? 0 : 1;
  }
  out.text = t.str();
  return out;
}

// ---------------------------------------------------------------------------

Outcome cmd_evidence(const EvidenceOptions& o) {
  ProbabilisticStructure s = load_structure_file(o.model_path);
  Formula f = parse_formula(o.formula, &s.keys);
  Evaluator ev(s);
  size_t idx = s.agent_index(o.agent);
  std::vector<std::string> labels;
  if (o.label) {
    labels.push_back(*o.label);
  } else {
    std::set<std::string> seen;
    for (const auto& st : s.states) seen.insert(st.locals[idx]);
    labels.assign(seen.begin(), seen.end());
  }
  Outcome out;
  out.data["command"] = "evidence";
  out.data["formula"] = print_formula(f);
  out.data["agent"] = o.agent;
  std::ostringstream t;
  t << "question: " << print_formula(f) << "\n";
  t << "agent: " << o.agent << " (" << s.agents[idx] << ")\n";
  json jlabels = json::array();
  for (const auto& label : labels) {
    auto sp = ev.evidence_space(o.agent, f, label);
    bool simple = true;
    for (const auto& h : sp->hypotheses()) simple = simple && h.measures.size() == 1;
    json jl;
    jl["label"] = label;
    jl["simple"] = simple;
    t << "label " << label << (simple ? " (simple space)" : " (generalized space)") << ":\n";
    json jh = json::array();
    for (const auto& h : sp->hypotheses()) {
      json jm = json::array();
      t << "  hypothesis " << h.name << ":\n";
      for (const auto& m : h.measures) {
        jm.push_back(json{{"states", m.source_states}, {"dist", dist_json(m.dist)}});
        t << "    states [" << join(m.source_states, " ") << "]: " << distribution_text(m.dist)
          << "\n";
      }
      if (h.measures.empty()) t << "    (no states)\n";
      jh.push_back(json{{"name", h.name}, {"measures", jm}});
    }
    jl["hypotheses"] = jh;
    json jobs = json::array();
    for (Answer ob : kObservations) {
      json jo;
      jo["observation"] = answer_text(ob);
      json per_hyp = json::array();
      t << "  observation " << answer_text(ob) << ":\n";
      for (size_t h = 0; h < sp->hypotheses().size(); ++h) {
        auto ws = weight_set(*sp, ob, h);
        json e;
        e["hypothesis"] = sp->hypothesis(h).name;
        e["weight_set"] = rats_json(ws);
        e["lower"] = format_rat(lower_weight(*sp, ob, h));
        e["upper"] = format_rat(upper_weight(*sp, ob, h));
        t << "    for " << sp->hypothesis(h).name << ": ";
        if (ws.empty()) {
          t << "no admissible weight (observation impossible), lo 0, hi 0";
        } else {
          std::vector<std::string> texts;
          for (const auto& w : ws) texts.push_back(format_rat(w));
          t << "{" << join(texts, ", ") << "}, lo " << format_rat(lower_weight(*sp, ob, h))
            << ", hi " << format_rat(upper_weight(*sp, ob, h));
        }
        if (simple && !ws.empty()) {
          Rat w = weight(*sp, ob, h);
          e["weight"] = format_rat(w);
          t << ", weight " << format_rat(w);
        }
        t << "\n";
        per_hyp.push_back(e);
      }
      jo["weights"] = per_hyp;
      jobs.push_back(jo);
    }
    jl["observations"] = jobs;
    jlabels.push_back(jl);
  }
  out.data["labels"] = jlabels;
  out.text = t.str();
  return out;
}

// ---------------------------------------------------------------------------

Outcome cmd_audit(const AuditOptions& o) {
  if (o.alpha.has_value() != o.beta.has_value())
    throw EvalError("--alpha and --beta come together");
  ProbabilisticStructure s = load_structure_file(o.model_path);
  Formula f = parse_formula(o.formula, &s.keys);
  Evaluator ev(s);
  size_t idx = s.agent_index(o.agent);
  EvidenceAudit audit = audit_evidence_bounds(ev, o.agent, f);
  const ReliabilityReport& rep = audit.report;
  Outcome out;
  out.data["command"] = "audit";
  out.data["formula"] = print_formula(f);
  out.data["agent"] = o.agent;
  out.data["alpha_star"] = format_rat(rep.alpha_star);
  out.data["beta_star"] = format_rat(rep.beta_star);
  out.data["vacuous_alpha"] = rep.vacuous_alpha;
  out.data["vacuous_beta"] = rep.vacuous_beta;
  out.data["complete"] = rep.complete;
  out.data["negation"] = negation_text(rep.negation);
  std::ostringstream t;
  t << "question: " << print_formula(f) << "\n";
  t << "agent: " << o.agent << " (" << s.agents[idx] << ")\n";
  t << "tight pair: alpha* = " << format_rat(rep.alpha_star)
    << (rep.vacuous_alpha ? " (vacuous)" : "") << ", beta* = " << format_rat(rep.beta_star)
    << (rep.vacuous_beta ? " (vacuous)" : "") << "\n";
  t << "complete: " << (rep.complete ? "yes" : "no")
    << ", respects negation: " << negation_text(rep.negation) << "\n";
  bool failed = false;
  if (o.alpha) {
    bool ok = is_reliable_at(rep, *o.alpha, *o.beta);
    out.data["reliable_at"] = json{
        {"alpha", format_rat(*o.alpha)}, {"beta", format_rat(*o.beta)}, {"reliable", ok}};
    t << "(" << format_rat(*o.alpha) << ", " << format_rat(*o.beta)
      << ")-reliable: " << (ok ? "yes" : "no") << "\n";
    failed = failed || !ok;
  }
  if (rep.complete && rep.negation != NegationRespect::No) {
    DualityAudit d = audit_duality(ev, o.agent, f);
    out.data["duality"] =
        json{{"dual", json::array({format_rat(d.dual.first), format_rat(d.dual.second)})},
             {"direct", json::array({format_rat(d.direct.alpha_star),
                                     format_rat(d.direct.beta_star)})},
             {"match", d.match}};
    t << "dual pair for " << print_formula(f_not(f)) << ": (" << format_rat(d.dual.first)
      << ", " << format_rat(d.dual.second) << "), recomputed: ("
      << format_rat(d.direct.alpha_star) << ", " << format_rat(d.direct.beta_star)
      << "), match: " << (d.match ? "yes" : "no") << "\n";
    failed = failed || !d.match;
  } else {
    out.data["duality"] = nullptr;
    t << "duality: not applicable (needs a complete, negation-respecting algorithm)\n";
  }
  if (audit.skipped) {
    out.data["bounds"] = json{{"skipped", true}, {"reason", audit.skip_reason}};
    t << "evidence bounds: skipped (" << audit.skip_reason << ")\n";
  } else {
    json jc = json::array();
    t << "evidence bounds:\n";
    for (const auto& c : audit.clauses) {
      jc.push_back(json{{"name", c.name},
                        {"applicable", c.applicable},
                        {"pass", c.pass},
                        {"detail", c.detail}});
      t << "  " << c.name << ": ";
      if (!c.applicable)
        t << "n/a (" << c.detail << ")";
      else if (c.pass)
        t << "pass";
      else
        t << "FAIL (" << c.detail << ")";
      t << "\n";
      failed = failed || (c.applicable && !c.pass);
    }
    out.data["bounds"] = json{{"skipped", false}, {"clauses", jc}};
  }
  out.exit_code = failed ? 1 : 0;
  out.text = t.str();
  return out;
}

// ---------------------------------------------------------------------------

Outcome cmd_dy(const DyOptions& o) {
  AdversaryLocal local;
  KeySpace keys;
  ProbabilisticStructure s;  // kept alive for model mode
  if (!o.model_path.empty()) {
    if (!o.state) throw EvalError("model mode needs --state");
    s = load_structure_file(o.model_path);
    keys = s.keys;
    size_t idx = s.agent_index(o.agent);
    const State& st = s.state(*o.state);
    local.received = st.received[idx];
    if (const auto* ik = s.algorithms[idx]->initial_keys()) local.initkeys = *ik;
  } else {
    keys = keyspace_from_decls(o.keys);
    for (const auto& k : o.initkeys) keys.index_of(k);  // must be declared
    local.initkeys = o.initkeys;
    for (const auto& m : o.received)
      local.received.push_back(normalize_message(parse_message(m, &keys), keys));
  }
  MessageTerm goal = normalize_message(parse_message(o.goal, &keys), keys);
  Answer plain = dy_check(goal, local, keys);
  std::vector<std::string> usable = keysof(local, keys);
  Outcome out;
  out.data["command"] = "dy";
  out.data["goal"] = print_message(goal);
  out.data["initkeys"] = local.initkeys;
  json jr = json::array();
  for (const auto& m : local.received) jr.push_back(print_message(m));
  out.data["received"] = jr;
  out.data["usable_keys"] = usable;
  out.data["derived"] = answer_text(plain);
  std::ostringstream t;
  t << "goal: " << print_message(goal) << "\n";
  t << "initial keys: [" << join(local.initkeys, " ") << "]\n";
  t << "intercepted: " << local.received.size() << " message(s)\n";
  t << "usable keys: [" << join(usable, " ") << "]\n";
  t << "derived without guessing: " << answer_text(plain) << "\n";
  out.exit_code = plain == Answer::Yes ? 0 : 1;
  if (o.guesses > 0) {
    int r = o.guesses;
    size_t n = keys.size();
    if (n == 0) throw EvalError("guessing needs a nonempty key space");
    double combos = std::pow(static_cast<double>(n), r);
    if (combos > 2e6)
      throw EvalError("guess enumeration of " + std::to_string(n) + "^" + std::to_string(r) +
                      " tuples is too large");
    size_t K = count_used_keys(local.received, keys);
    GuessBound gb = prop4_bound(r, K, n);
    std::vector<size_t> tuple(static_cast<size_t>(r), 0);
    unsigned long long total = 0, hits = 0;
    json rows = json::array();
    while (true) {
      std::vector<std::string> guessed;
      for (size_t i : tuple) guessed.push_back(keys.names()[i]);
      bool hit = dy_check(goal, local, keys, guessed) == Answer::Yes;
      ++total;
      if (hit) ++hits;
      if (o.enumerate)
        rows.push_back(json{{"guess", join(guessed, ",")}, {"derived", hit}});
      size_t d = tuple.size();
      while (d > 0) {
        if (++tuple[d - 1] < n) break;
        tuple[d - 1] = 0;
        --d;
      }
      if (d == 0) break;
    }
    Rat mass(hits, total);
    double mass_d = to_double(mass);
    bool below = gb.hypothesis_ok && mass_d < gb.bound - 1e-9;
    json jg;
    jg["r"] = r;
    jg["total_keys"] = n;
    jg["used_keys"] = K;
    jg["hypothesis_ok"] = gb.hypothesis_ok;
    jg["success_mass"] = format_rat(mass);
    jg["miss_all_used"] = format_rat(gb.exact_miss);
    jg["bound"] = format_double(gb.bound, 5);
    jg["below_bound"] = below;
    if (o.enumerate) jg["tuples"] = rows;
    out.data["guess"] = jg;
    t << "guess analysis (r = " << r << "):\n";
    t << "  key space: " << n << " keys, used in intercepts: " << K << "\n";
    t << "  hypothesis used/total < 1/2: " << (gb.hypothesis_ok ? "yes" : "no") << "\n";
    t << "  success mass: " << format_rat(mass) << " (" << format_double(mass_d, 5) << ")\n";
    t << "  miss-all-used-keys mass: " << format_rat(gb.exact_miss) << "\n";
    t << "  bound 1 - e^(-2rK/n): " << format_double(gb.bound, 5) << "\n";
    t << "  success strictly below bound: " << (below ? "yes" : "no") << "\n";
    if (o.enumerate)
      for (const auto& row : rows)
        t << "    " << row["guess"].get<std::string>() << " -> "
          << (row["derived"].get<bool>() ? "Yes" : "?") << "\n";
    if (plain == Answer::Yes) {
      out.data["note"] = "goal already derivable without guessing";
      t << "  note: goal already derivable without guessing\n";
    }
    // A failed hypothesis refuses the bound rather than falsifying it; only a
    // mass that defeats an applicable bound is a definite failure.
    out.exit_code = gb.hypothesis_ok && !below ? 1 : 0;
  }
  out.text = t.str();
  return out;
}

// ---------------------------------------------------------------------------

Outcome cmd_scenario(const ScenarioOptions& o) {
  ProbabilisticStructure s;
  if (o.name == "coin") {
    s = coin_structure();
  } else if (o.name == "sensor") {
    s = sensor_structure(o.sensor_max, o.sensor_query);
  } else if (o.name == "primality") {
    s = primality_structure(o.primality_n);
  } else if (o.name == "rp") {
    s = rp_structure();
  } else if (o.name == "bpp") {
    s = bpp_structure();
  } else if (o.name == "guess") {
    KeySpace keys = keyspace_from_decls(o.keys);
    std::vector<MessageTerm> received;
    for (const auto& m : o.received)
      received.push_back(normalize_message(parse_message(m, &keys), keys));
    for (const auto& k : o.initkeys) keys.index_of(k);
    s = guess_structure(keys, std::move(received), o.initkeys, o.guesses);
  } else if (o.name == "random") {
    s = random_structure(o.seed, o.random_params);
  } else {
    throw EvalError("unknown scenario '" + o.name +
                    "' (coin, sensor, primality, rp, bpp, guess, random)");
  }
  nlohmann::json doc = structure_to_json(s);
  Outcome out;
  out.data["command"] = "scenario";
  out.data["name"] = o.name;
  out.data["model"] = doc;
  if (!o.out_path.empty()) {
    std::ofstream file(o.out_path);
    if (!file) throw EvalError("cannot write " + o.out_path);
    file << doc.dump(2) << "\n";
    out.text = "wrote " + o.out_path + "\n";
  } else {
    out.text = doc.dump(2) + "\n";
  }
  return out;
}

}  // namespace knowmc
