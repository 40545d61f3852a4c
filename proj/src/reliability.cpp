#include <knowmc/reliability.hpp>

#include <algorithm>

namespace knowmc {

const char* negation_text(NegationRespect n) {
  switch (n) {
    case NegationRespect::Strong: return "strong";
    case NegationRespect::Weak: return "weak";
    case NegationRespect::No: return "no";
  }
  return "?";
}

namespace {

Answer weak_flip(Answer a) {
  switch (a) {
    case Answer::Yes: return Answer::No;
    case Answer::No: return Answer::Yes;
    case Answer::Unknown: return Answer::Unknown;
  }
  return Answer::Unknown;
}

}  // namespace

ReliabilityReport reliability(Evaluator& ev, int agent, const Formula& f) {
  if (!classify_formula(f).objective)
    throw EvalError("reliability requires an objective question (no X, Pr, or Ev inside): " +
                    print_formula(f));
  const ProbabilisticStructure& s = ev.structure();
  Formula nf = f_not(f);
  ReliabilityReport r;
  bool any_true = false, any_false = false;
  r.complete = true;
  bool strong_ok = true, weak_ok = true;
  for (const auto& st : s.states) {
    bool truth = ev.holds(st, 0, f);
    Rat yes = ev.answer_distribution(agent, f, st).yes;
    if (truth) {
      if (!any_true || yes < r.alpha_star) r.alpha_star = yes;
      any_true = true;
    } else {
      if (!any_false || yes > r.beta_star) r.beta_star = yes;
      any_false = true;
    }
    for (const auto& pt : s.derand.points) {
      Answer a = run_algorithm(s, agent, f, st, pt);
      Answer an = run_algorithm(s, agent, nf, st, pt);
      if (a == Answer::Unknown || an == Answer::Unknown) r.complete = false;
      if (an != (a == Answer::Yes ? Answer::No : Answer::Yes)) strong_ok = false;
      if (an != weak_flip(a)) weak_ok = false;
    }
  }
  if (!any_true) {
    r.alpha_star = 1;  // no state satisfies f, so any alpha works
    r.vacuous_alpha = true;
  }
  if (!any_false) {
    r.beta_star = 0;  // no state refutes f, so any beta works
    r.vacuous_beta = true;
  }
  r.negation = strong_ok   ? NegationRespect::Strong
               : weak_ok   ? NegationRespect::Weak
                           : NegationRespect::No;
  return r;
}

bool is_reliable_at(const ReliabilityReport& r, const Rat& alpha, const Rat& beta) {
  if (alpha < 0 || alpha > 1 || beta < 0 || beta > 1)
    throw EvalError("reliability pair must lie in [0, 1]");
  return alpha <= r.alpha_star && beta >= r.beta_star;
}

std::pair<Rat, Rat> dual_pair(const Rat& alpha, const Rat& beta) {
  return {Rat(1) - beta, Rat(1) - alpha};
}

DualityAudit audit_duality(Evaluator& ev, int agent, const Formula& f) {
  DualityAudit a;
  a.for_f = reliability(ev, agent, f);
  if (!a.for_f.complete)
    throw EvalError("duality audit needs a complete algorithm for " + print_formula(f));
  if (a.for_f.negation == NegationRespect::No)
    throw EvalError("duality audit needs an algorithm that respects negation of " +
                    print_formula(f));
  a.dual = dual_pair(a.for_f.alpha_star, a.for_f.beta_star);
  a.direct = reliability(ev, agent, f_not(f));
  a.match = a.direct.alpha_star == a.dual.first && a.direct.beta_star == a.dual.second;
  return a;
}

namespace {

// One bound clause: wherever `guard` holds, the named evidence value of
// `question` must compare against `limit`.
ClauseResult bound_clause(Evaluator& ev, int agent, const std::string& name,
                          const Formula& guard, EvBound bound, const Formula& question,
                          CmpOp op, const Rat& limit) {
  ClauseResult c;
  c.name = name;
  c.applicable = true;
  c.pass = true;
  const ProbabilisticStructure& s = ev.structure();
  std::vector<const State*> order;
  for (const auto& st : s.states) order.push_back(&st);
  std::sort(order.begin(), order.end(),
            [](const State* a, const State* b) { return a->id < b->id; });
  std::string ev_name = bound == EvBound::Lower ? "EvLo" : "EvHi";
  for (const State* st : order)
    for (size_t v = 0; v < s.derand.points.size(); ++v) {
      if (!ev.holds(*st, v, guard)) continue;
      Rat value = ev.ev_value(bound, agent, question, *st, v);
      if (!cmp_holds(value, op, limit)) {
        c.pass = false;
        c.detail = "state " + st->id + ", point " + std::to_string(v) + ": " + ev_name +
                   std::to_string(agent) + "(" + print_formula(question) + ") = " +
                   format_rat(value) + ", needs " + cmp_text(op) + " " + format_rat(limit);
        return c;
      }
    }
  return c;
}

ClauseResult skipped_clause(std::string name, std::string why) {
  ClauseResult c;
  c.name = std::move(name);
  c.applicable = false;
  c.pass = true;
  c.detail = std::move(why);
  return c;
}

}  // namespace

EvidenceAudit audit_evidence_bounds(Evaluator& ev, int agent, const Formula& f) {
  EvidenceAudit audit;
  audit.report = reliability(ev, agent, f);
  if (!audit.report.complete) {
    audit.skipped = true;
    audit.skip_reason =
        "algorithm is not complete for " + print_formula(f) + "; bounds assume completeness";
    return audit;
  }
  const Rat& alpha = audit.report.alpha_star;
  const Rat& beta = audit.report.beta_star;
  bool pair_zero = alpha == 0 && beta == 0;
  bool pair_one = alpha == 1 && beta == 1;

  Formula nf = f_not(f);
  Formula xf = f_xknows(agent, f);
  Formula xnf = f_xknows(agent, nf);
  Formula confirm = f_and(xf, f_not(f_knows(agent, nf)));
  Formula refute = f_and(f_not(xf), f_not(f_knows(agent, f)));
  Formula neg_refute = f_and(xnf, f_not(f_knows(agent, f)));

  if (pair_zero) {
    audit.clauses.push_back(bound_clause(ev, agent, "confirm-one", confirm, EvBound::Lower,
                                         f, CmpOp::Ge, Rat(1)));
  } else {
    audit.clauses.push_back(bound_clause(ev, agent, "confirm-lo", confirm, EvBound::Lower,
                                         f, CmpOp::Ge, alpha / (alpha + beta)));
  }
  if (pair_one) {
    audit.clauses.push_back(bound_clause(ev, agent, "refute-zero", refute, EvBound::Upper,
                                         f, CmpOp::Le, Rat(0)));
  } else {
    audit.clauses.push_back(bound_clause(ev, agent, "refute-hi", refute, EvBound::Upper, f,
                                         CmpOp::Le, (1 - alpha) / (2 - alpha - beta)));
  }

  if (audit.report.negation == NegationRespect::No) {
    const char* why = "algorithm does not respect negation";
    audit.clauses.push_back(skipped_clause("confirm-neg-hi", why));
    audit.clauses.push_back(skipped_clause("refute-neg-lo", why));
    audit.clauses.push_back(skipped_clause("refute-neg-hi", why));
    audit.clauses.push_back(skipped_clause("flip-law", why));
    return audit;
  }

  if (pair_zero) {
    audit.clauses.push_back(bound_clause(ev, agent, "confirm-neg-hi", confirm,
                                         EvBound::Upper, nf, CmpOp::Le, Rat(0)));
  } else {
    audit.clauses.push_back(bound_clause(ev, agent, "confirm-neg-hi", confirm,
                                         EvBound::Upper, nf, CmpOp::Le, beta / (alpha + beta)));
  }
  if (pair_one) {
    audit.clauses.push_back(bound_clause(ev, agent, "refute-neg-lo", neg_refute,
                                         EvBound::Lower, nf, CmpOp::Ge, Rat(1, 2)));
    audit.clauses.push_back(bound_clause(ev, agent, "refute-neg-hi", neg_refute,
                                         EvBound::Upper, f, CmpOp::Le, Rat(1, 2)));
  } else {
    audit.clauses.push_back(bound_clause(ev, agent, "refute-neg-lo", neg_refute,
                                         EvBound::Lower, nf, CmpOp::Ge,
                                         (1 - beta) / (2 - alpha - beta)));
    audit.clauses.push_back(bound_clause(ev, agent, "refute-neg-hi", neg_refute,
                                         EvBound::Upper, f, CmpOp::Le,
                                         (1 - alpha) / (2 - alpha - beta)));
  }

  ClauseResult flip;
  flip.name = "flip-law";
  flip.applicable = true;
  ValidityResult vr = ev.valid_in(f_iff(xf, f_not(xnf)));
  flip.pass = vr.valid;
  if (!vr.valid && vr.witness)
    flip.detail = "fails at state " + vr.witness->state_id + ", point " +
                  std::to_string(vr.witness->point_index);
  audit.clauses.push_back(flip);
  return audit;
}

bool EvidenceAudit::all_pass() const {
  if (skipped) return false;
  for (const auto& c : clauses)
    if (c.applicable && !c.pass) return false;
  return true;
}

}  // namespace knowmc
