#include <knowmc/reliability.hpp>

#include <knowmc/scenarios.hpp>
#include <knowmc/semantics.hpp>

#include "oracles.hpp"

#include <doctest.h>

#include <map>
#include <stdexcept>
#include <string>

using namespace knowmc;

namespace {

const ClauseResult& clause(const EvidenceAudit& audit, const std::string& name) {
  for (const auto& c : audit.clauses)
    if (c.name == name) return c;
  REQUIRE_MESSAGE(false, "missing clause " << name);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("tight pairs for the built-in structures") {
  ProbabilisticStructure coin = coin_structure();
  Evaluator evc(coin);
  ReliabilityReport r = reliability(evc, 1, parse_formula("dh"));
  CHECK(r.alpha_star == Rat(1));
  CHECK(r.beta_star == Rat(1, 2));
  CHECK(!r.vacuous_alpha);
  CHECK(!r.vacuous_beta);
  CHECK(r.complete);
  CHECK(r.negation == NegationRespect::Strong);

  ProbabilisticStructure sensor = sensor_structure(12, 10);
  Evaluator evs(sensor);
  r = reliability(evs, 1, parse_formula("wall10"));
  CHECK(r.alpha_star == Rat(3, 4));
  CHECK(r.beta_star == Rat(1, 4));
  CHECK(r.complete);

  ProbabilisticStructure prim = primality_structure(15);
  Evaluator evp(prim);
  r = reliability(evp, 1, parse_formula("prime"));
  CHECK(r.alpha_star == Rat(1));
  CHECK(r.beta_star == Rat(7, 15));

  ProbabilisticStructure rp = rp_structure();
  Evaluator evr(rp);
  r = reliability(evr, 1, parse_formula("p"));
  CHECK(r.alpha_star == Rat(1, 2));
  CHECK(r.beta_star == Rat(0));

  ProbabilisticStructure bpp = bpp_structure();
  Evaluator evb(bpp);
  r = reliability(evb, 1, parse_formula("p"));
  CHECK(r.alpha_star == Rat(3, 4));
  CHECK(r.beta_star == Rat(1, 4));
}

TEST_CASE("reliability at a pair means within the tight pair") {
  ProbabilisticStructure prim = primality_structure(15);
  Evaluator ev(prim);
  ReliabilityReport r = reliability(ev, 1, parse_formula("prime"));
  CHECK(is_reliable_at(r, Rat(1), Rat(1, 2)));
  CHECK(is_reliable_at(r, Rat(1), Rat(7, 15)));
  CHECK(!is_reliable_at(r, Rat(1), Rat(2, 5)));   // beta below the worst case
  CHECK(is_reliable_at(r, Rat(0), Rat(1)));       // the trivial pair always works
  // Loosening never breaks reliability.
  oracle::Gen g(31);
  std::vector<Rat> grid = {Rat(0), Rat(1, 4), Rat(7, 15), Rat(1, 2), Rat(3, 4), Rat(1)};
  for (const Rat& a : grid)
    for (const Rat& b : grid)
      if (is_reliable_at(r, a, b))
        for (const Rat& a2 : grid)
          for (const Rat& b2 : grid)
            if (a2 <= a && b2 >= b) CHECK(is_reliable_at(r, a2, b2));
  CHECK_THROWS_AS(is_reliable_at(r, Rat(3, 2), Rat(1)), EvalError);
  CHECK_THROWS_AS(is_reliable_at(r, Rat(1), Rat(-1, 2)), EvalError);
}

TEST_CASE("one-sided questions flag the vacuous bound") {
  // A single rigged-coin world: no !dh state exists, so beta is vacuous.
  ProbabilisticStructure s = coin_structure();
  s.states.pop_back();
  Evaluator ev(s);
  ReliabilityReport r = reliability(ev, 1, parse_formula("dh"));
  CHECK(r.alpha_star == Rat(1));
  CHECK(r.beta_star == Rat(0));
  CHECK(!r.vacuous_alpha);
  CHECK(r.vacuous_beta);

  r = reliability(ev, 1, parse_formula("!dh"));
  CHECK(r.vacuous_alpha);
  CHECK(!r.vacuous_beta);
  CHECK(r.alpha_star == Rat(1));
}

TEST_CASE("the negated question inherits the dual pair") {
  CHECK(dual_pair(Rat(1), Rat(7, 15)) == std::make_pair(Rat(8, 15), Rat(0)));
  CHECK(dual_pair(Rat(1, 2), Rat(0)) == std::make_pair(Rat(1), Rat(1, 2)));
  CHECK(dual_pair(Rat(3, 4), Rat(1, 4)) == std::make_pair(Rat(3, 4), Rat(1, 4)));

  ProbabilisticStructure prim = primality_structure(15);
  Evaluator evp(prim);
  DualityAudit audit = audit_duality(evp, 1, parse_formula("prime"));
  CHECK(audit.match);
  CHECK(audit.dual == std::make_pair(Rat(8, 15), Rat(0)));
  CHECK(audit.direct.alpha_star == Rat(8, 15));
  CHECK(audit.direct.beta_star == Rat(0));

  ProbabilisticStructure rp = rp_structure();
  Evaluator evr(rp);
  audit = audit_duality(evr, 1, parse_formula("p"));
  CHECK(audit.match);
  CHECK(audit.dual == std::make_pair(Rat(1), Rat(1, 2)));
}

TEST_CASE("incomplete algorithms are refused, not judged") {
  // The intruder answers ? on underivable goals, so reliability bounds for
  // its question do not apply.
  KeySpace keys = KeySpace::make({{"k", "k"}});
  ProbabilisticStructure s =
      guess_structure(keys, {m_encrypt(m_plain("m"), "k")}, {}, 0);
  Evaluator ev(s);
  Formula f = parse_formula("has1(m)", &keys);
  ReliabilityReport r = reliability(ev, 1, f);
  CHECK(!r.complete);
  CHECK_THROWS_AS(audit_duality(ev, 1, f), EvalError);
  EvidenceAudit audit = audit_evidence_bounds(ev, 1, f);
  CHECK(audit.skipped);
  CHECK(!audit.skip_reason.empty());
  CHECK(audit.clauses.empty());
  CHECK(!audit.all_pass());
}

TEST_CASE("negation respect is classified from the answer tables") {
  // Strong: the built-in kinds flip their answer on the negated query.
  ProbabilisticStructure coin = coin_structure();
  Evaluator evc(coin);
  CHECK(reliability(evc, 1, parse_formula("dh")).negation == NegationRespect::Strong);

  // Weak: ? rows may stay ? instead of flipping.
  std::map<TableKey, Answer> weak;
  weak[{"p", "s1", "t"}] = Answer::Yes;
  weak[{"!p", "s1", "t"}] = Answer::No;
  weak[{"p", "s2", "t"}] = Answer::Unknown;
  weak[{"!p", "s2", "t"}] = Answer::Unknown;
  ProbabilisticStructure s;
  s.agents = {"A"};
  s.propositions = {"p"};
  s.states = {{"s1", {{"p", true}}, {"l"}, {{}}}, {"s2", {{"p", false}}, {"l"}, {{}}}};
  s.derand.points = {{{"t"}, Rat(1)}};
  s.algorithms = {make_table_algorithm(weak, Answer::Unknown)};
  validate_structure(s);
  Evaluator evw(s);
  ReliabilityReport r = reliability(evw, 1, parse_formula("p"));
  CHECK(r.negation == NegationRespect::Weak);
  CHECK(!r.complete);

  // No: answering Yes to both a query and its negation.
  std::map<TableKey, Answer> contrary = weak;
  contrary[{"p", "s2", "t"}] = Answer::Yes;
  contrary[{"!p", "s2", "t"}] = Answer::Yes;
  s.algorithms = {make_table_algorithm(contrary, Answer::Unknown)};
  Evaluator evn(s);
  CHECK(reliability(evn, 1, parse_formula("p")).negation == NegationRespect::No);

  CHECK(std::string(negation_text(NegationRespect::Strong)) == "strong");
  CHECK(std::string(negation_text(NegationRespect::Weak)) == "weak");
  CHECK(std::string(negation_text(NegationRespect::No)) == "no");
}

TEST_CASE("evidence bounds hold at the witness tester") {
  ProbabilisticStructure prim = primality_structure(15);
  Evaluator ev(prim);
  EvidenceAudit audit = audit_evidence_bounds(ev, 1, parse_formula("prime"));
  REQUIRE(!audit.skipped);
  CHECK(audit.report.alpha_star == Rat(1));
  CHECK(audit.report.beta_star == Rat(7, 15));
  CHECK(audit.all_pass());

  // alpha/(alpha+beta) = 1/(1+7/15) = 15/22; a Yes observation confirms at
  // least that strongly.
  const ClauseResult& confirm = clause(audit, "confirm-lo");
  CHECK(confirm.applicable);
  CHECK(confirm.pass);
  CHECK(ev.holds("sp", 0, parse_formula("EvLo1(prime) >= 15/22")));

  const ClauseResult& refute = clause(audit, "refute-hi");
  CHECK(refute.applicable);
  CHECK(refute.pass);
  // A No observation refutes outright here: no prime state ever hears No.
  CHECK(ev.ev_value(EvBound::Upper, 1, parse_formula("prime"), prim.state("sc8"), 7) == Rat(0));

  const ClauseResult& neg = clause(audit, "confirm-neg-hi");
  CHECK(neg.applicable);
  CHECK(neg.pass);
  Formula notprime = parse_formula("!prime");
  CHECK(ev.ev_value(EvBound::Upper, 1, notprime, prim.state("sp"), 0) <= Rat(7, 22));

  const ClauseResult& flip = clause(audit, "flip-law");
  CHECK(flip.applicable);
  CHECK(flip.pass);
}

TEST_CASE("degenerate pairs take the limit clauses") {
  // rp answers No everywhere p fails, so beta = 0 and a Yes is conclusive.
  ProbabilisticStructure rp = rp_structure();
  Evaluator ev(rp);
  EvidenceAudit audit = audit_evidence_bounds(ev, 1, parse_formula("p"));
  REQUIRE(!audit.skipped);
  CHECK(audit.all_pass());
  const ClauseResult& confirm = clause(audit, "confirm-lo");
  CHECK(confirm.applicable);
  CHECK(confirm.pass);
  CHECK(ev.holds("sy", 0, parse_formula("EvLo1(p) = 1")));
  CHECK(ev.valid_in(parse_formula("X1 p => EvLo1(p) = 1")).valid);
}

TEST_CASE("random complete structures satisfy every applicable clause") {
  oracle::Gen g(0xabcde);
  for (int round = 0; round < 30; ++round) {
    RandomStructureParams params;
    params.n_states = 1 + static_cast<int>(g.below(6));
    params.n_tokens = 1 + static_cast<int>(g.below(4));
    params.force_complete = true;
    ProbabilisticStructure s = random_structure(g.below(1u << 30), params);
    Evaluator ev(s);
    Formula f = f_prop(s.propositions[0]);
    EvidenceAudit audit = audit_evidence_bounds(ev, 1, f);
    REQUIRE(!audit.skipped);
    for (const auto& c : audit.clauses) {
      CAPTURE(c.name);
      CAPTURE(c.detail);
      if (c.applicable) CHECK(c.pass);
    }
  }
}
