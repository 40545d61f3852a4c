#pragma once

#include <knowmc/rational.hpp>
#include <knowmc/semantics.hpp>
#include <knowmc/syntax.hpp>

#include <string>
#include <utility>
#include <vector>

namespace knowmc {

// ---------------------------------------------------------------------------
// Reliability
//
// An algorithm is (alpha, beta)-reliable for f when it says Yes with
// probability at least alpha wherever f holds and at most beta wherever it
// fails. The report carries the tightest such pair over the whole structure.

enum class NegationRespect { Strong, Weak, No };

const char* negation_text(NegationRespect r);

struct ReliabilityReport {
  Rat alpha_star;        // min Yes-mass over f-states; 1 when there are none
  Rat beta_star;         // max Yes-mass over !f-states; 0 when there are none
  bool vacuous_alpha = false;
  bool vacuous_beta = false;
  bool complete = false;           // answers only Yes/No on query f, everywhere
  NegationRespect negation = NegationRespect::No;
};

// Scans every state (and, for the flags, every point). Requires f objective.
ReliabilityReport reliability(Evaluator& ev, int agent, const Formula& f);

// Reliable at (alpha, beta) iff alpha <= alpha_star and beta >= beta_star.
bool is_reliable_at(const ReliabilityReport& r, const Rat& alpha, const Rat& beta);

// The pair the negated question inherits: (1 - beta, 1 - alpha).
std::pair<Rat, Rat> dual_pair(const Rat& alpha, const Rat& beta);

// Recomputes reliability directly on !f and checks it equals the dual of the
// tight pair for f. Requires a complete, negation-respecting algorithm
// (EvalError otherwise): only then do the two computations provably agree.
struct DualityAudit {
  ReliabilityReport for_f;
  std::pair<Rat, Rat> dual;       // dual of the tight pair for f
  ReliabilityReport direct;       // recomputed on !f
  bool match;
};

DualityAudit audit_duality(Evaluator& ev, int agent, const Formula& f);

// ---------------------------------------------------------------------------
// Evidence-bound audit
//
// Instantiates the tight (alpha, beta) pair and checks, at every (state,
// point), the bounds a reliable algorithm imposes on evidence:
//   confirm-lo:  Xf & !K!f  =>  EvLo(f) >= alpha/(alpha+beta)      [(a,b)!=(0,0)]
//   confirm-one: Xf & !K!f  =>  EvLo(f) = 1                        [(a,b)==(0,0)]
//   refute-hi:   !Xf & !Kf  =>  EvHi(f) <= (1-alpha)/(2-alpha-beta) [(a,b)!=(1,1)]
//   refute-zero: !Xf & !Kf  =>  EvHi(f) = 0                        [(a,b)==(1,1)]
// and, when the algorithm also respects negation, the mirrored bounds on the
// negated question plus the flip law (Xf <=> !X!f valid). Refuses to run on
// algorithms that are not complete for f.

struct ClauseResult {
  std::string name;
  bool applicable;
  bool pass;             // true when applicable and never violated
  std::string detail;    // first violation, or why not applicable
};

struct EvidenceAudit {
  bool skipped = false;
  std::string skip_reason;
  ReliabilityReport report;
  std::vector<ClauseResult> clauses;
  bool all_pass() const;
};

EvidenceAudit audit_evidence_bounds(Evaluator& ev, int agent, const Formula& f);

}  // namespace knowmc
