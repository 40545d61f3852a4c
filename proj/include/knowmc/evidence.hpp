#pragma once

#include <knowmc/rational.hpp>
#include <knowmc/semantics.hpp>
#include <knowmc/syntax.hpp>

#include <string>
#include <vector>

namespace knowmc {

// ---------------------------------------------------------------------------
// Evidence spaces
//
// Hypotheses carry one measure per distinct answer profile their states
// induce; a hypothesis with no states has no measures. The observation space
// is always {Yes, No, ?}.

struct EvMeasure {
  AnswerDistribution dist;
  std::vector<std::string> source_states;  // provenance, id-sorted
};

struct EvHypothesis {
  std::string name;                 // printed formula
  std::vector<EvMeasure> measures;  // deduplicated by profile
};

class EvidenceSpace {
 public:
  EvidenceSpace(std::vector<EvHypothesis> hypotheses);
  const std::vector<EvHypothesis>& hypotheses() const { return hyps_; }
  const EvHypothesis& hypothesis(size_t i) const;

 private:
  std::vector<EvHypothesis> hyps_;
};

// Simple-space weight: every hypothesis must carry exactly one measure
// (EvalError directing to weight_set otherwise), and the observation must be
// possible under some hypothesis (EvalError "impossible observation" when the
// denominator vanishes). Returns mu_h(ob) / sum over hypotheses of mu(ob).
Rat weight(const EvidenceSpace& e, Answer ob, size_t hyp);

// Generalized weights: one value per way of fixing a measure for every
// hypothesis that has any, skipping combinations whose denominator is zero.
// Empty when the hypothesis itself has no measures or no combination has a
// positive denominator. Sorted, deduplicated.
std::vector<Rat> weight_set(const EvidenceSpace& e, Answer ob, size_t hyp);

// Min / max of weight_set; both 0 by convention on an empty set. Always
// lower_weight <= upper_weight.
Rat lower_weight(const EvidenceSpace& e, Answer ob, size_t hyp);
Rat upper_weight(const EvidenceSpace& e, Answer ob, size_t hyp);

// The evidence space agent i's algorithm induces on question f over the
// states labeled `label`: hypothesis 0 is f with the answer profiles of the
// f-states, hypothesis 1 is !f with those of the rest. Requires f objective
// and at least one state with the label (EvalError otherwise).
EvidenceSpace build_evidence_space(Evaluator& ev, int agent, const Formula& f,
                                   const std::string& label);

// Dempster-style update of a prior by an evidence weight:
//     w * p / (w * p + (1 - w) * (1 - p)).
// Arguments must lie in [0, 1]; the contradictory corners (p, w) = (0, 1) and
// (1, 0) have a zero denominator and raise EvalError.
Rat posterior_update(const Rat& prior, const Rat& weight);

}  // namespace knowmc
