#pragma once

#include <knowmc/model.hpp>
#include <knowmc/rational.hpp>
#include <knowmc/syntax.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace knowmc {

class EvidenceSpace;  // evidence.hpp

// Exact answer profile of one algorithm at one state: the derandomizer mass
// of each answer. Components are nonnegative and sum to 1.
struct AnswerDistribution {
  Rat yes, no, unknown;
  Rat of(Answer a) const;
  bool operator==(const AnswerDistribution& o) const;
  bool operator<(const AnswerDistribution& o) const;
};

std::string distribution_text(const AnswerDistribution& d);

struct Counterexample {
  std::string state_id;
  size_t point_index;
};

struct ValidityResult {
  bool valid;
  std::optional<Counterexample> witness;  // first failure, states ordered by id
};

// Evaluation against one structure, with the memo tables the recursive
// clauses share: per-state truth mass per formula, evidence spaces per
// (agent, label, formula), and evidence values per realized observation.
// Purely observational; safe to reuse across queries on the same structure.
class Evaluator {
 public:
  explicit Evaluator(const ProbabilisticStructure& s);

  const ProbabilisticStructure& structure() const { return *s_; }

  // Truth at (state, point). The knowledge clause quantifies over every
  // indistinguishable state and every point; the probability and evidence
  // clauses compare exact rationals against the formula threshold.
  bool holds(const State& at, size_t point, const Formula& f);
  bool holds(const std::string& state_id, size_t point, const Formula& f);

  // Derandomizer mass of the points satisfying f at this state (independent
  // of the current point by construction).
  Rat probability(const State& at, const Formula& f);

  // Answer profile of agent i's algorithm on `query` at this state.
  AnswerDistribution answer_distribution(int agent, const Formula& query, const State& at);

  // Truth at every (state, point); states visited in id order, points in
  // index order, first failure reported.
  ValidityResult valid_in(const Formula& f);

  // Evidence the realized run lends to hypothesis f: the lower or upper
  // weight of the observed answer in the evidence space of agent i's local
  // label. Requires f objective.
  Rat ev_value(EvBound bound, int agent, const Formula& f, const State& at, size_t point);

  // Cached evidence space for (agent, f, label); built on first use.
  std::shared_ptr<const EvidenceSpace> evidence_space(int agent, const Formula& f,
                                                      const std::string& label);

 private:
  const ProbabilisticStructure* s_;
  std::map<std::string, Rat> prob_cache_;
  std::map<std::string, std::shared_ptr<const EvidenceSpace>> space_cache_;
  std::map<std::string, Rat> ev_cache_;
};

// One-shot conveniences (fresh evaluator per call).
bool holds(const ProbabilisticStructure& s, const std::string& state_id, size_t point,
           const Formula& f);
Rat probability(const ProbabilisticStructure& s, const std::string& state_id, const Formula& f);
ValidityResult valid_in(const ProbabilisticStructure& s, const Formula& f);

}  // namespace knowmc
