#include <knowmc/evidence.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace knowmc {

EvidenceSpace::EvidenceSpace(std::vector<EvHypothesis> hypotheses)
    : hyps_(std::move(hypotheses)) {
  if (hyps_.empty()) throw EvalError("an evidence space needs at least one hypothesis");
}

const EvHypothesis& EvidenceSpace::hypothesis(size_t i) const {
  if (i >= hyps_.size()) throw EvalError("hypothesis index out of range");
  return hyps_[i];
}

Rat weight(const EvidenceSpace& e, Answer ob, size_t hyp) {
  const EvHypothesis& h = e.hypothesis(hyp);
  Rat denom = 0;
  for (const auto& other : e.hypotheses()) {
    if (other.measures.size() != 1)
      throw EvalError("hypothesis '" + other.name + "' carries " +
                      std::to_string(other.measures.size()) +
                      " measures; this is a generalized space, use weight_set");
    denom += other.measures[0].dist.of(ob);
  }
  if (denom == 0)
    throw EvalError("impossible observation " + answer_text(ob) +
                    ": no hypothesis gives it positive probability");
  return h.measures[0].dist.of(ob) / denom;
}

std::vector<Rat> weight_set(const EvidenceSpace& e, Answer ob, size_t hyp) {
  const EvHypothesis& h = e.hypothesis(hyp);
  if (h.measures.empty()) return {};
  // Every way of fixing one measure per inhabited hypothesis; combinations
  // with a vanishing denominator contribute nothing.
  std::vector<size_t> active;
  for (size_t i = 0; i < e.hypotheses().size(); ++i)
    if (!e.hypothesis(i).measures.empty()) active.push_back(i);
  std::vector<size_t> choice(active.size(), 0);
  std::set<Rat> values;
  while (true) {
    Rat denom = 0, numer = 0;
    for (size_t j = 0; j < active.size(); ++j) {
      const Rat& mass = e.hypothesis(active[j]).measures[choice[j]].dist.of(ob);
      denom += mass;
      if (active[j] == hyp) numer = mass;
    }
    if (denom != 0) values.insert(numer / denom);
    size_t d = choice.size();
    while (d > 0) {
      if (++choice[d - 1] < e.hypothesis(active[d - 1]).measures.size()) break;
      choice[d - 1] = 0;
      --d;
    }
    if (d == 0) break;
  }
  return {values.begin(), values.end()};
}

Rat lower_weight(const EvidenceSpace& e, Answer ob, size_t hyp) {
  auto ws = weight_set(e, ob, hyp);
  return ws.empty() ? Rat(0) : ws.front();
}

Rat upper_weight(const EvidenceSpace& e, Answer ob, size_t hyp) {
  auto ws = weight_set(e, ob, hyp);
  return ws.empty() ? Rat(0) : ws.back();
}

EvidenceSpace build_evidence_space(Evaluator& ev, int agent, const Formula& f,
                                   const std::string& label) {
  if (!classify_formula(f).objective)
    throw EvalError("evidence requires an objective question (no X, Pr, or Ev inside): " +
                    print_formula(f));
  const ProbabilisticStructure& s = ev.structure();
  size_t idx = s.agent_index(agent);
  // Answer profiles of the SAME question f partition by where f actually
  // holds; dedup states that induce the same profile.
  std::map<AnswerDistribution, std::vector<std::string>> sides[2];
  bool any = false;
  for (const auto& st : s.states) {
    if (st.locals[idx] != label) continue;
    any = true;
    bool truth = ev.holds(st, 0, f);  // objective: any point will do
    sides[truth ? 0 : 1][ev.answer_distribution(agent, f, st)].push_back(st.id);
  }
  if (!any)
    throw EvalError("agent " + std::to_string(agent) + " has no state labeled '" + label + "'");
  std::vector<EvHypothesis> hyps(2);
  hyps[0].name = print_formula(f);
  hyps[1].name = print_formula(f_not(f));
  for (int side = 0; side < 2; ++side)
    for (auto& [dist, ids] : sides[side]) {
      std::sort(ids.begin(), ids.end());
      hyps[static_cast<size_t>(side)].measures.push_back(EvMeasure{dist, ids});
    }
  return EvidenceSpace(std::move(hyps));
}

Rat posterior_update(const Rat& prior, const Rat& weight) {
  if (prior < 0 || prior > 1) throw EvalError("prior " + format_rat(prior) + " outside [0, 1]");
  if (weight < 0 || weight > 1)
    throw EvalError("weight " + format_rat(weight) + " outside [0, 1]");
  Rat denom = weight * prior + (1 - weight) * (1 - prior);
  if (denom == 0)
    throw EvalError("contradictory prior " + format_rat(prior) + " and weight " +
                    format_rat(weight));
  return weight * prior / denom;
}

}  // namespace knowmc
