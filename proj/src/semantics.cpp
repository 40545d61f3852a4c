#include <knowmc/semantics.hpp>

#include <knowmc/dolevyao.hpp>
#include <knowmc/evidence.hpp>

#include <algorithm>

namespace knowmc {

Rat AnswerDistribution::of(Answer a) const {
  switch (a) {
    case Answer::Yes: return yes;
    case Answer::No: return no;
    case Answer::Unknown: return unknown;
  }
  throw std::logic_error("unreachable answer");
}

bool AnswerDistribution::operator==(const AnswerDistribution& o) const {
  return yes == o.yes && no == o.no && unknown == o.unknown;
}

bool AnswerDistribution::operator<(const AnswerDistribution& o) const {
  if (yes != o.yes) return yes < o.yes;
  if (no != o.no) return no < o.no;
  return unknown < o.unknown;
}

std::string distribution_text(const AnswerDistribution& d) {
  return "<Yes:" + format_rat(d.yes) + ", No:" + format_rat(d.no) + ", ?:" +
         format_rat(d.unknown) + ">";
}

Evaluator::Evaluator(const ProbabilisticStructure& s) : s_(&s) {}

bool Evaluator::holds(const std::string& state_id, size_t point, const Formula& f) {
  return holds(s_->state(state_id), point, f);
}

bool Evaluator::holds(const State& at, size_t point, const Formula& f) {
  if (point >= s_->derand.points.size())
    throw EvalError("derandomizer point index " + std::to_string(point) + " out of range");
  switch (f.kind()) {
    case Formula::Kind::Prop: {
      auto it = at.valuation.find(f.prop());
      if (it == at.valuation.end())
        throw EvalError("proposition '" + f.prop() + "' is not declared in this structure");
      return it->second;
    }
    case Formula::Kind::HasMsg: {
      size_t idx = s_->agent_index(f.agent());
      MessageTerm goal = normalize_message(f.msg(), s_->keys);
      for (const auto& m : at.received[idx])
        if (msg_contains(goal, m)) return true;
      // Initial keys of an intruder-style algorithm count as possessed.
      if (const auto* initkeys = s_->algorithms[idx]->initial_keys())
        for (const auto& k : *initkeys)
          if (goal == m_key(k)) return true;
      return false;
    }
    case Formula::Kind::Not:
      return !holds(at, point, f.child());
    case Formula::Kind::And:
      return holds(at, point, f.left()) && holds(at, point, f.right());
    case Formula::Kind::Knows: {
      // Knowledge quantifies over indistinguishable states and the whole
      // derandomizer space alike: the agent cannot see the coin stream.
      for (const State* t : indistinguishable(*s_, f.agent(), at))
        for (size_t v = 0; v < s_->derand.points.size(); ++v)
          if (!holds(*t, v, f.child())) return false;
      return true;
    }
    case Formula::Kind::AlgKnows:
      return run_algorithm(*s_, f.agent(), f.child(), at, s_->derand.points[point]) ==
             Answer::Yes;
    case Formula::Kind::ProbCmp:
      return cmp_holds(probability(at, f.child()), f.cmp(), f.threshold());
    case Formula::Kind::EvCmp:
      return cmp_holds(ev_value(f.bound(), f.agent(), f.child(), at, point), f.cmp(),
                       f.threshold());
  }
  throw std::logic_error("unreachable formula kind");
}

Rat Evaluator::probability(const State& at, const Formula& f) {
  std::string key = at.id + '\x1f' + print_formula(f);
  auto it = prob_cache_.find(key);
  if (it != prob_cache_.end()) return it->second;
  Rat mass = 0;
  for (size_t v = 0; v < s_->derand.points.size(); ++v)
    if (holds(at, v, f)) mass += s_->derand.points[v].prob;
  prob_cache_.emplace(std::move(key), mass);
  return mass;
}

AnswerDistribution Evaluator::answer_distribution(int agent, const Formula& query,
                                                  const State& at) {
  AnswerDistribution d{0, 0, 0};
  for (const auto& pt : s_->derand.points) {
    switch (run_algorithm(*s_, agent, query, at, pt)) {
      case Answer::Yes: d.yes += pt.prob; break;
      case Answer::No: d.no += pt.prob; break;
      case Answer::Unknown: d.unknown += pt.prob; break;
    }
  }
  return d;
}

ValidityResult Evaluator::valid_in(const Formula& f) {
  std::vector<const State*> order;
  for (const auto& st : s_->states) order.push_back(&st);
  std::sort(order.begin(), order.end(),
            [](const State* a, const State* b) { return a->id < b->id; });
  for (const State* st : order)
    for (size_t v = 0; v < s_->derand.points.size(); ++v)
      if (!holds(*st, v, f)) return {false, Counterexample{st->id, v}};
  return {true, std::nullopt};
}

Rat Evaluator::ev_value(EvBound bound, int agent, const Formula& f, const State& at,
                        size_t point) {
  if (!classify_formula(f).objective)
    throw EvalError("evidence requires an objective question (no X, Pr, or Ev inside): " +
                    print_formula(f));
  if (point >= s_->derand.points.size())
    throw EvalError("derandomizer point index " + std::to_string(point) + " out of range");
  size_t idx = s_->agent_index(agent);
  Answer ob = run_algorithm(*s_, agent, f, at, s_->derand.points[point]);
  const std::string& label = at.locals[idx];
  std::string key = std::string(bound == EvBound::Lower ? "lo" : "hi") + '\x1f' +
                    std::to_string(agent) + '\x1f' + label + '\x1f' + answer_text(ob) +
                    '\x1f' + print_formula(f);
  auto it = ev_cache_.find(key);
  if (it != ev_cache_.end()) return it->second;
  auto space = evidence_space(agent, f, label);
  Rat w = bound == EvBound::Lower ? lower_weight(*space, ob, 0) : upper_weight(*space, ob, 0);
  ev_cache_.emplace(std::move(key), w);
  return w;
}

std::shared_ptr<const EvidenceSpace> Evaluator::evidence_space(int agent, const Formula& f,
                                                               const std::string& label) {
  std::string key = std::to_string(agent) + '\x1f' + label + '\x1f' + print_formula(f);
  auto it = space_cache_.find(key);
  if (it != space_cache_.end()) return it->second;
  auto space =
      std::make_shared<const EvidenceSpace>(build_evidence_space(*this, agent, f, label));
  space_cache_.emplace(std::move(key), space);
  return space;
}

bool holds(const ProbabilisticStructure& s, const std::string& state_id, size_t point,
           const Formula& f) {
  Evaluator ev(s);
  return ev.holds(state_id, point, f);
}

Rat probability(const ProbabilisticStructure& s, const std::string& state_id, const Formula& f) {
  Evaluator ev(s);
  return ev.probability(s.state(state_id), f);
}

ValidityResult valid_in(const ProbabilisticStructure& s, const Formula& f) {
  Evaluator ev(s);
  return ev.valid_in(f);
}

}  // namespace knowmc
