#include <knowmc/scenarios.hpp>

#include <algorithm>
#include <random>
#include <set>

namespace knowmc {

namespace {

Answer flip(Answer a) {
  switch (a) {
    case Answer::Yes: return Answer::No;
    case Answer::No: return Answer::Yes;
    case Answer::Unknown: return Answer::Unknown;
  }
  throw std::logic_error("unreachable answer");
}

// Matches p / !p against the kind's own proposition: 1 on the plain query,
// -1 on its negation, 0 otherwise.
int match_query(const Formula& query, const std::string& prop) {
  if (query.kind() == Formula::Kind::Prop && query.prop() == prop) return 1;
  if (query.kind() == Formula::Kind::Not && query.child().kind() == Formula::Kind::Prop &&
      query.child().prop() == prop)
    return -1;
  return 0;
}

class TableAlgorithm : public KnowledgeAlgorithm {
 public:
  TableAlgorithm(std::map<TableKey, Answer> entries, Answer fallback)
      : entries_(std::move(entries)), fallback_(fallback) {}

  Answer eval(const Formula& query, const std::string&, const State& state,
              const std::string& token) const override {
    auto it = entries_.find({print_formula(query), state.id, token});
    return it == entries_.end() ? fallback_ : it->second;
  }

  std::string kind() const override { return "table"; }

  nlohmann::json params_json() const override {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [key, answer] : entries_)
      rows.push_back({{"query", std::get<0>(key)},
                      {"state", std::get<1>(key)},
                      {"token", std::get<2>(key)},
                      {"answer", answer_text(answer)}});
    return {{"default", answer_text(fallback_)}, {"entries", std::move(rows)}};
  }

 private:
  std::map<TableKey, Answer> entries_;
  Answer fallback_;
};

class CoinAlgorithm : public KnowledgeAlgorithm {
 public:
  explicit CoinAlgorithm(std::string prop) : prop_(std::move(prop)) {}

  Answer eval(const Formula& query, const std::string&, const State& state,
              const std::string& token) const override {
    int m = match_query(query, prop_);
    if (m == 0) return Answer::Unknown;
    auto it = state.valuation.find(prop_);
    if (it == state.valuation.end())
      throw EvalError("coin algorithm at state '" + state.id + "' without proposition '" +
                      prop_ + "'");
    // A rigged coin lands heads on either token; a fair one follows the toss.
    Answer base = (it->second || token == "H") ? Answer::Yes : Answer::No;
    return m == 1 ? base : flip(base);
  }

  std::string kind() const override { return "coin"; }

  nlohmann::json params_json() const override { return {{"prop", prop_}}; }

 private:
  std::string prop_;
};

class SensorAlgorithm : public KnowledgeAlgorithm {
 public:
  SensorAlgorithm(std::string prop, int threshold, std::map<std::string, int> distances)
      : prop_(std::move(prop)), threshold_(threshold), distances_(std::move(distances)) {}

  Answer eval(const Formula& query, const std::string&, const State& state,
              const std::string& token) const override {
    int m = match_query(query, prop_);
    if (m == 0) return Answer::Unknown;
    auto it = distances_.find(state.id);
    if (it == distances_.end())
      throw EvalError("sensor algorithm has no distance for state '" + state.id + "'");
    int delta;
    try {
      delta = std::stoi(token);
    } catch (const std::exception&) {
      throw EvalError("sensor token '" + token + "' is not an integer offset");
    }
    Answer base = (it->second + delta <= threshold_) ? Answer::Yes : Answer::No;
    return m == 1 ? base : flip(base);
  }

  std::string kind() const override { return "sensor"; }

  nlohmann::json params_json() const override {
    return {{"prop", prop_}, {"threshold", threshold_}, {"distances", distances_}};
  }

 private:
  std::string prop_;
  int threshold_;
  std::map<std::string, int> distances_;
};

class WitnessAlgorithm : public KnowledgeAlgorithm {
 public:
  WitnessAlgorithm(std::string prop, int n, std::map<std::string, int> witnesses)
      : prop_(std::move(prop)), n_(n), witnesses_(std::move(witnesses)) {}

  Answer eval(const Formula& query, const std::string&, const State& state,
              const std::string& token) const override {
    int m = match_query(query, prop_);
    if (m == 0) return Answer::Unknown;
    int candidate;
    try {
      candidate = std::stoi(token);
    } catch (const std::exception&) {
      throw EvalError("witness token '" + token + "' is not a candidate number");
    }
    if (candidate < 1 || candidate > n_)
      throw EvalError("witness candidate " + token + " outside 1.." + std::to_string(n_));
    auto it = witnesses_.find(state.id);
    // At a composite world the first w candidates expose the composite.
    Answer base =
        (it != witnesses_.end() && candidate <= it->second) ? Answer::No : Answer::Yes;
    return m == 1 ? base : flip(base);
  }

  std::string kind() const override { return "witness-prime"; }

  nlohmann::json params_json() const override {
    return {{"prop", prop_}, {"n", n_}, {"witnesses", witnesses_}};
  }

 private:
  std::string prop_;
  int n_;
  std::map<std::string, int> witnesses_;
};

}  // namespace

AlgorithmPtr make_table_algorithm(std::map<TableKey, Answer> entries, Answer fallback) {
  return std::make_shared<TableAlgorithm>(std::move(entries), fallback);
}

AlgorithmPtr make_coin_algorithm(std::string prop) {
  return std::make_shared<CoinAlgorithm>(std::move(prop));
}

AlgorithmPtr make_sensor_algorithm(std::string prop, int threshold,
                                   std::map<std::string, int> distances) {
  return std::make_shared<SensorAlgorithm>(std::move(prop), threshold, std::move(distances));
}

AlgorithmPtr make_witness_algorithm(std::string prop, int n,
                                    std::map<std::string, int> witnesses) {
  return std::make_shared<WitnessAlgorithm>(std::move(prop), n, std::move(witnesses));
}

// ---------------------------------------------------------------------------
// Built-in structures

ProbabilisticStructure coin_structure() {
  ProbabilisticStructure s;
  s.agents = {"Bob"};
  s.propositions = {"dh"};
  s.states = {State{"s1", {{"dh", true}}, {"l0"}, {{}}},
              State{"s2", {{"dh", false}}, {"l0"}, {{}}}};
  s.derand = product_space({{{"H", Rat(1, 2)}, {"T", Rat(1, 2)}}});
  s.algorithms = {make_coin_algorithm("dh")};
  validate_structure(s);
  return s;
}

ProbabilisticStructure sensor_structure(int max_distance, int query_distance) {
  if (query_distance < 1) throw ModelError("query distance must be at least 1");
  if (max_distance < query_distance + 2)
    throw ModelError("max distance must be at least query distance + 2");
  ProbabilisticStructure s;
  s.agents = {"Robot"};
  std::string prop = "wall" + std::to_string(query_distance);
  s.propositions = {prop};
  std::map<std::string, int> distances;
  for (int m = 1; m <= max_distance; ++m) {
    std::string id = "s" + std::to_string(m);
    s.states.push_back(State{id, {{prop, m <= query_distance}}, {"l0"}, {{}}});
    distances[id] = m;
  }
  s.derand = product_space({{{"-1", Rat(1, 4)}, {"0", Rat(1, 2)}, {"+1", Rat(1, 4)}}});
  s.algorithms = {make_sensor_algorithm(prop, query_distance, std::move(distances))};
  validate_structure(s);
  return s;
}

ProbabilisticStructure primality_structure(int n) {
  if (n <= 2) throw ModelError("primality structures need n > 2");
  ProbabilisticStructure s;
  s.agents = {"Tester"};
  s.propositions = {"prime"};
  s.states.push_back(State{"sp", {{"prime", true}}, {"l0"}, {{}}});
  std::map<std::string, int> witnesses;
  for (int w = n / 2 + 1; w <= n; ++w) {
    std::string id = "sc" + std::to_string(w);
    s.states.push_back(State{id, {{"prime", false}}, {"l0"}, {{}}});
    witnesses[id] = w;
  }
  std::vector<std::pair<std::string, Rat>> marginal;
  for (int a = 1; a <= n; ++a) marginal.emplace_back(std::to_string(a), Rat(1, n));
  s.derand = product_space({marginal});
  s.algorithms = {make_witness_algorithm("prime", n, std::move(witnesses))};
  validate_structure(s);
  return s;
}

namespace {

ProbabilisticStructure two_world_table(const std::vector<Answer>& yes_world,
                                       const std::vector<Answer>& no_world) {
  ProbabilisticStructure s;
  s.agents = {"Machine"};
  s.propositions = {"p"};
  s.states = {State{"sn", {{"p", false}}, {"l0"}, {{}}},
              State{"sy", {{"p", true}}, {"l0"}, {{}}}};
  std::vector<std::pair<std::string, Rat>> marginal;
  size_t nt = yes_world.size();
  std::map<TableKey, Answer> entries;
  std::string p = print_formula(f_prop("p"));
  std::string np = print_formula(f_not(f_prop("p")));
  for (size_t t = 0; t < nt; ++t) {
    std::string token = "t" + std::to_string(t);
    marginal.emplace_back(token, Rat(1, static_cast<long>(nt)));
    entries[{p, "sy", token}] = yes_world[t];
    entries[{p, "sn", token}] = no_world[t];
    entries[{np, "sy", token}] = flip(yes_world[t]);
    entries[{np, "sn", token}] = flip(no_world[t]);
  }
  s.derand = product_space({marginal});
  s.algorithms = {make_table_algorithm(std::move(entries), Answer::Unknown)};
  validate_structure(s);
  return s;
}

}  // namespace

ProbabilisticStructure rp_structure() {
  return two_world_table({Answer::Yes, Answer::No}, {Answer::No, Answer::No});
}

ProbabilisticStructure bpp_structure() {
  return two_world_table({Answer::Yes, Answer::Yes, Answer::Yes, Answer::No},
                         {Answer::Yes, Answer::No, Answer::No, Answer::No});
}

ProbabilisticStructure guess_structure(const KeySpace& keys, std::vector<MessageTerm> received,
                                       std::vector<std::string> initkeys, int r) {
  if (r < 0) throw ModelError("guess count must be nonnegative");
  ProbabilisticStructure s;
  s.agents = {"Eve"};
  s.keys = keys;
  for (auto& m : received) m = normalize_message(m, keys);
  s.states = {State{"s0", {}, {"eve"}, {std::move(received)}}};
  if (r == 0) {
    s.derand.points = {Point{{"t"}, Rat(1)}};
    s.algorithms = {make_dy_algorithm(1, std::move(initkeys), keys)};
  } else {
    size_t n = keys.size();
    if (n == 0) throw ModelError("random guessing needs a nonempty key space");
    Rat total(1);
    for (int i = 0; i < r; ++i) total *= Rat(static_cast<long>(n));
    std::vector<size_t> odo(static_cast<size_t>(r), 0);
    while (true) {
      s.derand.points.push_back(Point{{guess_token(odo)}, 1 / total});
      size_t d = odo.size();
      while (d > 0) {
        if (++odo[d - 1] < n) break;
        odo[d - 1] = 0;
        --d;
      }
      if (d == 0) break;
    }
    s.algorithms = {make_dy_rg_algorithm(1, r, std::move(initkeys), keys)};
  }
  validate_structure(s);
  return s;
}

// ---------------------------------------------------------------------------
// Seeded random structures

ProbabilisticStructure random_structure(uint64_t seed, const RandomStructureParams& params) {
  std::mt19937_64 rng(seed);
  auto below = [&rng](size_t n) { return static_cast<size_t>(rng() % n); };
  auto clamp = [](int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); };

  size_t n_states = static_cast<size_t>(clamp(params.n_states, 1, 6));
  size_t n_agents = static_cast<size_t>(clamp(params.n_agents, 1, 2));
  size_t n_tokens = static_cast<size_t>(clamp(params.n_tokens, 1, 4));
  size_t n_props = static_cast<size_t>(clamp(params.n_props, 1, 3));

  ProbabilisticStructure s;
  for (size_t a = 0; a < n_agents; ++a) s.agents.push_back("A" + std::to_string(a + 1));
  for (size_t p = 0; p < n_props; ++p) s.propositions.push_back("p" + std::to_string(p));

  // Label pool size 1 or 2 per agent: sometimes everything is blurred
  // together, sometimes the agent can tell two clusters apart.
  std::vector<size_t> pool(n_agents);
  for (size_t a = 0; a < n_agents; ++a) pool[a] = 1 + below(2);

  for (size_t i = 0; i < n_states; ++i) {
    State st;
    st.id = "s" + std::to_string(i);
    for (const auto& p : s.propositions) st.valuation[p] = below(2) == 1;
    for (size_t a = 0; a < n_agents; ++a)
      st.locals.push_back("l" + std::to_string(below(pool[a])));
    st.received.resize(n_agents);
    s.states.push_back(std::move(st));
  }

  // Joint distribution over the full token grid, with integer weights so the
  // measure is exact and everywhere positive. Correlation is deliberate.
  std::vector<std::vector<std::string>> tuples{{}};
  for (size_t a = 0; a < n_agents; ++a) {
    std::vector<std::vector<std::string>> next;
    for (const auto& t : tuples)
      for (size_t k = 0; k < n_tokens; ++k) {
        auto u = t;
        u.push_back("t" + std::to_string(k));
        next.push_back(std::move(u));
      }
    tuples = std::move(next);
  }
  std::vector<long> weights;
  long total = 0;
  for (size_t i = 0; i < tuples.size(); ++i) {
    weights.push_back(1 + static_cast<long>(below(6)));
    total += weights.back();
  }
  for (size_t i = 0; i < tuples.size(); ++i)
    s.derand.points.push_back(Point{tuples[i], Rat(weights[i], total)});

  auto draw = [&](bool complete) {
    if (complete) return below(2) == 0 ? Answer::Yes : Answer::No;
    size_t k = below(3);
    return k == 0 ? Answer::Yes : (k == 1 ? Answer::No : Answer::Unknown);
  };

  for (size_t a = 0; a < n_agents; ++a) {
    std::map<TableKey, Answer> entries;
    bool weak_negation = below(2) == 0;
    for (const auto& prop : s.propositions) {
      std::string q = print_formula(f_prop(prop));
      std::string nq = print_formula(f_not(f_prop(prop)));
      for (const auto& st : s.states) {
        std::vector<Answer> base(n_tokens), neg(n_tokens);
        if (params.deterministic)
          std::fill(base.begin(), base.end(), draw(params.force_complete));
        else
          for (auto& b : base) b = draw(params.force_complete);
        if (params.force_respect_negation)
          for (size_t t = 0; t < n_tokens; ++t)
            neg[t] = weak_negation ? flip(base[t])
                                   : (base[t] == Answer::Yes ? Answer::No : Answer::Yes);
        else if (params.deterministic)
          std::fill(neg.begin(), neg.end(), draw(params.force_complete));
        else
          for (auto& x : neg) x = draw(params.force_complete);
        for (size_t t = 0; t < n_tokens; ++t) {
          std::string token = "t" + std::to_string(t);
          entries[{q, st.id, token}] = base[t];
          entries[{nq, st.id, token}] = neg[t];
        }
      }
    }
    s.algorithms.push_back(make_table_algorithm(std::move(entries), Answer::Unknown));
  }

  validate_structure(s);
  return s;
}

}  // namespace knowmc
