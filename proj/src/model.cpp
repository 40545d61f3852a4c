#include <knowmc/model.hpp>

#include <knowmc/dolevyao.hpp>
#include <knowmc/scenarios.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace knowmc {

using nlohmann::json;

std::string answer_text(Answer a) {
  switch (a) {
    case Answer::Yes: return "Yes";
    case Answer::No: return "No";
    case Answer::Unknown: return "?";
  }
  throw std::logic_error("unreachable answer");
}

Answer answer_from_text(const std::string& s) {
  if (s == "Yes") return Answer::Yes;
  if (s == "No") return Answer::No;
  if (s == "?" || s == "Unknown") return Answer::Unknown;
  throw ModelError("unknown answer '" + s + "' (expected Yes, No, or ?)");
}

// ---------------------------------------------------------------------------
// Derandomizers

DerandomizerSpace product_space(
    const std::vector<std::vector<std::pair<std::string, Rat>>>& marginals) {
  DerandomizerSpace space;
  space.points.push_back(Point{{}, Rat(1)});
  for (size_t ai = 0; ai < marginals.size(); ++ai) {
    const auto& marginal = marginals[ai];
    if (marginal.empty())
      throw ModelError("agent " + std::to_string(ai + 1) + " has an empty token distribution");
    std::set<std::string> seen;
    Rat sum = 0;
    for (const auto& [token, prob] : marginal) {
      if (token.empty()) throw ModelError("empty derandomizer token");
      if (!seen.insert(token).second)
        throw ModelError("duplicate derandomizer token '" + token + "'");
      if (prob <= 0)
        throw ModelError("token '" + token + "' has nonpositive probability " + format_rat(prob));
      sum += prob;
    }
    if (sum != 1)
      throw ModelError("token probabilities for agent " + std::to_string(ai + 1) + " sum to " +
                       format_rat(sum) + ", not 1");
    std::vector<Point> next;
    next.reserve(space.points.size() * marginal.size());
    for (const auto& p : space.points) {
      for (const auto& [token, prob] : marginal) {
        Point q = p;
        q.tokens.push_back(token);
        q.prob *= prob;
        next.push_back(std::move(q));
      }
    }
    space.points = std::move(next);
  }
  return space;
}

// ---------------------------------------------------------------------------
// Structure helpers

const State& ProbabilisticStructure::state(const std::string& id) const {
  return states[state_index(id)];
}

size_t ProbabilisticStructure::state_index(const std::string& id) const {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i].id == id) return i;
  throw ModelError("no state with id '" + id + "'");
}

size_t ProbabilisticStructure::agent_index(int agent) const {
  if (agent < 1 || static_cast<size_t>(agent) > agents.size())
    throw ModelError("agent index " + std::to_string(agent) + " out of range 1.." +
                     std::to_string(agents.size()));
  return static_cast<size_t>(agent - 1);
}

void validate_structure(const ProbabilisticStructure& s) {
  if (s.agents.empty()) throw ModelError("a structure needs at least one agent");
  std::set<std::string> agent_names;
  for (const auto& a : s.agents) {
    if (a.empty()) throw ModelError("empty agent name");
    if (!agent_names.insert(a).second) throw ModelError("duplicate agent name '" + a + "'");
  }
  std::set<std::string> props;
  for (const auto& p : s.propositions) {
    if (!props.insert(p).second) throw ModelError("duplicate proposition '" + p + "'");
    try {
      f_prop(p);
    } catch (const EvalError& e) {
      throw ModelError(std::string("bad proposition name: ") + e.what());
    }
  }
  if (s.states.empty()) throw ModelError("a structure needs at least one state");
  std::set<std::string> ids;
  for (const auto& st : s.states) {
    if (st.id.empty()) throw ModelError("empty state id");
    if (!ids.insert(st.id).second) throw ModelError("duplicate state id '" + st.id + "'");
    if (st.valuation.size() != props.size())
      throw ModelError("state '" + st.id + "' valuation does not match the proposition list");
    for (const auto& [p, _] : st.valuation)
      if (!props.count(p))
        throw ModelError("state '" + st.id + "' assigns undeclared proposition '" + p + "'");
    if (st.locals.size() != s.agents.size())
      throw ModelError("state '" + st.id + "' has " + std::to_string(st.locals.size()) +
                       " local labels for " + std::to_string(s.agents.size()) + " agents");
    for (const auto& l : st.locals)
      if (l.empty()) throw ModelError("state '" + st.id + "' has an empty local label");
    if (st.received.size() != s.agents.size())
      throw ModelError("state '" + st.id + "' received lists are not aligned with the agents");
    for (const auto& msgs : st.received)
      for (const auto& m : msgs)
        if (normalize_message(m, s.keys) != m)
          throw ModelError("state '" + st.id + "' holds a non-normalized message " +
                           print_message(m));
  }
  if (s.derand.points.empty()) throw ModelError("the derandomizer space is empty");
  Rat sum = 0;
  std::set<std::vector<std::string>> tuples;
  for (const auto& pt : s.derand.points) {
    if (pt.tokens.size() != s.agents.size())
      throw ModelError("a derandomizer point is not aligned with the agents");
    for (const auto& t : pt.tokens)
      if (t.empty()) throw ModelError("empty derandomizer token");
    if (!tuples.insert(pt.tokens).second) throw ModelError("duplicate derandomizer point");
    if (pt.prob <= 0) throw ModelError("derandomizer point with nonpositive probability");
    sum += pt.prob;
  }
  if (sum != 1)
    throw ModelError("derandomizer probabilities sum to " + format_rat(sum) + ", not 1");
  if (s.algorithms.size() != s.agents.size())
    throw ModelError("every agent needs a knowledge algorithm");
  for (const auto& alg : s.algorithms)
    if (!alg) throw ModelError("null knowledge algorithm");
}

std::vector<const State*> indistinguishable(const ProbabilisticStructure& s, int agent,
                                            const State& at) {
  size_t idx = s.agent_index(agent);
  const std::string& label = at.locals[idx];
  std::vector<const State*> out;
  for (const auto& st : s.states)
    if (st.locals[idx] == label) out.push_back(&st);
  std::sort(out.begin(), out.end(),
            [](const State* a, const State* b) { return a->id < b->id; });
  return out;
}

Answer run_algorithm(const ProbabilisticStructure& s, int agent, const Formula& query,
                     const State& at, const Point& v) {
  size_t idx = s.agent_index(agent);
  return s.algorithms[idx]->eval(query, at.locals[idx], at, v.tokens[idx]);
}

// ---------------------------------------------------------------------------
// Model files

namespace {

const json& need(const json& o, const char* field, const std::string& ctx) {
  if (!o.is_object()) throw ModelError(ctx + " must be a JSON object");
  auto it = o.find(field);
  if (it == o.end()) throw ModelError(ctx + " is missing \"" + field + "\"");
  return *it;
}

std::string need_string(const json& o, const char* field, const std::string& ctx) {
  const json& v = need(o, field, ctx);
  if (!v.is_string()) throw ModelError(ctx + " field \"" + field + "\" must be a string");
  return v.get<std::string>();
}

int need_int(const json& o, const char* field, const std::string& ctx) {
  const json& v = need(o, field, ctx);
  if (!v.is_number_integer())
    throw ModelError(ctx + " field \"" + field + "\" must be an integer");
  return v.get<int>();
}

Rat need_prob(const json& o, const char* field, const std::string& ctx) {
  const json& v = need(o, field, ctx);
  if (!v.is_string())
    throw ModelError(ctx + " field \"" + field + "\" must be an exact-rational string");
  try {
    return parse_rat(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ModelError(ctx + ": " + e.what());
  }
}

std::vector<std::string> string_list(const json& v, const std::string& ctx) {
  if (!v.is_array()) throw ModelError(ctx + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ModelError(ctx + " must contain only strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::map<std::string, int> int_map(const json& v, const std::string& ctx) {
  if (!v.is_object()) throw ModelError(ctx + " must be an object mapping state ids to integers");
  std::map<std::string, int> out;
  for (const auto& [k, e] : v.items()) {
    if (!e.is_number_integer()) throw ModelError(ctx + "[\"" + k + "\"] must be an integer");
    out[k] = e.get<int>();
  }
  return out;
}

AlgorithmPtr make_algorithm(const json& spec, int agent_pos, const KeySpace& ks,
                            const std::string& ctx) {
  std::string kind = need_string(spec, "kind", ctx);
  if (kind == "table") {
    Answer fallback = Answer::Unknown;
    if (spec.contains("default")) fallback = answer_from_text(need_string(spec, "default", ctx));
    std::map<TableKey, Answer> entries;
    const json& rows = need(spec, "entries", ctx);
    if (!rows.is_array()) throw ModelError(ctx + " \"entries\" must be an array");
    for (const auto& row : rows) {
      std::string query = need_string(row, "query", ctx + " entry");
      // canonicalize the query text so lookups by printed formula hit
      Formula q = parse_formula(query, &ks);
      entries[{print_formula(q), need_string(row, "state", ctx + " entry"),
               need_string(row, "token", ctx + " entry")}] =
          answer_from_text(need_string(row, "answer", ctx + " entry"));
    }
    return make_table_algorithm(std::move(entries), fallback);
  }
  if (kind == "coin") return make_coin_algorithm(need_string(spec, "prop", ctx));
  if (kind == "sensor")
    return make_sensor_algorithm(need_string(spec, "prop", ctx), need_int(spec, "threshold", ctx),
                                 int_map(need(spec, "distances", ctx), ctx + " \"distances\""));
  if (kind == "witness-prime")
    return make_witness_algorithm(need_string(spec, "prop", ctx), need_int(spec, "n", ctx),
                                  int_map(need(spec, "witnesses", ctx), ctx + " \"witnesses\""));
  if (kind == "dy" || kind == "dy-rg") {
    std::vector<std::string> initkeys;
    if (spec.contains("initkeys"))
      initkeys = string_list(spec.at("initkeys"), ctx + " \"initkeys\"");
    for (const auto& k : initkeys)
      if (!ks.has(k)) throw ModelError(ctx + ": initkey '" + k + "' is not a declared key");
    if (kind == "dy") return make_dy_algorithm(agent_pos, std::move(initkeys), ks);
    int r = need_int(spec, "r", ctx);
    if (r < 1) throw ModelError(ctx + ": guess count r must be at least 1");
    if (ks.size() == 0) throw ModelError(ctx + ": dy-rg needs a nonempty key space");
    return make_dy_rg_algorithm(agent_pos, r, std::move(initkeys), ks);
  }
  throw ModelError(ctx + ": unknown algorithm kind '" + kind +
                   "' (known: table, coin, sensor, witness-prime, dy, dy-rg)");
}

}  // namespace

ProbabilisticStructure load_structure(const json& doc) {
  if (!doc.is_object()) throw ModelError("the model file must be a JSON object");
  ProbabilisticStructure s;

  s.agents = string_list(need(doc, "agents", "model"), "\"agents\"");
  s.propositions = string_list(need(doc, "propositions", "model"), "\"propositions\"");

  if (doc.contains("keys")) {
    const json& keys = doc.at("keys");
    if (!keys.is_array()) throw ModelError("\"keys\" must be an array");
    std::vector<std::pair<std::string, std::string>> decls;
    for (const auto& k : keys) {
      std::string name = need_string(k, "name", "key declaration");
      std::string inv = k.contains("inverse") ? need_string(k, "inverse", "key declaration") : name;
      decls.emplace_back(name, inv);
    }
    s.keys = KeySpace::make(decls);
  }

  const json& states = need(doc, "states", "model");
  if (!states.is_array()) throw ModelError("\"states\" must be an array");
  for (const auto& js : states) {
    State st;
    st.id = need_string(js, "id", "state");
    const std::string ctx = "state '" + st.id + "'";
    const json& val = need(js, "valuation", ctx);
    if (!val.is_object()) throw ModelError(ctx + " \"valuation\" must be an object");
    for (const auto& [p, b] : val.items()) {
      if (!b.is_boolean()) throw ModelError(ctx + " valuation of '" + p + "' must be a boolean");
      st.valuation[p] = b.get<bool>();
    }
    const json& locals = need(js, "locals", ctx);
    for (const auto& [a, _] : locals.items())
      if (std::find(s.agents.begin(), s.agents.end(), a) == s.agents.end())
        throw ModelError(ctx + " names unknown agent '" + a + "' in \"locals\"");
    for (const auto& agent : s.agents)
      st.locals.push_back(need_string(locals, agent.c_str(), ctx + " \"locals\""));
    st.received.resize(s.agents.size());
    if (js.contains("received")) {
      const json& recv = js.at("received");
      if (!recv.is_object()) throw ModelError(ctx + " \"received\" must be an object");
      for (const auto& [a, list] : recv.items()) {
        auto it = std::find(s.agents.begin(), s.agents.end(), a);
        if (it == s.agents.end())
          throw ModelError(ctx + " names unknown agent '" + a + "' in \"received\"");
        for (const auto& text : string_list(list, ctx + " received[\"" + a + "\"]")) {
          try {
            MessageTerm m = parse_message(text, &s.keys);
            st.received[static_cast<size_t>(it - s.agents.begin())].push_back(
                normalize_message(m, s.keys));
          } catch (const ParseError& e) {
            throw ModelError(ctx + " message \"" + text + "\": " + e.what());
          }
        }
      }
    }
    s.states.push_back(std::move(st));
  }

  const json& der = need(doc, "derandomizers", "model");
  bool has_ind = der.is_object() && der.contains("independent");
  bool has_joint = der.is_object() && der.contains("joint");
  if (has_ind == has_joint)
    throw ModelError("\"derandomizers\" needs exactly one of \"independent\" or \"joint\"");
  if (has_ind) {
    const json& ind = der.at("independent");
    for (const auto& [a, _] : ind.items())
      if (std::find(s.agents.begin(), s.agents.end(), a) == s.agents.end())
        throw ModelError("derandomizers name unknown agent '" + a + "'");
    std::vector<std::vector<std::pair<std::string, Rat>>> marginals;
    for (const auto& agent : s.agents) {
      const json& list = need(ind, agent.c_str(), "\"independent\" derandomizers");
      if (!list.is_array() || list.empty())
        throw ModelError("agent '" + agent + "' needs a nonempty token list");
      std::vector<std::pair<std::string, Rat>> marginal;
      for (const auto& e : list)
        marginal.emplace_back(need_string(e, "token", "token entry"),
                              need_prob(e, "prob", "token entry"));
      marginals.push_back(std::move(marginal));
    }
    s.derand = product_space(marginals);
  } else {
    const json& joint = der.at("joint");
    if (!joint.is_array() || joint.empty())
      throw ModelError("\"joint\" derandomizers must be a nonempty array");
    for (const auto& e : joint) {
      Point pt;
      pt.tokens = string_list(need(e, "tokens", "joint point"), "joint point \"tokens\"");
      if (pt.tokens.size() != s.agents.size())
        throw ModelError("a joint point lists " + std::to_string(pt.tokens.size()) +
                         " tokens for " + std::to_string(s.agents.size()) + " agents");
      pt.prob = need_prob(e, "prob", "joint point");
      s.derand.points.push_back(std::move(pt));
    }
  }

  const json& algs = need(doc, "algorithms", "model");
  for (const auto& [a, _] : algs.items())
    if (std::find(s.agents.begin(), s.agents.end(), a) == s.agents.end())
      throw ModelError("algorithms name unknown agent '" + a + "'");
  for (size_t i = 0; i < s.agents.size(); ++i) {
    const json& spec = need(algs, s.agents[i].c_str(), "\"algorithms\"");
    s.algorithms.push_back(make_algorithm(spec, static_cast<int>(i + 1), s.keys,
                                          "algorithm for '" + s.agents[i] + "'"));
  }

  validate_structure(s);
  return s;
}

ProbabilisticStructure load_structure_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("model file is not valid JSON: ") + e.what());
  }
  return load_structure(doc);
}

ProbabilisticStructure load_structure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_structure_text(buf.str());
}

nlohmann::json structure_to_json(const ProbabilisticStructure& s) {
  json doc;
  doc["agents"] = s.agents;
  doc["propositions"] = s.propositions;
  if (s.keys.size() > 0) {
    json keys = json::array();
    for (const auto& name : s.keys.names()) {
      const std::string& inv = s.keys.inverse(name);
      if (s.keys.index_of(inv) >= s.keys.index_of(name))
        keys.push_back({{"name", name}, {"inverse", inv}});
    }
    doc["keys"] = std::move(keys);
  }
  json states = json::array();
  for (const auto& st : s.states) {
    json js;
    js["id"] = st.id;
    js["valuation"] = st.valuation;
    json locals;
    for (size_t i = 0; i < s.agents.size(); ++i) locals[s.agents[i]] = st.locals[i];
    js["locals"] = std::move(locals);
    json recv;
    for (size_t i = 0; i < s.agents.size(); ++i) {
      if (st.received[i].empty()) continue;
      json list = json::array();
      for (const auto& m : st.received[i]) list.push_back(print_message(m));
      recv[s.agents[i]] = std::move(list);
    }
    if (!recv.is_null()) js["received"] = std::move(recv);
    states.push_back(std::move(js));
  }
  doc["states"] = std::move(states);
  json joint = json::array();
  for (const auto& pt : s.derand.points)
    joint.push_back({{"tokens", pt.tokens}, {"prob", format_rat(pt.prob)}});
  doc["derandomizers"] = {{"joint", std::move(joint)}};
  json algs;
  for (size_t i = 0; i < s.agents.size(); ++i) {
    json spec = s.algorithms[i]->params_json();
    spec["kind"] = s.algorithms[i]->kind();
    algs[s.agents[i]] = std::move(spec);
  }
  doc["algorithms"] = std::move(algs);
  return doc;
}

}  // namespace knowmc
