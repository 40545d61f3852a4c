#include <knowmc/dolevyao.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

namespace knowmc {

bool msg_contains(const MessageTerm& m, const MessageTerm& outer) {
  if (m == outer) return true;
  switch (outer.kind()) {
    case MessageTerm::Kind::Plain:
    case MessageTerm::Kind::Key:
      return false;
    case MessageTerm::Kind::Concat:
      return msg_contains(m, outer.left()) || msg_contains(m, outer.right());
    case MessageTerm::Kind::Encrypt:
      return msg_contains(m, outer.body());
  }
  throw std::logic_error("unreachable message kind");
}

namespace {

// Worklist decomposition saturation: split concatenations, open encryptions
// whose inverse key has been obtained, unlock parked encryptions when their
// key turns up later. `capability` names keys usable for decryption without
// being possessed content (guessed keys); they never enter the closure.
std::set<MessageTerm> decomposition_closure(const std::vector<MessageTerm>& start,
                                            const KeySpace& keys,
                                            const std::set<std::string>* capability = nullptr) {
  std::set<MessageTerm> have;
  std::map<std::string, std::vector<MessageTerm>> locked;  // needed key -> encryptions
  std::vector<MessageTerm> work;
  for (const auto& t : start) work.push_back(normalize_message(t, keys));
  while (!work.empty()) {
    MessageTerm t = work.back();
    work.pop_back();
    if (!have.insert(t).second) continue;
    switch (t.kind()) {
      case MessageTerm::Kind::Plain:
        break;
      case MessageTerm::Kind::Key:
        for (const auto& enc : locked[t.name()]) work.push_back(enc.body());
        break;
      case MessageTerm::Kind::Concat:
        work.push_back(t.left());
        work.push_back(t.right());
        break;
      case MessageTerm::Kind::Encrypt: {
        if (!keys.has(t.key())) break;  // undecryptable: key outside the space
        const std::string& need = keys.inverse(t.key());
        if (have.count(m_key(need)) || (capability && capability->count(need)))
          work.push_back(t.body());
        else
          locked[need].push_back(t);
        break;
      }
    }
  }
  return have;
}

}  // namespace

bool derives(const std::vector<MessageTerm>& hypotheses, const MessageTerm& goal,
             const KeySpace& keys) {
  return decomposition_closure(hypotheses, keys).count(normalize_message(goal, keys)) != 0;
}

std::vector<std::string> keysof(const AdversaryLocal& local, const KeySpace& keys) {
  std::vector<MessageTerm> start;
  for (const auto& k : local.initkeys) start.push_back(m_key(k));
  for (const auto& m : local.received) start.push_back(m);
  std::set<std::string> found;
  for (const auto& t : decomposition_closure(start, keys))
    if (t.kind() == MessageTerm::Kind::Key) found.insert(t.name());
  std::vector<std::string> out;
  for (const auto& name : keys.names())
    if (found.count(name)) out.push_back(name);
  return out;
}

Answer dy_check(const MessageTerm& goal, const AdversaryLocal& local, const KeySpace& keys,
                const std::vector<std::string>& guessed) {
  MessageTerm g = normalize_message(goal, keys);
  if (g.kind() == MessageTerm::Kind::Key &&
      std::find(local.initkeys.begin(), local.initkeys.end(), g.name()) != local.initkeys.end())
    return Answer::Yes;
  // keysof keys are possessed (they decompose out of the local state) and so
  // join the hypotheses; guessed keys only extend decryption capability.
  // Possession of the goal itself must come from the local state.
  std::vector<std::string> usable = keysof(local, keys);
  std::set<std::string> capability(guessed.begin(), guessed.end());
  for (const auto& received : local.received) {
    std::vector<MessageTerm> hyps{received};
    for (const auto& k : usable) hyps.push_back(m_key(k));
    if (decomposition_closure(hyps, keys, &capability).count(g)) return Answer::Yes;
  }
  return Answer::Unknown;
}

// ---------------------------------------------------------------------------
// Algorithm kinds

namespace {

class DyAlgorithm : public KnowledgeAlgorithm {
 public:
  DyAlgorithm(int agent, std::vector<std::string> initkeys, KeySpace keys)
      : agent_(agent), initkeys_(std::move(initkeys)), keys_(std::move(keys)) {}

  Answer eval(const Formula& query, const std::string&, const State& state,
              const std::string&) const override {
    if (query.kind() != Formula::Kind::HasMsg || query.agent() != agent_)
      return Answer::Unknown;
    AdversaryLocal local{initkeys_, state.received[static_cast<size_t>(agent_ - 1)]};
    return dy_check(query.msg(), local, keys_);
  }

  std::string kind() const override { return "dy"; }

  nlohmann::json params_json() const override {
    return {{"initkeys", initkeys_}};
  }

  const std::vector<std::string>* initial_keys() const override { return &initkeys_; }

 private:
  int agent_;
  std::vector<std::string> initkeys_;
  KeySpace keys_;
};

class DyRgAlgorithm : public KnowledgeAlgorithm {
 public:
  DyRgAlgorithm(int agent, int r, std::vector<std::string> initkeys, KeySpace keys)
      : agent_(agent), r_(r), initkeys_(std::move(initkeys)), keys_(std::move(keys)) {}

  Answer eval(const Formula& query, const std::string&, const State& state,
              const std::string& token) const override {
    if (query.kind() != Formula::Kind::HasMsg || query.agent() != agent_)
      return Answer::Unknown;
    AdversaryLocal local{initkeys_, state.received[static_cast<size_t>(agent_ - 1)]};
    return dy_check(query.msg(), local, keys_, decode(token));
  }

  std::string kind() const override { return "dy-rg"; }

  nlohmann::json params_json() const override {
    return {{"r", r_}, {"initkeys", initkeys_}};
  }

  const std::vector<std::string>* initial_keys() const override { return &initkeys_; }

 private:
  std::vector<std::string> decode(const std::string& token) const {
    std::vector<std::string> parts;
    size_t pos = 0;
    while (true) {
      size_t end = token.find(',', pos);
      parts.push_back(end == std::string::npos ? token.substr(pos)
                                               : token.substr(pos, end - pos));
      if (end == std::string::npos) break;
      pos = end + 1;
    }
    if (parts.size() != static_cast<size_t>(r_))
      throw EvalError("guess token '" + token + "' must hold exactly " + std::to_string(r_) +
                      " comma-separated indices");
    std::vector<std::string> guessed;
    for (const auto& part : parts) {
      if (part.empty() ||
          !std::all_of(part.begin(), part.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw EvalError("malformed guess token '" + token + "'");
      size_t idx = std::stoul(part);
      if (idx >= keys_.size())
        throw EvalError("guess index " + part + " out of range for " +
                        std::to_string(keys_.size()) + " keys");
      guessed.push_back(keys_.names()[idx]);
    }
    return guessed;
  }

  int agent_;
  int r_;
  std::vector<std::string> initkeys_;
  KeySpace keys_;
};

}  // namespace

AlgorithmPtr make_dy_algorithm(int agent, std::vector<std::string> initkeys, KeySpace keys) {
  if (agent < 1) throw ModelError("agent position must be 1-based");
  for (const auto& k : initkeys)
    if (!keys.has(k)) throw ModelError("initkey '" + k + "' is not a declared key");
  return std::make_shared<DyAlgorithm>(agent, std::move(initkeys), std::move(keys));
}

AlgorithmPtr make_dy_rg_algorithm(int agent, int r, std::vector<std::string> initkeys,
                                  KeySpace keys) {
  if (agent < 1) throw ModelError("agent position must be 1-based");
  if (r < 1) throw ModelError("guess count r must be at least 1");
  if (keys.size() == 0) throw ModelError("random guessing needs a nonempty key space");
  for (const auto& k : initkeys)
    if (!keys.has(k)) throw ModelError("initkey '" + k + "' is not a declared key");
  return std::make_shared<DyRgAlgorithm>(agent, r, std::move(initkeys), std::move(keys));
}

std::string guess_token(const std::vector<size_t>& indices) {
  std::string out;
  for (size_t i = 0; i < indices.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(indices[i]);
  }
  return out;
}

namespace {

void collect_key_names(const MessageTerm& m, std::set<std::string>* out) {
  switch (m.kind()) {
    case MessageTerm::Kind::Plain:
      return;
    case MessageTerm::Kind::Key:
      out->insert(m.name());
      return;
    case MessageTerm::Kind::Concat:
      collect_key_names(m.left(), out);
      collect_key_names(m.right(), out);
      return;
    case MessageTerm::Kind::Encrypt:
      out->insert(m.key());
      collect_key_names(m.body(), out);
      return;
  }
}

}  // namespace

size_t count_used_keys(const std::vector<MessageTerm>& received, const KeySpace& keys) {
  std::set<std::string> names;
  for (const auto& m : received) collect_key_names(m, &names);
  size_t count = 0;
  for (const auto& n : names)
    if (keys.has(n)) ++count;
  return count;
}

GuessBound prop4_bound(int r, size_t used_keys, size_t total_keys) {
  if (total_keys == 0) throw ModelError("empty key space");
  if (r < 0) throw ModelError("negative guess count");
  Rat ratio(used_keys, total_keys);
  Rat miss = 1 - ratio;
  Rat exact(1);
  for (int i = 0; i < r; ++i) exact *= miss;
  GuessBound b;
  b.hypothesis_ok = ratio < Rat(1, 2);
  b.exact_miss = exact;
  b.bound = 1.0 - std::exp(-2.0 * r * to_double(ratio));
  return b;
}

}  // namespace knowmc
