#pragma once

#include <knowmc/rational.hpp>
#include <knowmc/syntax.hpp>

#include <json.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace knowmc {

// ---------------------------------------------------------------------------
// Answers

enum class Answer { Yes, No, Unknown };

// "Yes", "No", "?"
std::string answer_text(Answer a);
Answer answer_from_text(const std::string& s);  // throws ModelError

// ---------------------------------------------------------------------------
// States

struct State {
  std::string id;
  std::map<std::string, bool> valuation;            // total over the propositions
  std::vector<std::string> locals;                  // per agent, aligned with agents
  std::vector<std::vector<MessageTerm>> received;   // per agent, normalized
};

// ---------------------------------------------------------------------------
// Derandomizers
//
// A finite joint space of token tuples with an exact measure: every point has
// positive probability and the probabilities sum to exactly 1. Points keep a
// stable index; counterexamples and the CLI refer to points by that index.

struct Point {
  std::vector<std::string> tokens;  // per agent
  Rat prob;
};

struct DerandomizerSpace {
  std::vector<Point> points;
};

// Expands independent per-agent distributions into the joint product space.
// The first agent varies slowest. Throws ModelError unless each marginal has
// unique tokens, positive probabilities, and exact sum 1.
DerandomizerSpace product_space(
    const std::vector<std::vector<std::pair<std::string, Rat>>>& marginals);

// ---------------------------------------------------------------------------
// Knowledge algorithms
//
// Deterministic and total: (query, local label, state, own token) -> answer.
// The state parameter allows kinds that read per-state data their params
// declare (the built-in kinds read only valuation flags, per-state numeric
// tables, and received messages).

class KnowledgeAlgorithm {
 public:
  virtual ~KnowledgeAlgorithm() = default;
  virtual Answer eval(const Formula& query, const std::string& label, const State& state,
                      const std::string& token) const = 0;
  virtual std::string kind() const = 0;
  // Parameters in the model-file form; {"kind": kind(), ...params} reloads to
  // an equivalent algorithm.
  virtual nlohmann::json params_json() const = 0;
  // Keys the owner holds from the start (Dolev-Yao kinds); these count as
  // possessed for has_i alongside the received messages.
  virtual const std::vector<std::string>* initial_keys() const { return nullptr; }
};

using AlgorithmPtr = std::shared_ptr<const KnowledgeAlgorithm>;

// ---------------------------------------------------------------------------
// Structures

struct ProbabilisticStructure {
  std::vector<std::string> agents;        // formula indices are 1-based positions
  std::vector<std::string> propositions;
  std::vector<State> states;
  DerandomizerSpace derand;
  std::vector<AlgorithmPtr> algorithms;   // per agent
  KeySpace keys;

  size_t n_agents() const { return agents.size(); }
  const State& state(const std::string& id) const;  // throws ModelError
  size_t state_index(const std::string& id) const;  // throws ModelError
  // Validates the agent index from a formula (1-based); returns it 0-based.
  size_t agent_index(int agent) const;
};

// Checks every structural invariant (unique ids, total valuations, aligned
// locals/received, positive measure summing to 1, an algorithm per agent,
// normalized messages over declared keys). Throws ModelError.
void validate_structure(const ProbabilisticStructure& s);

// States agent i cannot distinguish from s (same local label, s included),
// sorted by state id.
std::vector<const State*> indistinguishable(const ProbabilisticStructure& s, int agent,
                                            const State& at);

// Dispatches to agent i's algorithm with its local label and token.
Answer run_algorithm(const ProbabilisticStructure& s, int agent, const Formula& query,
                     const State& at, const Point& v);

// ---------------------------------------------------------------------------
// Model files
//
// JSON schema (probabilities are exact-rational strings such as "1/2"):
// {
//   "agents": ["Bob"],
//   "propositions": ["dh"],
//   "keys": [{"name": "k", "inverse": "kinv"}],          // optional; inverse
//                                                        // defaults to name
//   "states": [{"id": "s1", "valuation": {"dh": true},
//               "locals": {"Bob": "l0"},
//               "received": {"Bob": ["{m}_k"]}}],        // received optional
//   "derandomizers": {"independent": {"Bob": [{"token": "H", "prob": "1/2"},
//                                             {"token": "T", "prob": "1/2"}]}}
//     or            {"joint": [{"tokens": ["H"], "prob": "1/2"}, ...]},
//   "algorithms": {"Bob": {"kind": "coin", "prop": "dh"}}
// }
// Independent derandomizers expand to the joint product space (first agent
// slowest); exports always use the joint form.

ProbabilisticStructure load_structure(const nlohmann::json& doc);
ProbabilisticStructure load_structure_text(const std::string& text);
ProbabilisticStructure load_structure_file(const std::string& path);
nlohmann::json structure_to_json(const ProbabilisticStructure& s);

}  // namespace knowmc
