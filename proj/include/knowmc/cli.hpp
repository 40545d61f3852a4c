#pragma once

#include <knowmc/rational.hpp>
#include <knowmc/scenarios.hpp>

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace knowmc {

// ---------------------------------------------------------------------------
// Command outcomes
//
// Every command produces both a human report and a machine report; the driver
// prints one of them and exits with `exit_code`. Convention: 0 when the asked
// property holds (formula valid, message derived, audit clean), 1 when it was
// falsified, and errors escape as exceptions which the driver maps to 2.

struct Outcome {
  int exit_code = 0;
  std::string text;       // human-readable, newline-terminated
  nlohmann::json data;    // machine-readable equivalent
};

// check MODEL FORMULA [--state ID [--point N]]
// No state: validity over every (state, point), witness on failure. A state
// alone: truth at each point plus the truth mass. State and point: one verdict.
struct CheckOptions {
  std::string model_path;
  std::string formula;
  std::optional<std::string> state;
  std::optional<size_t> point;
};
Outcome cmd_check(const CheckOptions& o);

// evidence MODEL FORMULA [--agent N] [--label L]
// Evidence spaces the agent's algorithm induces on the question, per local
// label (all labels unless one is given): hypotheses with their measures, and
// weights / weight sets per observation.
struct EvidenceOptions {
  std::string model_path;
  std::string formula;
  int agent = 1;
  std::optional<std::string> label;
};
Outcome cmd_evidence(const EvidenceOptions& o);

// audit MODEL FORMULA [--agent N] [--alpha A --beta B]
// Tight reliability pair, completeness and negation classification, the
// duality cross-check where it applies, and the evidence-bound clause table.
// With a pair, also the (alpha, beta)-reliability verdict.
struct AuditOptions {
  std::string model_path;
  std::string formula;
  int agent = 1;
  std::optional<Rat> alpha;
  std::optional<Rat> beta;
};
Outcome cmd_audit(const AuditOptions& o);

// dy GOAL (--model M --state S [--agent N] | --key K... [--initkey K...] [--recv MSG...])
//    [--guesses R] [--enumerate]
// Intruder derivability for one goal message. Model mode reads the agent's
// interceptions and initial keys at the given state; inline mode builds the
// local state from the flags. With guesses, enumerates every tuple of R
// uniform key guesses and compares the exact success mass against the
// guessing bound.
struct DyOptions {
  std::string model_path;                // empty: inline mode
  int agent = 1;
  std::optional<std::string> state;
  std::vector<std::string> keys;         // "name" or "name:inverse"
  std::vector<std::string> initkeys;
  std::vector<std::string> received;
  std::string goal;
  int guesses = 0;
  bool enumerate = false;
};
Outcome cmd_dy(const DyOptions& o);

// scenario NAME [params] [-o FILE]
// Emits a built-in model as JSON (stdout or FILE). Names: coin, sensor,
// primality, rp, bpp, guess, random.
struct ScenarioOptions {
  std::string name;
  int sensor_max = 12;
  int sensor_query = 10;
  int primality_n = 15;
  std::vector<std::string> keys;         // guess scenario
  std::vector<std::string> initkeys;
  std::vector<std::string> received;
  int guesses = 1;
  uint64_t seed = 1;                     // random scenario
  RandomStructureParams random_params;
  std::string out_path;                  // empty: print the model
};
Outcome cmd_scenario(const ScenarioOptions& o);

}  // namespace knowmc
