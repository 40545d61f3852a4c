#pragma once

#include <knowmc/dolevyao.hpp>
#include <knowmc/model.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace knowmc {

// ---------------------------------------------------------------------------
// Knowledge-algorithm kinds backing the built-in structures. Each flips its
// answer on the negated query (so the kinds below respect negation strongly)
// and returns "?" on queries it does not recognize.

// Finite lookup keyed by (printed query, state id, own token).
using TableKey = std::tuple<std::string, std::string, std::string>;
AlgorithmPtr make_table_algorithm(std::map<TableKey, Answer> entries, Answer fallback);

// Tosses the coin once: Yes when the coin is rigged (prop true at the state)
// or the token lands heads ("H"), No otherwise.
AlgorithmPtr make_coin_algorithm(std::string prop);

// Reads a distance sensor with +-1 noise: Yes iff actual + token <= threshold.
// `distances` maps state ids to the actual distance.
AlgorithmPtr make_sensor_algorithm(std::string prop, int threshold,
                                   std::map<std::string, int> distances);

// Picks witness candidate `token` in 1..n: at a prime state always Yes; at a
// composite state with w witnesses, No iff token <= w. `witnesses` maps
// composite state ids to w; absent ids count as prime.
AlgorithmPtr make_witness_algorithm(std::string prop, int n, std::map<std::string, int> witnesses);

// ---------------------------------------------------------------------------
// Built-in structures

// Two coins behind one observation: s1 rigged (dh), s2 fair, one agent who
// cannot tell them apart, a single fair toss as derandomizer.
ProbabilisticStructure coin_structure();

// Wall at distance 1..max_distance, sensor noise -1/0/+1 with probability
// 1/4, 1/2, 1/4, query "is the wall within query_distance". Requires
// max_distance >= query_distance + 2 so every answer profile is populated.
ProbabilisticStructure sensor_structure(int max_distance, int query_distance);

// One prime world and one world per witness count w in (n/2, n], sharing a
// label; the tester draws a uniform candidate from 1..n. Requires n > 2.
ProbabilisticStructure primality_structure(int n);

// One-sided error, answer profiles (1/2 at yes-worlds, 0 at no-worlds).
ProbabilisticStructure rp_structure();

// Two-sided error, answer profiles (3/4 at yes-worlds, 1/4 at no-worlds).
ProbabilisticStructure bpp_structure();

// Intruder structure: one agent, one state, the given interceptions and
// initial keys, and a dy-rg(r) algorithm whose derandomizer enumerates all
// |keys|^r guess tuples uniformly. r = 0 yields the plain dy kind with a
// single dummy token.
ProbabilisticStructure guess_structure(const KeySpace& keys, std::vector<MessageTerm> received,
                                       std::vector<std::string> initkeys, int r);

// ---------------------------------------------------------------------------
// Seeded random structures (table algorithms throughout)

struct RandomStructureParams {
  int n_states = 4;        // clamped to 1..6
  int n_agents = 1;        // clamped to 1..2
  int n_tokens = 3;        // per agent, clamped to 1..4
  int n_props = 2;         // clamped to 1..3
  bool force_complete = false;           // table answers drawn from {Yes, No}
  bool force_respect_negation = false;   // negated-query rows derived, not drawn
  bool deterministic = false;            // answers ignore the token
};

// Deterministic in (seed, params): same inputs rebuild the identical
// structure. Table rows cover p and !p for every proposition p.
ProbabilisticStructure random_structure(uint64_t seed, const RandomStructureParams& params);

}  // namespace knowmc
