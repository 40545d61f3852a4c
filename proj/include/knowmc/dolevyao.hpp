#pragma once

#include <knowmc/model.hpp>
#include <knowmc/syntax.hpp>

#include <string>
#include <vector>

namespace knowmc {

// ---------------------------------------------------------------------------
// Intruder-view local state: the keys held from the start plus every
// intercepted message (normalized).

struct AdversaryLocal {
  std::vector<std::string> initkeys;
  std::vector<MessageTerm> received;
};

// ---------------------------------------------------------------------------
// Submessage containment: m is m itself, a side of a concatenation m1.m2 it
// occurs in, or sits inside an encryption body regardless of key knowledge.
// Both terms are expected in normal form.
bool msg_contains(const MessageTerm& m, const MessageTerm& outer);

// Decomposition derivability: membership, projection of either side of a
// concatenation, and decryption of {m}_k given the inverse key. There are no
// composition rules. Computed by saturating the hypothesis set to a fixpoint.
bool derives(const std::vector<MessageTerm>& hypotheses, const MessageTerm& goal,
             const KeySpace& keys);

// Keys in the decomposition closure of initkeys + received: everything usable
// for decryption after taking the local state apart. Returned in key-space
// declaration order.
std::vector<std::string> keysof(const AdversaryLocal& local, const KeySpace& keys);

// The deterministic intruder check: answers Yes when the queried message is an
// initial key or extractable from some intercepted message using the keys of
// keysof, and "?" otherwise. `guessed` extends the usable keys (the random-
// guessing variant); it never extends initkeys.
Answer dy_check(const MessageTerm& goal, const AdversaryLocal& local, const KeySpace& keys,
                const std::vector<std::string>& guessed = {});

// ---------------------------------------------------------------------------
// Knowledge-algorithm kinds
//
// Both kinds answer queries of the form has<agent>(m) for their own agent and
// "?" on everything else. The random-guessing kind reads r key indices from
// its token, formatted as decimal indices into the key-space declaration
// order, comma-separated ("3,7" guesses keys #3 and #7; indices may repeat).

AlgorithmPtr make_dy_algorithm(int agent, std::vector<std::string> initkeys, KeySpace keys);
AlgorithmPtr make_dy_rg_algorithm(int agent, int r, std::vector<std::string> initkeys,
                                  KeySpace keys);

// Renders one guess token ("" for r = 0 never occurs: r >= 1).
std::string guess_token(const std::vector<size_t>& indices);

// Distinct key names occurring anywhere in the given messages, whether as
// encryption keys or as key leaves. This is the K of the guessing bound.
size_t count_used_keys(const std::vector<MessageTerm>& received, const KeySpace& keys);

// ---------------------------------------------------------------------------
// Guessing bound: with K of the |keys| keys in play and r uniform guesses,
// the chance any guess hits a used key is 1 - (1 - K/|keys|)^r, which is
// strictly below 1 - e^(-2rK/|keys|) whenever K/|keys| < 1/2.

struct GuessBound {
  bool hypothesis_ok;   // K/|keys| < 1/2
  Rat exact_miss;       // (1 - K/|keys|)^r
  double bound;         // 1 - e^(-2 r K / |keys|)
};

GuessBound prop4_bound(int r, size_t used_keys, size_t total_keys);

}  // namespace knowmc
