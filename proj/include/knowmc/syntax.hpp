#pragma once

#include <knowmc/rational.hpp>

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace knowmc {

// ---------------------------------------------------------------------------
// Errors

struct ParseError : std::runtime_error {
  size_t offset;                       // byte offset into the input text
  std::vector<std::string> expected;   // token descriptions valid at `offset`
  ParseError(const std::string& what, size_t offset, std::vector<std::string> expected);
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Key spaces
//
// A finite set of key names with an involutive inverse map. A name with no
// declared inverse is its own inverse (symmetric key).

class KeySpace {
 public:
  KeySpace() = default;

  // Each pair (name, inverse) introduces both names; inverse may equal name.
  // Throws ModelError on conflicting declarations.
  static KeySpace make(const std::vector<std::pair<std::string, std::string>>& decls);

  bool has(const std::string& name) const { return inverse_.count(name) != 0; }
  // Throws ModelError on an unknown key.
  const std::string& inverse(const std::string& name) const;
  // First-appearance order; guess tokens index into this list.
  const std::vector<std::string>& names() const { return names_; }
  size_t size() const { return names_.size(); }
  size_t index_of(const std::string& name) const;  // throws ModelError on unknown

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::string> inverse_;
};

// ---------------------------------------------------------------------------
// Message terms
//
// Immutable value handles; structural equality is raw (no key identification).
// Engine code normalizes terms on entry, so equality of normal forms is plain
// operator==.

class MessageTerm {
 public:
  enum class Kind { Plain, Key, Concat, Encrypt };

  Kind kind() const;
  const std::string& name() const;    // Plain, Key
  const MessageTerm& left() const;    // Concat
  const MessageTerm& right() const;   // Concat
  const MessageTerm& body() const;    // Encrypt
  const std::string& key() const;     // Encrypt

  bool operator==(const MessageTerm& o) const;
  bool operator!=(const MessageTerm& o) const { return !(*this == o); }
  bool operator<(const MessageTerm& o) const;  // total order, for use in sets

 private:
  struct Node;
  explicit MessageTerm(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;

  friend MessageTerm m_plain(const std::string&);
  friend MessageTerm m_key(const std::string&);
  friend MessageTerm m_concat(MessageTerm, MessageTerm);
  friend MessageTerm m_encrypt(MessageTerm, const std::string&);
};

MessageTerm m_plain(const std::string& name);
MessageTerm m_key(const std::string& name);
MessageTerm m_concat(MessageTerm l, MessageTerm r);
MessageTerm m_encrypt(MessageTerm body, const std::string& key);

// Collapses every {{m}_k1}_k2 with k2 = inverse(k1) to m, innermost first.
// The rewrite terminates and is confluent (each step strictly shrinks the
// term), so the result is a unique normal form.
MessageTerm normalize_message(const MessageTerm& m, const KeySpace& keys);

// Canonical text; reparses to an equal term.
std::string print_message(const MessageTerm& m);

// Parses the message grammar
//   msg     := msgatom ("." msgatom)*        (concat, left-assoc)
//   msgatom := ident | "{" msg "}_" ident | "(" msg ")"
// With a key space: idents in encryption position must be declared keys
// (ParseError otherwise) and declared-key idents become Key leaves; without
// one, every leaf is Plain and any encryption key name is accepted.
MessageTerm parse_message(const std::string& text, const KeySpace* keys = nullptr);

// ---------------------------------------------------------------------------
// Formulas
//
// Desugared core: Prop, HasMsg, Not, And, Knows, AlgKnows, ProbCmp, EvCmp.
// Or / Implies / Iff exist only as input sugar.

enum class CmpOp { Ge, Le, Eq, Lt, Gt };
enum class EvBound { Lower, Upper };

const char* cmp_text(CmpOp op);
bool cmp_holds(const Rat& lhs, CmpOp op, const Rat& rhs);

class Formula {
 public:
  enum class Kind { Prop, HasMsg, Not, And, Knows, AlgKnows, ProbCmp, EvCmp };

  Kind kind() const;
  const std::string& prop() const;    // Prop
  int agent() const;                  // HasMsg, Knows, AlgKnows, EvCmp (1-based)
  const MessageTerm& msg() const;     // HasMsg
  const Formula& child() const;       // Not, Knows, AlgKnows, ProbCmp, EvCmp operand
  const Formula& left() const;        // And
  const Formula& right() const;       // And
  CmpOp cmp() const;                  // ProbCmp, EvCmp
  const Rat& threshold() const;       // ProbCmp, EvCmp
  EvBound bound() const;              // EvCmp

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;

  friend Formula f_prop(const std::string&);
  friend Formula f_has(int, MessageTerm);
  friend Formula f_not(Formula);
  friend Formula f_and(Formula, Formula);
  friend Formula f_knows(int, Formula);
  friend Formula f_xknows(int, Formula);
  friend Formula f_prob(Formula, CmpOp, Rat);
  friend Formula f_ev(EvBound, int, Formula, CmpOp, Rat);
};

Formula f_prop(const std::string& name);
Formula f_has(int agent, MessageTerm m);
Formula f_not(Formula f);
Formula f_and(Formula l, Formula r);
Formula f_or(Formula l, Formula r);        // !(!l & !r)
Formula f_implies(Formula l, Formula r);   // !(l & !r)
Formula f_iff(Formula l, Formula r);       // (l => r) & (r => l), desugared
Formula f_knows(int agent, Formula f);
Formula f_xknows(int agent, Formula f);
// Thresholds must lie in [0, 1]; EvalError otherwise.
Formula f_prob(Formula f, CmpOp op, Rat threshold);
Formula f_ev(EvBound bound, int agent, Formula f, CmpOp op, Rat threshold);

// Canonical text (desugared core only); parse_formula(print_formula(f)) == f.
std::string print_formula(const Formula& f);

// Parses the formula grammar
//   formula := implies
//   implies := or (("=>" | "<=>") implies)?      (right-assoc)
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "!" unary | "K" nat unary | "X" nat unary | atom
//   atom    := ident | "has" nat "(" msg ")" | "Pr" "(" formula ")" cmp num
//            | "EvLo" nat "(" formula ")" cmp num
//            | "EvHi" nat "(" formula ")" cmp num | "(" formula ")"
//   cmp     := ">=" | "<=" | "=" | "<" | ">"
//   num     := rational | decimal
// "K1" and "K 1" both lex as the operator K applied to agent 1; identifiers
// matching K<digits>, X<digits>, has<digits>, EvLo<digits>, EvHi<digits>, and
// the names Pr/K/X/has/EvLo/EvHi are reserved. Thresholds outside [0, 1] are
// parse errors. ParseError carries the byte offset and the expected-token set.
Formula parse_formula(const std::string& text, const KeySpace* keys = nullptr);

// ---------------------------------------------------------------------------
// Classification
//
// x_free: no X operator and no Ev operator. pr_free: no Pr operator and no Ev
// operator. Ev counts against both because its value depends on the knowledge
// algorithms and on the derandomizer measure alike. objective = both; only
// objective formulas may appear under Ev or be fed to the evidence and
// reliability operations.

struct FormulaClass {
  bool x_free;
  bool pr_free;
  bool objective;
};

FormulaClass classify_formula(const Formula& f);

}  // namespace knowmc
