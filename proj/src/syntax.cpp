#include <knowmc/syntax.hpp>

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace knowmc {

// ---------------------------------------------------------------------------
// Errors

namespace {

std::string render_parse_error(const std::string& what, size_t offset,
                               const std::vector<std::string>& expected) {
  std::ostringstream os;
  os << "parse error at offset " << offset << ": " << what;
  if (!expected.empty()) {
    os << " (expected ";
    for (size_t i = 0; i < expected.size(); ++i) {
      if (i) os << (i + 1 == expected.size() ? " or " : ", ");
      os << expected[i];
    }
    os << ")";
  }
  return os.str();
}

}  // namespace

ParseError::ParseError(const std::string& what, size_t offset_, std::vector<std::string> expected_)
    : std::runtime_error(render_parse_error(what, offset_, expected_)),
      offset(offset_),
      expected(std::move(expected_)) {}

// ---------------------------------------------------------------------------
// KeySpace

KeySpace KeySpace::make(const std::vector<std::pair<std::string, std::string>>& decls) {
  KeySpace ks;
  auto add = [&ks](const std::string& name, const std::string& inv) {
    auto it = ks.inverse_.find(name);
    if (it != ks.inverse_.end()) {
      if (it->second != inv)
        throw ModelError("conflicting inverse declarations for key '" + name + "'");
      return;
    }
    ks.inverse_[name] = inv;
    ks.names_.push_back(name);
  };
  for (const auto& [name, inv] : decls) {
    if (name.empty() || inv.empty()) throw ModelError("empty key name in key space");
    add(name, inv);
    add(inv, name);
  }
  for (const auto& [name, inv] : ks.inverse_) {
    if (ks.inverse_.at(inv) != name)
      throw ModelError("key inverse map is not involutive at '" + name + "'");
  }
  return ks;
}

const std::string& KeySpace::inverse(const std::string& name) const {
  auto it = inverse_.find(name);
  if (it == inverse_.end()) throw ModelError("unknown key '" + name + "'");
  return it->second;
}

size_t KeySpace::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ModelError("unknown key '" + name + "'");
  return static_cast<size_t>(it - names_.begin());
}

// ---------------------------------------------------------------------------
// MessageTerm

struct MessageTerm::Node {
  Kind kind;
  std::string name;                 // Plain/Key name, or the Encrypt key
  std::optional<MessageTerm> a, b;  // Concat: left/right; Encrypt: body in a
};

MessageTerm::Kind MessageTerm::kind() const { return n_->kind; }

const std::string& MessageTerm::name() const {
  if (n_->kind != Kind::Plain && n_->kind != Kind::Key)
    throw std::logic_error("name() on a non-leaf message term");
  return n_->name;
}

const MessageTerm& MessageTerm::left() const {
  if (n_->kind != Kind::Concat) throw std::logic_error("left() on a non-concat message term");
  return *n_->a;
}

const MessageTerm& MessageTerm::right() const {
  if (n_->kind != Kind::Concat) throw std::logic_error("right() on a non-concat message term");
  return *n_->b;
}

const MessageTerm& MessageTerm::body() const {
  if (n_->kind != Kind::Encrypt) throw std::logic_error("body() on a non-encrypt message term");
  return *n_->a;
}

const std::string& MessageTerm::key() const {
  if (n_->kind != Kind::Encrypt) throw std::logic_error("key() on a non-encrypt message term");
  return n_->name;
}

namespace {

int msg_cmp(const MessageTerm& x, const MessageTerm& y);

int msg_cmp_children(const MessageTerm& x, const MessageTerm& y) {
  switch (x.kind()) {
    case MessageTerm::Kind::Plain:
    case MessageTerm::Kind::Key:
      return x.name().compare(y.name());
    case MessageTerm::Kind::Concat: {
      int c = msg_cmp(x.left(), y.left());
      return c ? c : msg_cmp(x.right(), y.right());
    }
    case MessageTerm::Kind::Encrypt: {
      int c = x.key().compare(y.key());
      return c ? c : msg_cmp(x.body(), y.body());
    }
  }
  return 0;
}

int msg_cmp(const MessageTerm& x, const MessageTerm& y) {
  if (x.kind() != y.kind()) return static_cast<int>(x.kind()) < static_cast<int>(y.kind()) ? -1 : 1;
  return msg_cmp_children(x, y);
}

}  // namespace

bool MessageTerm::operator==(const MessageTerm& o) const {
  return n_ == o.n_ || msg_cmp(*this, o) == 0;
}

bool MessageTerm::operator<(const MessageTerm& o) const { return msg_cmp(*this, o) < 0; }

MessageTerm m_plain(const std::string& name) {
  return MessageTerm(std::make_shared<const MessageTerm::Node>(
      MessageTerm::Node{MessageTerm::Kind::Plain, name, std::nullopt, std::nullopt}));
}

MessageTerm m_key(const std::string& name) {
  return MessageTerm(std::make_shared<const MessageTerm::Node>(
      MessageTerm::Node{MessageTerm::Kind::Key, name, std::nullopt, std::nullopt}));
}

MessageTerm m_concat(MessageTerm l, MessageTerm r) {
  return MessageTerm(std::make_shared<const MessageTerm::Node>(
      MessageTerm::Node{MessageTerm::Kind::Concat, "", std::move(l), std::move(r)}));
}

MessageTerm m_encrypt(MessageTerm body, const std::string& key) {
  return MessageTerm(std::make_shared<const MessageTerm::Node>(
      MessageTerm::Node{MessageTerm::Kind::Encrypt, key, std::move(body), std::nullopt}));
}

MessageTerm normalize_message(const MessageTerm& m, const KeySpace& keys) {
  switch (m.kind()) {
    case MessageTerm::Kind::Plain:
    case MessageTerm::Kind::Key:
      return m;
    case MessageTerm::Kind::Concat:
      return m_concat(normalize_message(m.left(), keys), normalize_message(m.right(), keys));
    case MessageTerm::Kind::Encrypt: {
      MessageTerm body = normalize_message(m.body(), keys);
      // The only redex a bottom-up pass can create sits at this node: the
      // collapsed body is already in normal form.
      if (body.kind() == MessageTerm::Kind::Encrypt && keys.has(body.key()) &&
          keys.inverse(body.key()) == m.key())
        return body.body();
      return m_encrypt(body, m.key());
    }
  }
  throw std::logic_error("unreachable message kind");
}

namespace {

// ctx distinguishes "operand of a concat / encryption brace" (self-delimiting
// required) from "top of a concat chain".
std::string pm(const MessageTerm& m, bool atom_ctx) {
  switch (m.kind()) {
    case MessageTerm::Kind::Plain:
    case MessageTerm::Kind::Key:
      return m.name();
    case MessageTerm::Kind::Encrypt:
      return "{" + pm(m.body(), false) + "}_" + m.key();
    case MessageTerm::Kind::Concat: {
      std::string s = pm(m.left(), m.left().kind() != MessageTerm::Kind::Concat) + "." +
                      pm(m.right(), true);
      return atom_ctx ? "(" + s + ")" : s;
    }
  }
  throw std::logic_error("unreachable message kind");
}

}  // namespace

std::string print_message(const MessageTerm& m) { return pm(m, false); }

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind;
  std::string prop;               // Prop
  int agent = 0;                  // HasMsg, Knows, AlgKnows, EvCmp
  std::optional<MessageTerm> msg; // HasMsg
  std::optional<Formula> a, b;    // children
  CmpOp cmp = CmpOp::Ge;
  Rat threshold;
  EvBound bound = EvBound::Lower;
};

Formula::Kind Formula::kind() const { return n_->kind; }

const std::string& Formula::prop() const {
  if (n_->kind != Kind::Prop) throw std::logic_error("prop() on a non-proposition formula");
  return n_->prop;
}

int Formula::agent() const {
  switch (n_->kind) {
    case Kind::HasMsg:
    case Kind::Knows:
    case Kind::AlgKnows:
    case Kind::EvCmp:
      return n_->agent;
    default:
      throw std::logic_error("agent() on a formula without an agent");
  }
}

const MessageTerm& Formula::msg() const {
  if (n_->kind != Kind::HasMsg) throw std::logic_error("msg() on a non-has formula");
  return *n_->msg;
}

const Formula& Formula::child() const {
  switch (n_->kind) {
    case Kind::Not:
    case Kind::Knows:
    case Kind::AlgKnows:
    case Kind::ProbCmp:
    case Kind::EvCmp:
      return *n_->a;
    default:
      throw std::logic_error("child() on a formula without a single child");
  }
}

const Formula& Formula::left() const {
  if (n_->kind != Kind::And) throw std::logic_error("left() on a non-conjunction");
  return *n_->a;
}

const Formula& Formula::right() const {
  if (n_->kind != Kind::And) throw std::logic_error("right() on a non-conjunction");
  return *n_->b;
}

CmpOp Formula::cmp() const {
  if (n_->kind != Kind::ProbCmp && n_->kind != Kind::EvCmp)
    throw std::logic_error("cmp() on a non-comparison formula");
  return n_->cmp;
}

const Rat& Formula::threshold() const {
  if (n_->kind != Kind::ProbCmp && n_->kind != Kind::EvCmp)
    throw std::logic_error("threshold() on a non-comparison formula");
  return n_->threshold;
}

EvBound Formula::bound() const {
  if (n_->kind != Kind::EvCmp) throw std::logic_error("bound() on a non-evidence formula");
  return n_->bound;
}

namespace {

bool formula_eq(const Formula& x, const Formula& y) {
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case Formula::Kind::Prop:
      return x.prop() == y.prop();
    case Formula::Kind::HasMsg:
      return x.agent() == y.agent() && x.msg() == y.msg();
    case Formula::Kind::Not:
      return formula_eq(x.child(), y.child());
    case Formula::Kind::And:
      return formula_eq(x.left(), y.left()) && formula_eq(x.right(), y.right());
    case Formula::Kind::Knows:
    case Formula::Kind::AlgKnows:
      return x.agent() == y.agent() && formula_eq(x.child(), y.child());
    case Formula::Kind::ProbCmp:
      return x.cmp() == y.cmp() && x.threshold() == y.threshold() &&
             formula_eq(x.child(), y.child());
    case Formula::Kind::EvCmp:
      return x.bound() == y.bound() && x.agent() == y.agent() && x.cmp() == y.cmp() &&
             x.threshold() == y.threshold() && formula_eq(x.child(), y.child());
  }
  return false;
}

void check_agent(int agent) {
  if (agent < 1) throw EvalError("agent indices are 1-based positive integers");
}

void check_threshold(const Rat& t) {
  if (t < 0 || t > 1) throw EvalError("threshold " + format_rat(t) + " outside [0, 1]");
}

const std::vector<std::string>& reserved_bases() {
  static const std::vector<std::string> words{"EvLo", "EvHi", "has", "K", "X"};
  return words;
}

}  // namespace

bool Formula::operator==(const Formula& o) const { return n_ == o.n_ || formula_eq(*this, o); }

Formula f_prop(const std::string& name) {
  if (name.empty()) throw EvalError("empty proposition name");
  if (name == "Pr") throw EvalError("'Pr' is reserved and cannot name a proposition");
  for (const auto& base : reserved_bases()) {
    if (name == base ||
        (name.size() > base.size() && name.compare(0, base.size(), base) == 0 &&
         std::all_of(name.begin() + static_cast<long>(base.size()), name.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })))
      throw EvalError("'" + name + "' is reserved and cannot name a proposition");
  }
  auto n = std::make_shared<Formula::Node>();
  n->kind = Formula::Kind::Prop;
  n->prop = name;
  return Formula(std::move(n));
}

Formula f_has(int agent, MessageTerm m) {
  check_agent(agent);
  auto n = std::make_shared<Formula::Node>();
  n->kind = Formula::Kind::HasMsg;
  n->agent = agent;
  n->msg = std::move(m);
  return Formula(std::move(n));
}

Formula f_not(Formula f) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = Formula::Kind::Not;
  n->a = std::move(f);
  return Formula(std::move(n));
}

Formula f_and(Formula l, Formula r) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = Formula::Kind::And;
  n->a = std::move(l);
  n->b = std::move(r);
  return Formula(std::move(n));
}

Formula f_or(Formula l, Formula r) { return f_not(f_and(f_not(std::move(l)), f_not(std::move(r)))); }

Formula f_implies(Formula l, Formula r) { return f_not(f_and(std::move(l), f_not(std::move(r)))); }

Formula f_iff(Formula l, Formula r) {
  // Sequence the two implications explicitly: argument evaluation order is
  // unspecified, so moving l and r inside one call expression would race the
  // copies taken by the other.
  Formula fwd = f_implies(l, r);
  Formula back = f_implies(std::move(r), std::move(l));
  return f_and(std::move(fwd), std::move(back));
}

Formula f_knows(int agent, Formula f) {
  check_agent(agent);
  auto n = std::make_shared<Formula::Node>();
  n->kind = Formula::Kind::Knows;
  n->agent = agent;
  n->a = std::move(f);
  return Formula(std::move(n));
}

Formula f_xknows(int agent, Formula f) {
  check_agent(agent);
  auto n = std::make_shared<Formula::Node>();
  n->kind = Formula::Kind::AlgKnows;
  n->agent = agent;
  n->a = std::move(f);
  return Formula(std::move(n));
}

Formula f_prob(Formula f, CmpOp op, Rat threshold) {
  check_threshold(threshold);
  auto n = std::make_shared<Formula::Node>();
  n->kind = Formula::Kind::ProbCmp;
  n->a = std::move(f);
  n->cmp = op;
  n->threshold = std::move(threshold);
  return Formula(std::move(n));
}

Formula f_ev(EvBound bound, int agent, Formula f, CmpOp op, Rat threshold) {
  check_agent(agent);
  check_threshold(threshold);
  auto n = std::make_shared<Formula::Node>();
  n->kind = Formula::Kind::EvCmp;
  n->agent = agent;
  n->a = std::move(f);
  n->cmp = op;
  n->threshold = std::move(threshold);
  n->bound = bound;
  return Formula(std::move(n));
}

const char* cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Ge: return ">=";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
  }
  throw std::logic_error("unreachable comparison op");
}

bool cmp_holds(const Rat& lhs, CmpOp op, const Rat& rhs) {
  switch (op) {
    case CmpOp::Ge: return lhs >= rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Gt: return lhs > rhs;
  }
  throw std::logic_error("unreachable comparison op");
}

namespace {

// unary_ctx: the formula sits where the grammar expects a `unary`, so a bare
// conjunction chain needs parentheses.
std::string pf(const Formula& f, bool unary_ctx) {
  switch (f.kind()) {
    case Formula::Kind::Prop:
      return f.prop();
    case Formula::Kind::HasMsg:
      return "has" + std::to_string(f.agent()) + "(" + print_message(f.msg()) + ")";
    case Formula::Kind::Not:
      return "!" + pf(f.child(), true);
    case Formula::Kind::Knows:
      return "K" + std::to_string(f.agent()) + " " + pf(f.child(), true);
    case Formula::Kind::AlgKnows:
      return "X" + std::to_string(f.agent()) + " " + pf(f.child(), true);
    case Formula::Kind::ProbCmp:
      return "Pr(" + pf(f.child(), false) + ") " + cmp_text(f.cmp()) + " " +
             format_rat(f.threshold());
    case Formula::Kind::EvCmp:
      return std::string(f.bound() == EvBound::Lower ? "EvLo" : "EvHi") +
             std::to_string(f.agent()) + "(" + pf(f.child(), false) + ") " + cmp_text(f.cmp()) +
             " " + format_rat(f.threshold());
    case Formula::Kind::And: {
      std::string s = pf(f.left(), f.left().kind() != Formula::Kind::And) + " & " +
                      pf(f.right(), true);
      return unary_ctx ? "(" + s + ")" : s;
    }
  }
  throw std::logic_error("unreachable formula kind");
}

}  // namespace

std::string print_formula(const Formula& f) { return pf(f, false); }

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Parser {
  const std::string& src;
  const KeySpace* keys;
  size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    skip_ws();
    std::string found = pos < src.size() ? "'" + std::string(1, src[pos]) + "'" : "end of input";
    throw ParseError("unexpected " + found, pos, std::move(expected));
  }

  bool try_lit(const char* lit) {
    skip_ws();
    size_t n = std::char_traits<char>::length(lit);
    if (src.compare(pos, n, lit) == 0) {
      pos += n;
      return true;
    }
    return false;
  }

  void expect_lit(const char* lit) {
    if (!try_lit(lit)) fail({std::string("'") + lit + "'"});
  }

  // Maximal [A-Za-z_][A-Za-z0-9_]* word at the cursor; does not advance.
  std::string peek_word() {
    skip_ws();
    size_t p = pos;
    if (p >= src.size()) return "";
    char c = src[p];
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') return "";
    size_t e = p;
    while (e < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[e])) || src[e] == '_'))
      ++e;
    return src.substr(p, e - p);
  }

  // Splits a reserved word possibly fused with its agent index: "K1" -> (K, 1).
  // Returns the base or "" when the word is an ordinary identifier.
  std::string op_base(const std::string& word, std::optional<int>* fused_agent) {
    fused_agent->reset();
    if (word == "Pr") return word;
    for (const auto& base : reserved_bases()) {
      if (word == base) return base;
      if (word.size() > base.size() && word.compare(0, base.size(), base) == 0) {
        bool digits = std::all_of(
            word.begin() + static_cast<long>(base.size()), word.end(),
            [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
        if (digits) {
          *fused_agent = std::stoi(word.substr(base.size()));
          return base;
        }
      }
    }
    return "";
  }

  int parse_agent(std::optional<int> fused) {
    if (!fused) {
      skip_ws();
      size_t start = pos;
      if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
        fail({"agent index"});
      size_t e = pos;
      while (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) ++e;
      fused = std::stoi(src.substr(pos, e - pos));
      pos = e;
      if (*fused < 1) throw ParseError("agent index must be at least 1", start, {});
    } else if (*fused < 1) {
      throw ParseError("agent index must be at least 1", pos, {});
    }
    return *fused;
  }

  CmpOp parse_cmp() {
    if (try_lit(">=")) return CmpOp::Ge;
    if (try_lit("<=")) return CmpOp::Le;
    if (try_lit("=")) return CmpOp::Eq;
    if (try_lit("<")) return CmpOp::Lt;
    if (try_lit(">")) return CmpOp::Gt;
    fail({"'>='", "'<='", "'='", "'<'", "'>'"});
  }

  Rat parse_num() {
    skip_ws();
    size_t start = pos;
    auto digits = [this] {
      size_t n = 0;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos, ++n;
      return n;
    };
    if (!digits()) fail({"number"});
    if (pos < src.size() && (src[pos] == '/' || src[pos] == '.')) {
      char sep = src[pos];
      ++pos;
      if (!digits())
        throw ParseError(sep == '/' ? "missing denominator" : "missing fraction digits", pos,
                         {"digits"});
    }
    Rat value = parse_rat(src.substr(start, pos - start));
    if (value < 0 || value > 1)
      throw ParseError("threshold " + format_rat(value) + " outside [0, 1]", start, {});
    return value;
  }

  // --- messages ---

  std::string parse_msg_ident(const char* what) {
    std::string w = peek_word();
    if (w.empty()) fail({what});
    pos += w.size();
    return w;
  }

  MessageTerm parse_msgatom() {
    skip_ws();
    if (try_lit("{")) {
      MessageTerm body = parse_msg();
      expect_lit("}");
      if (pos >= src.size() || src[pos] != '_') fail({"'_'"});
      ++pos;
      size_t key_at = pos;
      std::string key = parse_msg_ident("key name");
      if (keys && !keys->has(key))
        throw ParseError("unknown key name '" + key + "'", key_at, {});
      return m_encrypt(body, key);
    }
    if (try_lit("(")) {
      MessageTerm m = parse_msg();
      expect_lit(")");
      return m;
    }
    std::string w = peek_word();
    if (w.empty()) fail({"message atom", "'{'", "'('"});
    pos += w.size();
    if (keys && keys->has(w)) return m_key(w);
    return m_plain(w);
  }

  MessageTerm parse_msg() {
    MessageTerm m = parse_msgatom();
    while (try_lit(".")) m = m_concat(m, parse_msgatom());
    return m;
  }

  // --- formulas ---

  Formula parse_atom() {
    skip_ws();
    if (try_lit("(")) {
      Formula f = parse_implies();
      expect_lit(")");
      return f;
    }
    std::string w = peek_word();
    if (w.empty()) fail({"proposition", "'('", "'!'", "'K'", "'X'", "'has'", "'Pr'", "'EvLo'", "'EvHi'"});
    std::optional<int> fused;
    std::string base = op_base(w, &fused);
    if (base == "has") {
      pos += w.size();
      int agent = parse_agent(fused);
      expect_lit("(");
      MessageTerm m = parse_msg();
      expect_lit(")");
      return f_has(agent, m);
    }
    if (base == "Pr") {
      pos += w.size();
      expect_lit("(");
      Formula f = parse_implies();
      expect_lit(")");
      CmpOp op = parse_cmp();
      return f_prob(f, op, parse_num());
    }
    if (base == "EvLo" || base == "EvHi") {
      pos += w.size();
      int agent = parse_agent(fused);
      expect_lit("(");
      Formula f = parse_implies();
      expect_lit(")");
      CmpOp op = parse_cmp();
      return f_ev(base == "EvLo" ? EvBound::Lower : EvBound::Upper, agent, f, op, parse_num());
    }
    if (base == "K" || base == "X") fail({"proposition"});  // handled by parse_unary
    pos += w.size();
    return f_prop(w);
  }

  Formula parse_unary() {
    skip_ws();
    if (try_lit("!")) return f_not(parse_unary());
    std::string w = peek_word();
    if (!w.empty()) {
      std::optional<int> fused;
      std::string base = op_base(w, &fused);
      if (base == "K" || base == "X") {
        pos += w.size();
        int agent = parse_agent(fused);
        Formula f = parse_unary();
        return base == "K" ? f_knows(agent, f) : f_xknows(agent, f);
      }
    }
    return parse_atom();
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (try_lit("&")) f = f_and(f, parse_unary());
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (try_lit("|")) f = f_or(f, parse_and());
    return f;
  }

  Formula parse_implies() {
    Formula f = parse_or();
    if (try_lit("<=>")) return f_iff(f, parse_implies());
    if (try_lit("=>")) return f_implies(f, parse_implies());
    return f;
  }
};

}  // namespace

MessageTerm parse_message(const std::string& text, const KeySpace* keys) {
  Parser p{text, keys};
  MessageTerm m = p.parse_msg();
  p.skip_ws();
  if (p.pos != text.size()) p.fail({"end of input"});
  return m;
}

Formula parse_formula(const std::string& text, const KeySpace* keys) {
  Parser p{text, keys};
  Formula f = p.parse_implies();
  p.skip_ws();
  if (p.pos != text.size()) p.fail({"end of input"});
  return f;
}

// ---------------------------------------------------------------------------
// Classification

namespace {

void classify_walk(const Formula& f, bool* x_free, bool* pr_free) {
  switch (f.kind()) {
    case Formula::Kind::Prop:
    case Formula::Kind::HasMsg:
      return;
    case Formula::Kind::Not:
    case Formula::Kind::Knows:
      classify_walk(f.child(), x_free, pr_free);
      return;
    case Formula::Kind::And:
      classify_walk(f.left(), x_free, pr_free);
      classify_walk(f.right(), x_free, pr_free);
      return;
    case Formula::Kind::AlgKnows:
      *x_free = false;
      classify_walk(f.child(), x_free, pr_free);
      return;
    case Formula::Kind::ProbCmp:
      *pr_free = false;
      classify_walk(f.child(), x_free, pr_free);
      return;
    case Formula::Kind::EvCmp:
      // Evidence values depend on the knowledge algorithms and on the
      // derandomizer measure, so Ev counts as both an X and a Pr occurrence.
      *x_free = false;
      *pr_free = false;
      classify_walk(f.child(), x_free, pr_free);
      return;
  }
}

}  // namespace

FormulaClass classify_formula(const Formula& f) {
  FormulaClass c{true, true, true};
  classify_walk(f, &c.x_free, &c.pr_free);
  c.objective = c.x_free && c.pr_free;
  return c;
}

}  // namespace knowmc
