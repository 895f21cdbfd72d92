#pragma once

#include <cassert>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "alpc/chain.hpp"
#include "alpc/error.hpp"

namespace alpc {

enum class Op {
  Atom,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Aware,      // A[theta]
  ImplicitK,  // I[i]
  BoxIndist,  // X[theta]
  CKnow,      // C[theta]
  ExplicitK,  // E[theta], K[theta] is an input alias
};

inline bool is_binary(Op op) {
  return op == Op::And || op == Op::Or || op == Op::Implies || op == Op::Iff;
}

inline bool is_chain_op(Op op) {
  return op == Op::Aware || op == Op::BoxIndist || op == Op::CKnow ||
         op == Op::ExplicitK;
}

inline bool is_modal(Op op) { return is_chain_op(op) || op == Op::ImplicitK; }

class Formula;

namespace detail {
struct FormulaNode;
}

// Immutable formula handle with value semantics; comparison and
// identity are structural.
class Formula {
 public:
  Op op() const;
  const std::string& atom_name() const;  // Atom only
  const Agent& agent() const;            // ImplicitK only
  const Chain& chain() const;            // chain ops only
  const Formula& child() const;          // unary ops
  const Formula& lhs() const;            // binary ops
  const Formula& rhs() const;
  std::size_t arity() const;
  const std::vector<Formula>& children() const;

  bool operator==(const Formula& other) const;
  bool operator<(const Formula& other) const;

  static Formula make_atom(std::string name);
  static Formula make_unary(Op op, Formula f);
  static Formula make_binary(Op op, Formula l, Formula r);
  static Formula make_implicit_k(Agent i, Formula f);
  static Formula make_chain_op(Op op, Chain theta, Formula f);

 private:
  explicit Formula(std::shared_ptr<const detail::FormulaNode> node)
      : node_(std::move(node)) {}

  std::shared_ptr<const detail::FormulaNode> node_;
};

namespace detail {
struct FormulaNode {
  Op op;
  std::string name;            // Op::Atom
  std::optional<Agent> agent;  // Op::ImplicitK
  std::optional<Chain> chain;  // chain ops
  std::vector<Formula> kids;
};
}  // namespace detail

inline Op Formula::op() const { return node_->op; }

inline const std::string& Formula::atom_name() const {
  assert(node_->op == Op::Atom);
  return node_->name;
}

inline const Agent& Formula::agent() const {
  assert(node_->op == Op::ImplicitK);
  return *node_->agent;
}

inline const Chain& Formula::chain() const {
  assert(is_chain_op(node_->op));
  return *node_->chain;
}

inline const Formula& Formula::child() const {
  assert(node_->kids.size() == 1);
  return node_->kids[0];
}

inline const Formula& Formula::lhs() const {
  assert(node_->kids.size() == 2);
  return node_->kids[0];
}

inline const Formula& Formula::rhs() const {
  assert(node_->kids.size() == 2);
  return node_->kids[1];
}

inline std::size_t Formula::arity() const { return node_->kids.size(); }

inline const std::vector<Formula>& Formula::children() const {
  return node_->kids;
}

inline Formula Formula::make_atom(std::string name) {
  if (!valid_name(name)) throw Error("invalid atom name '" + name + "'");
  auto node = std::make_shared<detail::FormulaNode>();
  node->op = Op::Atom;
  node->name = std::move(name);
  return Formula(std::move(node));
}

inline Formula Formula::make_unary(Op op, Formula f) {
  assert(op == Op::Not);
  auto node = std::make_shared<detail::FormulaNode>();
  node->op = op;
  node->kids.push_back(std::move(f));
  return Formula(std::move(node));
}

inline Formula Formula::make_binary(Op op, Formula l, Formula r) {
  assert(is_binary(op));
  auto node = std::make_shared<detail::FormulaNode>();
  node->op = op;
  node->kids.push_back(std::move(l));
  node->kids.push_back(std::move(r));
  return Formula(std::move(node));
}

inline Formula Formula::make_implicit_k(Agent i, Formula f) {
  if (!valid_name(i.name)) throw Error("invalid agent name '" + i.name + "'");
  auto node = std::make_shared<detail::FormulaNode>();
  node->op = Op::ImplicitK;
  node->agent = std::move(i);
  node->kids.push_back(std::move(f));
  return Formula(std::move(node));
}

inline Formula Formula::make_chain_op(Op op, Chain theta, Formula f) {
  assert(is_chain_op(op));
  auto node = std::make_shared<detail::FormulaNode>();
  node->op = op;
  node->chain = std::move(theta);
  node->kids.push_back(std::move(f));
  return Formula(std::move(node));
}

// Construction helpers; these read better than the static factories
// in formula-heavy code.
inline Formula atom(std::string name) { return Formula::make_atom(std::move(name)); }
inline Formula neg(Formula f) { return Formula::make_unary(Op::Not, std::move(f)); }
inline Formula conj(Formula l, Formula r) {
  return Formula::make_binary(Op::And, std::move(l), std::move(r));
}
inline Formula disj(Formula l, Formula r) {
  return Formula::make_binary(Op::Or, std::move(l), std::move(r));
}
inline Formula implies(Formula l, Formula r) {
  return Formula::make_binary(Op::Implies, std::move(l), std::move(r));
}
inline Formula iff(Formula l, Formula r) {
  return Formula::make_binary(Op::Iff, std::move(l), std::move(r));
}
inline Formula aware(Chain theta, Formula f) {
  return Formula::make_chain_op(Op::Aware, std::move(theta), std::move(f));
}
inline Formula implicit_k(Agent i, Formula f) {
  return Formula::make_implicit_k(std::move(i), std::move(f));
}
inline Formula box_indist(Chain theta, Formula f) {
  return Formula::make_chain_op(Op::BoxIndist, std::move(theta), std::move(f));
}
inline Formula cknow(Chain theta, Formula f) {
  return Formula::make_chain_op(Op::CKnow, std::move(theta), std::move(f));
}
inline Formula explicit_k(Chain theta, Formula f) {
  return Formula::make_chain_op(Op::ExplicitK, std::move(theta), std::move(f));
}

inline int compare(const Formula& a, const Formula& b) {
  if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
  switch (a.op()) {
    case Op::Atom: {
      int c = a.atom_name().compare(b.atom_name());
      return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
    case Op::ImplicitK: {
      if (a.agent() != b.agent()) return a.agent() < b.agent() ? -1 : 1;
      break;
    }
    default:
      if (is_chain_op(a.op()) && a.chain() != b.chain())
        return a.chain() < b.chain() ? -1 : 1;
      break;
  }
  for (std::size_t k = 0; k < a.arity(); ++k) {
    int c = compare(a.children()[k], b.children()[k]);
    if (c != 0) return c;
  }
  return 0;
}

inline bool Formula::operator==(const Formula& other) const {
  return node_ == other.node_ || compare(*this, other) == 0;
}

inline bool Formula::operator<(const Formula& other) const {
  return compare(*this, other) < 0;
}

// ---- printing ----------------------------------------------------------
//
// Binding strength, loosest to tightest: <-> | -> | "|" | & | prefix ops.
// "->" and "<->" associate to the right, "&" and "|" to the left; the
// printer emits the minimal parenthesisation that reparses to the same
// tree.

namespace detail {

inline int precedence(Op op) {
  switch (op) {
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    default: return 5;  // prefix and leaves
  }
}

inline void print_to(const Formula& f, int min_prec, std::string& out) {
  const int prec = precedence(f.op());
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (f.op()) {
    case Op::Atom:
      out += f.atom_name();
      break;
    case Op::Not:
      out += '!';
      print_to(f.child(), 5, out);
      break;
    case Op::Aware:
    case Op::ImplicitK:
    case Op::BoxIndist:
    case Op::CKnow:
    case Op::ExplicitK: {
      switch (f.op()) {
        case Op::Aware: out += 'A'; break;
        case Op::ImplicitK: out += 'I'; break;
        case Op::BoxIndist: out += 'X'; break;
        case Op::CKnow: out += 'C'; break;
        default: out += 'E'; break;
      }
      out += '[';
      out += f.op() == Op::ImplicitK ? f.agent().name : to_string(f.chain());
      out += "] ";
      print_to(f.child(), 5, out);
      break;
    }
    case Op::And:
    case Op::Or: {
      const char* sep = f.op() == Op::And ? " & " : " | ";
      print_to(f.lhs(), prec, out);
      out += sep;
      print_to(f.rhs(), prec + 1, out);
      break;
    }
    case Op::Implies:
    case Op::Iff: {
      const char* sep = f.op() == Op::Implies ? " -> " : " <-> ";
      print_to(f.lhs(), prec + 1, out);
      out += sep;
      print_to(f.rhs(), prec, out);
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print_to(f, 0, out);
  return out;
}

// ---- structural queries --------------------------------------------------

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (f.op() == Op::Atom) out.insert(f.atom_name());
  for (const auto& k : f.children()) collect_atoms(k, out);
}

inline std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

inline void collect_chains(const Formula& f, std::set<Chain>& out) {
  if (is_chain_op(f.op())) out.insert(canon(f.chain()));
  for (const auto& k : f.children()) collect_chains(k, out);
}

// Every chain index occurring in f, canonicalized.
inline std::set<Chain> chains_of(const Formula& f) {
  std::set<Chain> out;
  collect_chains(f, out);
  return out;
}

inline void collect_subformulas(const Formula& f, std::set<Formula>& out) {
  if (!out.insert(f).second) return;
  for (const auto& k : f.children()) collect_subformulas(k, out);
}

// sub(f): all subformulas of f, including f itself.
inline std::set<Formula> subformulas(const Formula& f) {
  std::set<Formula> out;
  collect_subformulas(f, out);
  return out;
}

inline int modal_depth(const Formula& f) {
  int inner = 0;
  for (const auto& k : f.children()) inner = std::max(inner, modal_depth(k));
  return inner + (is_modal(f.op()) ? 1 : 0);
}

inline Formula canonicalize_chains(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
      return f;
    case Op::Not:
      return neg(canonicalize_chains(f.child()));
    case Op::ImplicitK:
      return implicit_k(f.agent(), canonicalize_chains(f.child()));
    case Op::Aware:
    case Op::BoxIndist:
    case Op::CKnow:
    case Op::ExplicitK:
      return Formula::make_chain_op(f.op(), canon(f.chain()),
                                    canonicalize_chains(f.child()));
    default:
      return Formula::make_binary(f.op(), canonicalize_chains(f.lhs()),
                                  canonicalize_chains(f.rhs()));
  }
}

// ---- well-formedness -----------------------------------------------------
//
// Awareness-indexed operators may only refine: an A or E node with chain
// theta' occurring inside the scope of an A or E node with chain theta
// needs theta <= theta'.  X and C are not restricted.

struct NestingViolation {
  Chain outer;
  Chain inner;
};

namespace detail {

inline std::optional<NestingViolation> find_violation(const Formula& f,
                                                      const Chain* bound) {
  const bool restricted = f.op() == Op::Aware || f.op() == Op::ExplicitK;
  if (restricted && bound && !chain_leq(*bound, f.chain()))
    return NestingViolation{*bound, f.chain()};
  const Chain* next = restricted ? &f.chain() : bound;
  for (const auto& k : f.children()) {
    if (auto v = find_violation(k, next)) return v;
  }
  return std::nullopt;
}

}  // namespace detail

inline std::optional<NestingViolation> nesting_violation(const Formula& f) {
  return detail::find_violation(f, nullptr);
}

inline bool well_formed(const Formula& f) {
  return !nesting_violation(f).has_value();
}

}  // namespace alpc
