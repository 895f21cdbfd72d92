#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alpc/formula.hpp"
#include "alpc/model.hpp"

namespace alpc {

struct EvalError : Error {
  using Error::Error;
};

// One node of an evaluation trace.  Modal nodes record the worlds they
// quantified over; their children are the body's evaluations at those
// worlds in the same order.  E records its awareness and reachability
// conjuncts as two children.
struct EvalTrace {
  Formula formula;
  std::string world;
  bool verdict;
  std::optional<std::vector<std::string>> quantified;
  std::vector<EvalTrace> children;
};

// Evaluates formulas against one model, memoizing the derived
// partitions per canonical chain.
class Evaluator {
 public:
  explicit Evaluator(const Model& m) : model_(m) {}

  bool holds(const std::string& world, const Formula& f) {
    check_inputs(world, f);
    return eval(world, f);
  }

  EvalTrace explain(const std::string& world, const Formula& f) {
    check_inputs(world, f);
    return trace(world, f);
  }

  const Model& model() const { return model_; }

 private:
  void check_inputs(const std::string& world, const Formula& f) {
    if (!model_.has_world(world)) throw EvalError("unknown world '" + world + "'");
    if (auto v = nesting_violation(f))
      throw EvalError("ill-formed formula: chain '" + to_string(v->inner) +
                      "' occurs under '" + to_string(v->outer) + "'");
    check_indices(f);
  }

  void check_indices(const Formula& f) {
    if (is_chain_op(f.op()) && !model_.has_chain(f.chain()))
      throw EvalError("unknown chain '" + to_string(f.chain()) + "'");
    if (f.op() == Op::ImplicitK && !model_.has_agent(f.agent()))
      throw EvalError("unknown agent '" + f.agent().name + "'");
    for (const auto& k : f.children()) check_indices(k);
  }

  const Partition& indist(const Chain& theta) {
    const std::string key = to_string(canon(theta));
    auto it = indist_.find(key);
    if (it == indist_.end()) it = indist_.emplace(key, model_.indist(theta)).first;
    return it->second;
  }

  const Partition& reach(const Chain& theta) {
    const std::string key = to_string(canon(theta));
    auto it = reach_.find(key);
    if (it == reach_.end()) it = reach_.emplace(key, model_.reach_c(theta)).first;
    return it->second;
  }

  bool eval(const std::string& w, const Formula& f) {
    switch (f.op()) {
      case Op::Atom:
        // an atom outside the model's vocabulary is false everywhere
        return model_.atom_true(w, f.atom_name());
      case Op::Not:
        return !eval(w, f.child());
      case Op::And:
        return eval(w, f.lhs()) && eval(w, f.rhs());
      case Op::Or:
        return eval(w, f.lhs()) || eval(w, f.rhs());
      case Op::Implies:
        return !eval(w, f.lhs()) || eval(w, f.rhs());
      case Op::Iff:
        return eval(w, f.lhs()) == eval(w, f.rhs());
      case Op::Aware: {
        const auto& aw = model_.awareness(f.chain());
        for (const auto& p : atoms_of(f.child()))
          if (!aw.count(p)) return false;
        return true;
      }
      case Op::ImplicitK:
        return all_of_block(model_.access(f.agent()).block_of(w), f.child());
      case Op::BoxIndist:
        return all_of_block(indist(f.chain()).block_of(w), f.child());
      case Op::CKnow:
        return all_of_block(reach(f.chain()).block_of(w), f.child());
      case Op::ExplicitK:
        // E[theta] phi = A[theta] phi and C[theta] phi
        return eval(w, aware(f.chain(), f.child())) &&
               eval(w, cknow(f.chain(), f.child()));
    }
    throw EvalError("unreachable");
  }

  bool all_of_block(const Partition::Block& block, const Formula& body) {
    for (const auto& v : block)
      if (!eval(v, body)) return false;
    return true;
  }

  EvalTrace trace(const std::string& w, const Formula& f) {
    EvalTrace t{f, w, false, std::nullopt, {}};
    switch (f.op()) {
      case Op::Atom:
        t.verdict = model_.atom_true(w, f.atom_name());
        break;
      case Op::Not:
        t.children.push_back(trace(w, f.child()));
        t.verdict = !t.children[0].verdict;
        break;
      case Op::And:
      case Op::Or:
      case Op::Implies:
      case Op::Iff: {
        t.children.push_back(trace(w, f.lhs()));
        t.children.push_back(trace(w, f.rhs()));
        const bool l = t.children[0].verdict, r = t.children[1].verdict;
        t.verdict = f.op() == Op::And       ? l && r
                    : f.op() == Op::Or      ? l || r
                    : f.op() == Op::Implies ? !l || r
                                            : l == r;
        break;
      }
      case Op::Aware:
        t.verdict = eval(w, f);
        break;
      case Op::ImplicitK:
      case Op::BoxIndist:
      case Op::CKnow: {
        const Partition::Block& block =
            f.op() == Op::ImplicitK ? model_.access(f.agent()).block_of(w)
            : f.op() == Op::BoxIndist ? indist(f.chain()).block_of(w)
                                      : reach(f.chain()).block_of(w);
        t.quantified = block;
        t.verdict = true;
        for (const auto& v : block) {
          t.children.push_back(trace(v, f.child()));
          t.verdict = t.verdict && t.children.back().verdict;
        }
        break;
      }
      case Op::ExplicitK: {
        t.children.push_back(trace(w, aware(f.chain(), f.child())));
        t.children.push_back(trace(w, cknow(f.chain(), f.child())));
        t.verdict = t.children[0].verdict && t.children[1].verdict;
        break;
      }
    }
    return t;
  }

  const Model& model_;
  std::map<std::string, Partition> indist_;
  std::map<std::string, Partition> reach_;
};

inline bool holds(const Model& m, const std::string& world, const Formula& f) {
  return Evaluator(m).holds(world, f);
}

inline EvalTrace explain(const Model& m, const std::string& world, const Formula& f) {
  return Evaluator(m).explain(world, f);
}

struct ValidityResult {
  bool valid;
  std::vector<std::string> falsifying;  // worlds where the formula fails
};

inline ValidityResult check_valid(const Model& m, const Formula& f) {
  Evaluator ev(m);
  ValidityResult r{true, {}};
  for (const auto& w : m.worlds()) {
    if (!ev.holds(w, f)) {
      r.valid = false;
      r.falsifying.push_back(w);
    }
  }
  return r;
}

inline bool model_valid(const Model& m, const Formula& f) {
  return check_valid(m, f).valid;
}

}  // namespace alpc
