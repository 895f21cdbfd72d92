#pragma once

// Shared test helpers: random models, random well-formed formulas, and
// a deliberately naive reference evaluator that works on raw relations
// instead of partitions.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "alpc/closure.hpp"
#include "alpc/model.hpp"
#include "alpc/proof.hpp"
#include "alpc/semantics.hpp"

namespace testsupport {

using namespace alpc;

inline std::vector<std::string> make_worlds(int n) {
  std::vector<std::string> out;
  for (int k = 1; k <= n; ++k) out.push_back("w" + std::to_string(k));
  return out;
}

inline std::vector<std::vector<std::string>> random_blocks(
    std::mt19937_64& rng, const std::vector<std::string>& worlds) {
  std::vector<std::vector<std::string>> blocks;
  for (const auto& w : worlds) {
    std::uniform_int_distribution<std::size_t> pick(0, blocks.size());
    std::size_t at = pick(rng);
    if (at == blocks.size()) blocks.push_back({w});
    else blocks[at].push_back(w);
  }
  return blocks;
}

// Random model over the given vocabulary.  Chains are taken as given
// (already canonical); awareness is sampled monotonically along the
// prefix order.
inline Model random_test_model(std::mt19937_64& rng, int num_worlds,
                               const std::vector<std::string>& agents,
                               const std::vector<std::string>& atoms,
                               std::vector<Chain> chains) {
  ModelData d;
  d.worlds = make_worlds(num_worlds);
  d.agents = agents;
  d.atoms = atoms;
  for (const auto& w : d.worlds) {
    std::vector<std::string> tr;
    for (const auto& p : atoms)
      if (rng() & 1) tr.push_back(p);
    d.valuation[w] = tr;
  }
  for (const auto& a : agents) d.access[a] = random_blocks(rng, d.worlds);

  std::sort(chains.begin(), chains.end(), [](const Chain& x, const Chain& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  std::map<std::string, std::set<std::string>> assigned;
  for (const auto& theta : chains) {
    std::set<std::string> allowed(atoms.begin(), atoms.end());
    for (const auto& [key, aw] : assigned) {
      if (chain_leq(parse_chain(key), theta)) {
        std::set<std::string> cut;
        std::set_intersection(allowed.begin(), allowed.end(), aw.begin(), aw.end(),
                              std::inserter(cut, cut.begin()));
        allowed = std::move(cut);
      }
    }
    std::vector<std::string> pool(allowed.begin(), allowed.end());
    std::set<std::string> chosen;
    while (chosen.empty()) {
      for (const auto& p : pool)
        if (rng() % 5 < 3) chosen.insert(p);
    }
    assigned[to_string(theta)] = chosen;
  }
  for (const auto& [key, aw] : assigned)
    d.awareness[key] = std::vector<std::string>(aw.begin(), aw.end());
  return validate(d);
}

// Random well-formed formula whose chains come from `theta` and
// respect the nesting restriction under the given bound.
inline Formula random_wf_formula(std::mt19937_64& rng, int depth,
                                 const std::vector<Chain>& theta,
                                 const std::vector<std::string>& agents,
                                 const std::vector<std::string>& atoms,
                                 const Chain* bound = nullptr) {
  auto pick_atom = [&] {
    return atom(atoms[rng() % atoms.size()]);
  };
  if (depth <= 0) return pick_atom();
  std::vector<Chain> extensions;
  for (const auto& t : theta)
    if (!bound || chain_leq(*bound, t)) extensions.push_back(t);

  for (;;) {
    switch (rng() % 10) {
      case 0:
      case 1:
        return pick_atom();
      case 2:
        return neg(random_wf_formula(rng, depth - 1, theta, agents, atoms, bound));
      case 3:
        return conj(random_wf_formula(rng, depth - 1, theta, agents, atoms, bound),
                    random_wf_formula(rng, depth - 1, theta, agents, atoms, bound));
      case 4:
        return disj(random_wf_formula(rng, depth - 1, theta, agents, atoms, bound),
                    random_wf_formula(rng, depth - 1, theta, agents, atoms, bound));
      case 5:
        return implies(random_wf_formula(rng, depth - 1, theta, agents, atoms, bound),
                       random_wf_formula(rng, depth - 1, theta, agents, atoms, bound));
      case 6:
        return implicit_k(Agent{agents[rng() % agents.size()]},
                          random_wf_formula(rng, depth - 1, theta, agents, atoms, bound));
      case 7: {
        const Chain& t = theta[rng() % theta.size()];
        Op op = (rng() & 1) ? Op::BoxIndist : Op::CKnow;
        return Formula::make_chain_op(
            op, t, random_wf_formula(rng, depth - 1, theta, agents, atoms, bound));
      }
      default: {
        if (extensions.empty()) continue;  // no A/E chain fits here
        const Chain& t = extensions[rng() % extensions.size()];
        Op op = (rng() & 1) ? Op::Aware : Op::ExplicitK;
        return Formula::make_chain_op(
            op, t, random_wf_formula(rng, depth - 1, theta, agents, atoms, &t));
      }
    }
  }
}

// Flat re-statement of the eleven closure rules: checks that `r` really
// is a fixpoint for `phi` without any worklist bookkeeping.
inline std::vector<std::string> stability_violations(const ClosureResult& r,
                                                     const Formula& phi_in,
                                                     const std::vector<Chain>& theta_in) {
  const Formula phi = canonicalize_chains(phi_in);
  std::vector<Chain> theta;
  {
    std::set<Chain> seen;
    for (const auto& t : theta_in)
      if (seen.insert(canon(t)).second) theta.push_back(canon(t));
  }
  std::set<Formula> members;
  for (const auto& [f, conds] : r.generator) members.insert(f);

  std::vector<std::string> bad;
  auto need = [&](const Formula& f, int rule) {
    if (!members.count(f))
      bad.push_back("rule " + std::to_string(rule) + " misses " + to_string(f));
  };

  need(phi, 1);
  for (const auto& s : subformulas(phi)) {
    if (s.op() == Op::ImplicitK) {
      need(implicit_k(s.agent(), s), 6);
      need(implicit_k(s.agent(), neg(s)), 6);
    }
    if (s.op() == Op::BoxIndist) {
      need(box_indist(s.chain(), s), 7);
      need(box_indist(s.chain(), neg(s)), 7);
    }
  }

  std::set<Formula> atoms_in_cl;
  for (const auto& f : members)
    if (f.op() == Op::Atom) atoms_in_cl.insert(f);

  for (const auto& psi : members) {
    for (const auto& k : psi.children()) need(k, 2);
    if (psi.op() != Op::Not) need(neg(psi), 3);
    if (psi.op() == Op::Aware) {
      for (const auto& t : theta) {
        need(cknow(t, psi), 4);
        need(cknow(t, neg(psi)), 4);
        need(aware(t, psi.child()), 5);
      }
      for (const auto& chi : subformulas(psi.child())) need(aware(psi.chain(), chi), 5);
      for (const auto& p : atoms_in_cl) need(box_indist(psi.chain(), p), 5);
    }
    if (psi.op() == Op::CKnow)
      need(box_indist(psi.chain(), implicit_k(psi.chain().last(), psi)), 8);
    if (psi.op() == Op::ImplicitK && psi.child().op() == Op::CKnow) {
      need(implicit_k(psi.agent(), psi), 9);
      need(implicit_k(psi.agent(), neg(psi)), 9);
    }
    if (psi.op() == Op::BoxIndist && psi.child().op() == Op::ImplicitK &&
        psi.child().child().op() == Op::CKnow &&
        psi.chain() == psi.child().child().chain()) {
      need(box_indist(psi.chain(), psi), 10);
      need(box_indist(psi.chain(), neg(psi)), 10);
    }
    if (psi.op() == Op::ExplicitK) {
      need(aware(psi.chain(), psi.child()), 11);
      need(cknow(psi.chain(), psi.child()), 11);
    }
  }
  return bad;
}

// Draws bindings that make a well-formed instance of the named schema.
// TAUT has no binding form and is not handled here.
inline Bindings random_schema_bindings(std::mt19937_64& rng, AxiomName name,
                                       const std::vector<Chain>& theta,
                                       const std::vector<std::string>& agents,
                                       const std::vector<std::string>& atoms) {
  auto random_chain = [&]() { return theta[rng() % theta.size()]; };
  auto leq_pair = [&]() {  // returns (small, large)
    for (;;) {
      Chain x = random_chain(), y = random_chain();
      if (chain_leq(x, y)) return std::make_pair(x, y);
      if (chain_leq(y, x)) return std::make_pair(y, x);
    }
  };
  auto body = [&](const Chain* bound) {
    return random_wf_formula(rng, 1 + rng() % 2, theta, agents, atoms, bound);
  };

  Bindings b;
  b.agents.insert_or_assign("i", Agent{agents[rng() % agents.size()]});
  switch (name) {
    case AxiomName::AA:
    case AxiomName::AK: {
      auto [small, large] = leq_pair();
      b.chains.insert_or_assign("theta", small);
      b.chains.insert_or_assign("theta2", large);
      b.formulas.insert_or_assign("phi", body(&large));
      break;
    }
    case AxiomName::AIndist:
    case AxiomName::ACM: {
      Chain outer = random_chain();
      b.chains.insert_or_assign("theta", outer);
      b.chains.insert_or_assign("theta2", random_chain());
      b.formulas.insert_or_assign("phi", body(&outer));
      break;
    }
    case AxiomName::AI: {
      auto [small, large] = leq_pair();
      b.chains.insert_or_assign("theta", large);
      b.chains.insert_or_assign("theta2", small);
      b.formulas.insert_or_assign("phi", body(&large));
      break;
    }
    case AxiomName::ANIndist:
      b.chains.insert_or_assign("theta", random_chain());
      b.formulas.insert_or_assign("p", atom(atoms[rng() % atoms.size()]));
      break;
    case AxiomName::K_L:
    case AxiomName::K_Indist:
    case AxiomName::K_C:
      b.chains.insert_or_assign("theta", random_chain());
      b.formulas.insert_or_assign("phi", body(nullptr));
      b.formulas.insert_or_assign("psi", body(nullptr));
      break;
    case AxiomName::ACN: {
      Chain outer = random_chain();
      b.chains.insert_or_assign("theta", outer);
      b.formulas.insert_or_assign("phi", body(&outer));
      b.formulas.insert_or_assign("psi", body(&outer));
      break;
    }
    case AxiomName::AN:
    case AxiomName::AL:
    case AxiomName::KA:
    case AxiomName::NKA:
    case AxiomName::KAC: {
      Chain outer = random_chain();
      b.chains.insert_or_assign("theta", outer);
      b.formulas.insert_or_assign("phi", body(&outer));
      break;
    }
    default:  // T_L, Five_L, T/Five_Indist, MIX, IND
      b.chains.insert_or_assign("theta", random_chain());
      b.formulas.insert_or_assign("phi", body(nullptr));
      break;
  }
  return b;
}

// Reference evaluator: builds the accessibility-and-indistinguishability
// relations explicitly and closes their composition by iterated
// squaring.  No Partition machinery involved.
class NaiveEval {
 public:
  explicit NaiveEval(const Model& m) : m_(m), n_(m.worlds().size()) {}

  bool holds(const std::string& w, const Formula& f) { return eval(index(w), f); }

 private:
  using Matrix = std::vector<std::vector<bool>>;

  std::size_t index(const std::string& w) const {
    const auto& ws = m_.worlds();
    return std::lower_bound(ws.begin(), ws.end(), w) - ws.begin();
  }

  Matrix access_matrix(const Agent& i) const {
    Matrix r(n_, std::vector<bool>(n_, false));
    for (const auto& b : m_.access(i).blocks())
      for (const auto& v : b)
        for (const auto& w : b) r[index(v)][index(w)] = true;
    return r;
  }

  Matrix indist_matrix(const Chain& theta) const {
    const auto& aw = m_.awareness(theta);
    Matrix r(n_, std::vector<bool>(n_, false));
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        bool agree = true;
        for (const auto& p : aw)
          agree = agree && m_.atom_true(m_.worlds()[i], p) ==
                               m_.atom_true(m_.worlds()[j], p);
        r[i][j] = agree;
      }
    }
    return r;
  }

  // (w,u) in compose iff there is v with (w,v) in first and (v,u) in second
  static Matrix compose(const Matrix& first, const Matrix& second) {
    const std::size_t n = first.size();
    Matrix r(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t v = 0; v < n; ++v)
        if (first[i][v])
          for (std::size_t j = 0; j < n; ++j)
            if (second[v][j]) r[i][j] = true;
    return r;
  }

  static Matrix transitive_closure(Matrix r) {
    const std::size_t n = r.size();
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k)
            if (r[i][j] && r[j][k] && !r[i][k]) {
              r[i][k] = true;
              changed = true;
            }
    }
    return r;
  }

  bool eval(std::size_t w, const Formula& f) {
    switch (f.op()) {
      case Op::Atom:
        return m_.atom_true(m_.worlds()[w], f.atom_name());
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
        const auto& aw = m_.awareness(f.chain());
        for (const auto& p : atoms_of(f.child()))
          if (!aw.count(p)) return false;
        return true;
      }
      case Op::ImplicitK: {
        Matrix r = access_matrix(f.agent());
        for (std::size_t v = 0; v < n_; ++v)
          if (r[w][v] && !eval(v, f.child())) return false;
        return true;
      }
      case Op::BoxIndist: {
        Matrix r = indist_matrix(f.chain());
        for (std::size_t v = 0; v < n_; ++v)
          if (r[w][v] && !eval(v, f.child())) return false;
        return true;
      }
      case Op::CKnow: {
        Matrix r = transitive_closure(
            compose(indist_matrix(f.chain()), access_matrix(f.chain().last())));
        for (std::size_t v = 0; v < n_; ++v)
          if (r[w][v] && !eval(v, f.child())) return false;
        return true;
      }
      case Op::ExplicitK:
        return eval(w, aware(f.chain(), f.child())) &&
               eval(w, cknow(f.chain(), f.child()));
    }
    return false;
  }

  const Model& m_;
  std::size_t n_;
};

}  // namespace testsupport
