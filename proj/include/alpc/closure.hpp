#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "alpc/formula.hpp"

namespace alpc {

// cl(phi): the least set containing phi that is closed under the eleven
// generation rules, relative to a finite family Theta of chains.  Members
// are identified structurally with canonical chains; the generator map
// remembers which rule(s) produced each member.
struct ClosureResult {
  std::vector<Formula> formulas;              // sorted: modal depth, then text
  std::map<Formula, std::set<int>> generator;

  bool contains(const Formula& f) const {
    return generator.count(canonicalize_chains(f)) != 0;
  }
  std::size_t size() const { return generator.size(); }
};

inline ClosureResult closure(const Formula& phi_in, const std::vector<Chain>& theta_in) {
  if (auto v = nesting_violation(phi_in))
    throw Error("ill-formed formula: chain '" + to_string(v->inner) +
                "' occurs under '" + to_string(v->outer) + "'");

  const Formula phi = canonicalize_chains(phi_in);
  std::vector<Chain> theta;
  std::set<Chain> theta_set;
  for (const auto& t : theta_in) {
    Chain c = canon(t);
    if (theta_set.insert(c).second) theta.push_back(std::move(c));
  }
  std::set<Chain> used;
  collect_chains(phi, used);
  for (const auto& c : used) {
    if (!theta_set.count(c))
      throw Error("chain '" + to_string(c) + "' of the formula is not in theta");
  }

  ClosureResult result;
  std::deque<Formula> work;
  auto add = [&](const Formula& f, int cond) {
    auto [it, fresh] = result.generator.try_emplace(f);
    it->second.insert(cond);
    if (fresh) work.push_back(f);
  };

  add(phi, 1);

  // rules 6 and 7 fire on subformulas of phi itself, not on the
  // closure being built
  for (const auto& s : subformulas(phi)) {
    if (s.op() == Op::ImplicitK) {
      add(implicit_k(s.agent(), s), 6);
      add(implicit_k(s.agent(), neg(s)), 6);
    } else if (s.op() == Op::BoxIndist) {
      add(box_indist(s.chain(), s), 7);
      add(box_indist(s.chain(), neg(s)), 7);
    }
  }

  std::set<Formula> atoms_seen;
  std::vector<Formula> awares_seen;

  while (!work.empty()) {
    const Formula psi = work.front();
    work.pop_front();

    for (const auto& k : psi.children()) add(k, 2);          // rule 2
    if (psi.op() != Op::Not) add(neg(psi), 3);               // rule 3

    switch (psi.op()) {
      case Op::Atom:
        // rule 5, atom side: pair with every awareness formula seen
        if (atoms_seen.insert(psi).second) {
          for (const auto& aw : awares_seen) add(box_indist(aw.chain(), psi), 5);
        }
        break;
      case Op::Aware: {
        for (const auto& t : theta) {
          add(cknow(t, psi), 4);
          add(cknow(t, neg(psi)), 4);
          add(aware(t, psi.child()), 5);                     // A_theta' psi
        }
        for (const auto& chi : subformulas(psi.child()))
          add(aware(psi.chain(), chi), 5);                   // A_theta chi
        for (const auto& p : atoms_seen) add(box_indist(psi.chain(), p), 5);
        awares_seen.push_back(psi);
        break;
      }
      case Op::CKnow:
        // rule 8, with the chain's last agent doing the imagining
        add(box_indist(psi.chain(), implicit_k(psi.chain().last(), psi)), 8);
        break;
      case Op::ImplicitK:
        if (psi.child().op() == Op::CKnow) {                 // rule 9
          add(implicit_k(psi.agent(), psi), 9);
          add(implicit_k(psi.agent(), neg(psi)), 9);
        }
        break;
      case Op::BoxIndist: {
        const Formula& inner = psi.child();
        if (inner.op() == Op::ImplicitK && inner.child().op() == Op::CKnow &&
            psi.chain() == inner.child().chain()) {          // rule 10
          add(box_indist(psi.chain(), psi), 10);
          add(box_indist(psi.chain(), neg(psi)), 10);
        }
        break;
      }
      case Op::ExplicitK:                                    // rule 11
        add(aware(psi.chain(), psi.child()), 11);
        add(cknow(psi.chain(), psi.child()), 11);
        break;
      default:
        break;
    }
  }

  result.formulas.reserve(result.generator.size());
  for (const auto& [f, conds] : result.generator) result.formulas.push_back(f);
  std::sort(result.formulas.begin(), result.formulas.end(),
            [](const Formula& x, const Formula& y) {
              const int dx = modal_depth(x), dy = modal_depth(y);
              if (dx != dy) return dx < dy;
              return to_string(x) < to_string(y);
            });
  return result;
}

struct ClosureStats {
  std::size_t cardinality;
  int max_modal_depth;
  std::map<int, std::size_t> per_condition;
};

inline ClosureStats closure_stats(const ClosureResult& r) {
  ClosureStats s{r.generator.size(), 0, {}};
  for (const auto& [f, conds] : r.generator) {
    s.max_modal_depth = std::max(s.max_modal_depth, modal_depth(f));
    for (int c : conds) ++s.per_condition[c];
  }
  return s;
}

}  // namespace alpc
