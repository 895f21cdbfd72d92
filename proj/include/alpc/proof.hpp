#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "alpc/formula.hpp"

namespace alpc {

enum class AxiomName {
  TAUT,
  AN,
  ACN,
  AA,
  AL,
  AIndist,
  ACM,
  AK,
  ANIndist,
  AI,
  KA,
  NKA,
  K_L,
  T_L,
  Five_L,
  K_Indist,
  T_Indist,
  Five_Indist,
  K_C,
  MIX,
  IND,
  KAC,
};

inline const std::vector<std::pair<AxiomName, const char*>>& axiom_names() {
  static const std::vector<std::pair<AxiomName, const char*>> table = {
      {AxiomName::TAUT, "TAUT"},          {AxiomName::AN, "AN"},
      {AxiomName::ACN, "ACN"},            {AxiomName::AA, "AA"},
      {AxiomName::AL, "AL"},              {AxiomName::AIndist, "AIndist"},
      {AxiomName::ACM, "ACM"},            {AxiomName::AK, "AK"},
      {AxiomName::ANIndist, "ANIndist"},  {AxiomName::AI, "AI"},
      {AxiomName::KA, "KA"},              {AxiomName::NKA, "NKA"},
      {AxiomName::K_L, "K_L"},            {AxiomName::T_L, "T_L"},
      {AxiomName::Five_L, "5_L"},         {AxiomName::K_Indist, "K_X"},
      {AxiomName::T_Indist, "T_X"},       {AxiomName::Five_Indist, "5_X"},
      {AxiomName::K_C, "K_C"},            {AxiomName::MIX, "MIX"},
      {AxiomName::IND, "IND"},            {AxiomName::KAC, "KAC"},
  };
  return table;
}

inline std::string to_string(AxiomName name) {
  for (const auto& [n, text] : axiom_names())
    if (n == name) return text;
  return "?";
}

// Accepts the canonical spelling plus a few frictionless aliases.
inline std::optional<AxiomName> axiom_from_string(std::string_view text) {
  for (const auto& [n, t] : axiom_names())
    if (text == t) return n;
  static const std::map<std::string_view, AxiomName> aliases = {
      {"AX", AxiomName::AIndist},  {"ANX", AxiomName::ANIndist},
      {"KL", AxiomName::K_L},      {"TL", AxiomName::T_L},
      {"5L", AxiomName::Five_L},   {"KX", AxiomName::K_Indist},
      {"TX", AxiomName::T_Indist}, {"5X", AxiomName::Five_Indist},
      {"KC", AxiomName::K_C},
  };
  auto it = aliases.find(text);
  if (it == aliases.end()) return std::nullopt;
  return it->second;
}

// ---- propositional tautology with modal opacity --------------------------

inline constexpr std::size_t kTautVariableLimit = 20;

// Treats every maximal non-propositional subformula (and every atom) as
// an opaque variable and evaluates all assignments.
inline bool is_tautology(const Formula& f) {
  std::map<Formula, std::size_t> vars;
  std::function<void(const Formula&)> scan = [&](const Formula& g) {
    switch (g.op()) {
      case Op::Not:
      case Op::And:
      case Op::Or:
      case Op::Implies:
      case Op::Iff:
        for (const auto& k : g.children()) scan(k);
        break;
      default:
        vars.try_emplace(g, vars.size());
        break;
    }
  };
  scan(f);
  if (vars.size() > kTautVariableLimit)
    throw Error("tautology check limited to " +
                std::to_string(kTautVariableLimit) + " distinct subformulas");

  std::function<bool(const Formula&, unsigned long long)> eval =
      [&](const Formula& g, unsigned long long mask) -> bool {
    switch (g.op()) {
      case Op::Not: return !eval(g.child(), mask);
      case Op::And: return eval(g.lhs(), mask) && eval(g.rhs(), mask);
      case Op::Or: return eval(g.lhs(), mask) || eval(g.rhs(), mask);
      case Op::Implies: return !eval(g.lhs(), mask) || eval(g.rhs(), mask);
      case Op::Iff: return eval(g.lhs(), mask) == eval(g.rhs(), mask);
      default: return (mask >> vars.at(g)) & 1;
    }
  };
  const unsigned long long total = 1ull << vars.size();
  for (unsigned long long mask = 0; mask < total; ++mask)
    if (!eval(f, mask)) return false;
  return true;
}

// ---- schema matching ------------------------------------------------------

namespace detail {

// Theta sorted and deduplicated by canonical text; the shape every
// KA/NKA conjunction must take.
inline std::vector<Chain> canonical_theta(const std::vector<Chain>& theta) {
  std::map<std::string, Chain> by_key;
  for (const auto& t : theta) {
    Chain c = canon(t);
    by_key.try_emplace(to_string(c), c);
  }
  std::vector<Chain> out;
  for (const auto& [key, c] : by_key) out.push_back(c);
  return out;
}

// Right-associated conjunction of C[theta'] g over the canonical theta.
inline Formula c_conjunction(const std::vector<Chain>& theta, const Formula& g) {
  const std::vector<Chain> ts = canonical_theta(theta);
  if (ts.empty()) throw Error("empty theta has no KA/NKA expansion");
  Formula out = cknow(ts.back(), g);
  for (auto it = ts.rbegin() + 1; it != ts.rend(); ++it)
    out = conj(cknow(*it, g), out);
  return out;
}

}  // namespace detail

// Null on success, otherwise the reason the formula is not an instance
// of the named schema.
inline std::optional<std::string> match_axiom_diag(AxiomName name, const Formula& f,
                                                   const std::vector<Chain>& theta) {
  auto fail = [&](const std::string& why) -> std::optional<std::string> {
    return "not an instance of " + to_string(name) + ": " + why;
  };
  auto shape = [&]() { return fail("shape mismatch"); };
  auto chain_check = [&](const Chain& c) -> std::optional<std::string> {
    if (!theta_contains(theta, c))
      return fail("chain '" + to_string(c) + "' not in theta");
    return std::nullopt;
  };

  if (!well_formed(f)) return fail("formula is ill-formed");

  switch (name) {
    case AxiomName::TAUT:
      if (!is_tautology(f)) return fail("not a propositional tautology");
      return std::nullopt;

    case AxiomName::AN: {
      if (f.op() != Op::Iff) return shape();
      const Formula &l = f.lhs(), &r = f.rhs();
      if (l.op() != Op::Aware || r.op() != Op::Aware) return shape();
      if (l.chain() != r.chain()) return shape();
      if (!(r.child() == neg(l.child()))) return shape();
      return chain_check(l.chain());
    }

    case AxiomName::ACN: {
      if (f.op() != Op::Iff) return shape();
      const Formula &l = f.lhs(), &r = f.rhs();
      if (l.op() != Op::Aware || l.child().op() != Op::And) return shape();
      const Formula expect =
          conj(aware(l.chain(), l.child().lhs()), aware(l.chain(), l.child().rhs()));
      if (!(r == expect)) return shape();
      return chain_check(l.chain());
    }

    case AxiomName::AA:
    case AxiomName::AL:
    case AxiomName::AIndist:
    case AxiomName::ACM:
    case AxiomName::AK: {
      // A[t] phi <-> A[t] (M phi) for the schema's inner operator M
      if (f.op() != Op::Iff) return shape();
      const Formula &l = f.lhs(), &r = f.rhs();
      if (l.op() != Op::Aware || r.op() != Op::Aware) return shape();
      if (l.chain() != r.chain()) return shape();
      const Formula& inner = r.child();
      const Op want = name == AxiomName::AA        ? Op::Aware
                      : name == AxiomName::AL      ? Op::ImplicitK
                      : name == AxiomName::AIndist ? Op::BoxIndist
                      : name == AxiomName::ACM     ? Op::CKnow
                                                   : Op::ExplicitK;
      if (inner.op() != want) return shape();
      if (!(inner.child() == l.child())) return shape();
      if (auto bad = chain_check(l.chain())) return bad;
      if (is_chain_op(want)) return chain_check(inner.chain());
      return std::nullopt;
    }

    case AxiomName::ANIndist: {
      // A[t] p & p -> X[t] p, p atomic
      if (f.op() != Op::Implies || f.rhs().op() != Op::BoxIndist) return shape();
      const Formula& x = f.rhs();
      if (x.child().op() != Op::Atom)
        return fail("the schema requires an atomic proposition");
      if (!(f.lhs() == conj(aware(x.chain(), x.child()), x.child()))) return shape();
      return chain_check(x.chain());
    }

    case AxiomName::AI: {
      if (f.op() != Op::Implies) return shape();
      const Formula &l = f.lhs(), &r = f.rhs();
      if (l.op() != Op::Aware || r.op() != Op::Aware) return shape();
      if (!(l.child() == r.child())) return shape();
      if (auto bad = chain_check(l.chain())) return bad;
      if (auto bad = chain_check(r.chain())) return bad;
      if (!chain_leq(r.chain(), l.chain()))
        return fail("side condition requires '" + to_string(r.chain()) +
                    "' <= '" + to_string(l.chain()) + "'");
      return std::nullopt;
    }

    case AxiomName::KA: {
      if (f.op() != Op::Implies || f.lhs().op() != Op::Aware) return shape();
      if (!(f.rhs() == detail::c_conjunction(theta, f.lhs()))) return shape();
      return chain_check(f.lhs().chain());
    }

    case AxiomName::NKA: {
      if (f.op() != Op::Implies || f.lhs().op() != Op::Not ||
          f.lhs().child().op() != Op::Aware)
        return shape();
      if (!(f.rhs() == detail::c_conjunction(theta, f.lhs()))) return shape();
      return chain_check(f.lhs().child().chain());
    }

    case AxiomName::K_L:
    case AxiomName::K_Indist:
    case AxiomName::K_C: {
      // M (phi -> psi) -> (M phi -> M psi)
      if (f.op() != Op::Implies) return shape();
      const Formula &l = f.lhs(), &r = f.rhs();
      const Op want = name == AxiomName::K_L        ? Op::ImplicitK
                      : name == AxiomName::K_Indist ? Op::BoxIndist
                                                    : Op::CKnow;
      if (l.op() != want || l.child().op() != Op::Implies) return shape();
      const Formula& x = l.child().lhs();
      const Formula& y = l.child().rhs();
      Formula expect = name == AxiomName::K_L
                           ? implies(implicit_k(l.agent(), x), implicit_k(l.agent(), y))
                           : implies(Formula::make_chain_op(want, l.chain(), x),
                                     Formula::make_chain_op(want, l.chain(), y));
      if (!(r == expect)) return shape();
      if (want != Op::ImplicitK) return chain_check(l.chain());
      return std::nullopt;
    }

    case AxiomName::T_L:
    case AxiomName::T_Indist: {
      if (f.op() != Op::Implies) return shape();
      const Formula& l = f.lhs();
      const Op want = name == AxiomName::T_L ? Op::ImplicitK : Op::BoxIndist;
      if (l.op() != want || !(l.child() == f.rhs())) return shape();
      if (want == Op::BoxIndist) return chain_check(l.chain());
      return std::nullopt;
    }

    case AxiomName::Five_L:
    case AxiomName::Five_Indist: {
      // !M phi -> M !M phi
      if (f.op() != Op::Implies || f.lhs().op() != Op::Not) return shape();
      const Formula& inner = f.lhs().child();
      const Op want = name == AxiomName::Five_L ? Op::ImplicitK : Op::BoxIndist;
      if (inner.op() != want) return shape();
      Formula expect = want == Op::ImplicitK
                           ? implicit_k(inner.agent(), f.lhs())
                           : box_indist(inner.chain(), f.lhs());
      if (!(f.rhs() == expect)) return shape();
      if (want == Op::BoxIndist) return chain_check(inner.chain());
      return std::nullopt;
    }

    case AxiomName::MIX: {
      // C[t] phi -> phi & X[t] I[last t] C[t] phi
      if (f.op() != Op::Implies || f.lhs().op() != Op::CKnow) return shape();
      const Formula& c = f.lhs();
      const Formula expect =
          conj(c.child(),
               box_indist(c.chain(), implicit_k(c.chain().last(), c)));
      if (!(f.rhs() == expect)) return shape();
      return chain_check(c.chain());
    }

    case AxiomName::IND: {
      // C[t] (phi -> X[t] I[last t] phi) -> (phi -> C[t] phi)
      if (f.op() != Op::Implies || f.lhs().op() != Op::CKnow) return shape();
      const Formula& c = f.lhs();
      if (c.child().op() != Op::Implies) return shape();
      const Formula& x = c.child().lhs();
      const Formula expect_body =
          implies(x, box_indist(c.chain(), implicit_k(c.chain().last(), x)));
      if (!(c.child() == expect_body)) return shape();
      if (!(f.rhs() == implies(x, cknow(c.chain(), x)))) return shape();
      return chain_check(c.chain());
    }

    case AxiomName::KAC: {
      if (f.op() != Op::Iff || f.lhs().op() != Op::ExplicitK) return shape();
      const Formula& e = f.lhs();
      if (!(f.rhs() == conj(aware(e.chain(), e.child()), cknow(e.chain(), e.child()))))
        return shape();
      return chain_check(e.chain());
    }
  }
  return fail("unknown axiom");
}

inline bool match_axiom(AxiomName name, const Formula& f,
                        const std::vector<Chain>& theta) {
  return !match_axiom_diag(name, f, theta).has_value();
}

// ---- instantiation --------------------------------------------------------

struct Bindings {
  std::map<std::string, Formula> formulas;  // "phi", "psi", "p"
  std::map<std::string, Chain> chains;      // "theta", "theta2"
  std::map<std::string, Agent> agents;      // "i"
};

inline Formula instantiate_axiom(AxiomName name, const Bindings& b,
                                 const std::vector<Chain>& theta) {
  auto phi = [&](const char* key) -> const Formula& {
    auto it = b.formulas.find(key);
    if (it == b.formulas.end())
      throw Error(to_string(name) + " needs formula binding '" + key + "'");
    return it->second;
  };
  auto ch = [&](const char* key) -> const Chain& {
    auto it = b.chains.find(key);
    if (it == b.chains.end())
      throw Error(to_string(name) + " needs chain binding '" + key + "'");
    return it->second;
  };
  auto ag = [&]() -> const Agent& {
    auto it = b.agents.find("i");
    if (it == b.agents.end())
      throw Error(to_string(name) + " needs agent binding 'i'");
    return it->second;
  };

  Formula out = [&]() -> Formula {
    switch (name) {
      case AxiomName::TAUT:
        throw Error("TAUT is not generated from bindings");
      case AxiomName::AN:
        return iff(aware(ch("theta"), phi("phi")), aware(ch("theta"), neg(phi("phi"))));
      case AxiomName::ACN:
        return iff(aware(ch("theta"), conj(phi("phi"), phi("psi"))),
                   conj(aware(ch("theta"), phi("phi")), aware(ch("theta"), phi("psi"))));
      case AxiomName::AA:
        return iff(aware(ch("theta"), phi("phi")),
                   aware(ch("theta"), aware(ch("theta2"), phi("phi"))));
      case AxiomName::AL:
        return iff(aware(ch("theta"), phi("phi")),
                   aware(ch("theta"), implicit_k(ag(), phi("phi"))));
      case AxiomName::AIndist:
        return iff(aware(ch("theta"), phi("phi")),
                   aware(ch("theta"), box_indist(ch("theta2"), phi("phi"))));
      case AxiomName::ACM:
        return iff(aware(ch("theta"), phi("phi")),
                   aware(ch("theta"), cknow(ch("theta2"), phi("phi"))));
      case AxiomName::AK:
        return iff(aware(ch("theta"), phi("phi")),
                   aware(ch("theta"), explicit_k(ch("theta2"), phi("phi"))));
      case AxiomName::ANIndist: {
        const Formula& p = phi("p");
        if (p.op() != Op::Atom)
          throw Error("ANIndist needs 'p' bound to an atomic proposition");
        return implies(conj(aware(ch("theta"), p), p), box_indist(ch("theta"), p));
      }
      case AxiomName::AI: {
        const Chain &outer = ch("theta"), &inner = ch("theta2");
        if (!chain_leq(inner, outer))
          throw Error("AI side condition: '" + to_string(inner) + "' <= '" +
                      to_string(outer) + "' fails");
        return implies(aware(outer, phi("phi")), aware(inner, phi("phi")));
      }
      case AxiomName::KA: {
        Formula head = aware(ch("theta"), phi("phi"));
        return implies(head, detail::c_conjunction(theta, head));
      }
      case AxiomName::NKA: {
        Formula head = neg(aware(ch("theta"), phi("phi")));
        return implies(head, detail::c_conjunction(theta, head));
      }
      case AxiomName::K_L:
        return implies(implicit_k(ag(), implies(phi("phi"), phi("psi"))),
                       implies(implicit_k(ag(), phi("phi")),
                               implicit_k(ag(), phi("psi"))));
      case AxiomName::T_L:
        return implies(implicit_k(ag(), phi("phi")), phi("phi"));
      case AxiomName::Five_L: {
        Formula nk = neg(implicit_k(ag(), phi("phi")));
        return implies(nk, implicit_k(ag(), nk));
      }
      case AxiomName::K_Indist:
        return implies(box_indist(ch("theta"), implies(phi("phi"), phi("psi"))),
                       implies(box_indist(ch("theta"), phi("phi")),
                               box_indist(ch("theta"), phi("psi"))));
      case AxiomName::T_Indist:
        return implies(box_indist(ch("theta"), phi("phi")), phi("phi"));
      case AxiomName::Five_Indist: {
        Formula nx = neg(box_indist(ch("theta"), phi("phi")));
        return implies(nx, box_indist(ch("theta"), nx));
      }
      case AxiomName::K_C:
        return implies(cknow(ch("theta"), implies(phi("phi"), phi("psi"))),
                       implies(cknow(ch("theta"), phi("phi")),
                               cknow(ch("theta"), phi("psi"))));
      case AxiomName::MIX: {
        const Chain& t = ch("theta");
        Formula c = cknow(t, phi("phi"));
        return implies(c, conj(phi("phi"), box_indist(t, implicit_k(t.last(), c))));
      }
      case AxiomName::IND: {
        const Chain& t = ch("theta");
        const Formula& x = phi("phi");
        return implies(
            cknow(t, implies(x, box_indist(t, implicit_k(t.last(), x)))),
            implies(x, cknow(t, x)));
      }
      case AxiomName::KAC: {
        const Chain& t = ch("theta");
        return iff(explicit_k(t, phi("phi")),
                   conj(aware(t, phi("phi")), cknow(t, phi("phi"))));
      }
    }
    throw Error("unknown axiom");
  }();

  if (auto v = nesting_violation(out))
    throw Error("instance is ill-formed: chain '" + to_string(v->inner) +
                "' occurs under '" + to_string(v->outer) + "'");
  return out;
}

// ---- proofs ---------------------------------------------------------------

struct AxiomJust {
  AxiomName name;
};
struct MpJust {
  std::size_t from_phi;  // line holding phi
  std::size_t from_imp;  // line holding phi -> psi
};
struct LgJust {
  std::size_t from;
  Agent agent;
};
struct IndistGJust {
  std::size_t from;
  Chain chain;
};
struct CgJust {
  std::size_t from;
  Chain chain;
};

using Justification = std::variant<AxiomJust, MpJust, LgJust, IndistGJust, CgJust>;

struct ProofLine {
  std::size_t index;  // 1-based
  Formula formula;
  Justification just;
};

struct Proof {
  std::vector<Chain> theta;
  std::vector<ProofLine> lines;
};

struct Verdict {
  bool accepted;
  std::size_t line;    // first failing line when rejected, 0 otherwise
  std::string reason;  // empty when accepted
};

namespace detail {

inline std::optional<std::string> cited(const Proof& pf, std::size_t own,
                                        std::size_t ref, const Formula** out) {
  if (ref == 0 || ref >= own)
    return "cites line " + std::to_string(ref) +
           ", which is not an earlier line";
  *out = &pf.lines[ref - 1].formula;
  return std::nullopt;
}

}  // namespace detail

// Check a single line of a proof, assuming nothing about the others
// except that earlier lines exist.  Null on success.
inline std::optional<std::string> check_line(const Proof& pf, std::size_t index) {
  if (index == 0 || index > pf.lines.size()) return "no such line";
  const ProofLine& line = pf.lines[index - 1];
  const Formula& f = line.formula;

  if (auto v = nesting_violation(f))
    return "formula is ill-formed: chain '" + to_string(v->inner) +
           "' occurs under '" + to_string(v->outer) + "'";
  for (const auto& c : chains_of(f)) {
    if (!theta_contains(pf.theta, c))
      return "chain '" + to_string(c) + "' is not in the proof's theta";
  }

  return std::visit(
      [&](const auto& just) -> std::optional<std::string> {
        using T = std::decay_t<decltype(just)>;
        if constexpr (std::is_same_v<T, AxiomJust>) {
          return match_axiom_diag(just.name, f, pf.theta);
        } else if constexpr (std::is_same_v<T, MpJust>) {
          const Formula *phi = nullptr, *imp = nullptr;
          if (auto bad = detail::cited(pf, index, just.from_phi, &phi)) return bad;
          if (auto bad = detail::cited(pf, index, just.from_imp, &imp)) return bad;
          if (!(*imp == implies(*phi, f)))
            return "modus ponens mismatch: line " + std::to_string(just.from_imp) +
                   " is not 'line " + std::to_string(just.from_phi) +
                   " -> this line'";
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, LgJust>) {
          const Formula* prem = nullptr;
          if (auto bad = detail::cited(pf, index, just.from, &prem)) return bad;
          if (!(f == implicit_k(just.agent, *prem)))
            return "generalization mismatch: expected I[" + just.agent.name +
                   "] applied to line " + std::to_string(just.from);
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, IndistGJust>) {
          const Formula* prem = nullptr;
          if (auto bad = detail::cited(pf, index, just.from, &prem)) return bad;
          if (!(f == box_indist(just.chain, *prem)))
            return "generalization mismatch: expected X[" + to_string(just.chain) +
                   "] applied to line " + std::to_string(just.from);
          return std::nullopt;
        } else {
          static_assert(std::is_same_v<T, CgJust>);
          const Formula* prem = nullptr;
          if (auto bad = detail::cited(pf, index, just.from, &prem)) return bad;
          if (!(f == cknow(just.chain, *prem)))
            return "generalization mismatch: expected C[" + to_string(just.chain) +
                   "] applied to line " + std::to_string(just.from);
          return std::nullopt;
        }
      },
      line.just);
}

inline Verdict verify(const Proof& pf) {
  if (pf.lines.empty()) return {false, 0, "proof has no lines"};
  for (std::size_t k = 1; k <= pf.lines.size(); ++k) {
    if (auto bad = check_line(pf, k)) return {false, k, *bad};
  }
  return {true, 0, ""};
}

inline const Formula& theorem_of(const Proof& pf) {
  if (pf.lines.empty()) throw Error("proof has no lines");
  return pf.lines.back().formula;
}

}  // namespace alpc
