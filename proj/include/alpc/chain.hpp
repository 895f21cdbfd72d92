#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "alpc/error.hpp"

namespace alpc {

// Agent and atom names share the same lexical shape: identifier-like,
// no leading digit.
inline bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  auto alpha_or_underscore = [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  };
  auto name_char = [&](char c) {
    return alpha_or_underscore(c) || std::isdigit(static_cast<unsigned char>(c));
  };
  return alpha_or_underscore(s.front()) &&
         std::all_of(s.begin(), s.end(), name_char);
}

struct Agent {
  std::string name;

  auto operator<=>(const Agent&) const = default;
};

// A chain is a finite, non-empty sequence of agents.  Order and
// repetition are significant up to the collapsing done by canon().
class Chain {
 public:
  explicit Chain(std::vector<Agent> members) : members_(std::move(members)) {
    if (members_.empty()) throw Error("chain must be non-empty");
    for (const auto& a : members_) {
      if (!valid_name(a.name)) throw Error("invalid agent name '" + a.name + "'");
    }
  }

  Chain(std::initializer_list<const char*> names)
      : Chain(from_names(names)) {}

  const std::vector<Agent>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const Agent& last() const { return members_.back(); }

  auto operator<=>(const Chain&) const = default;

 private:
  static std::vector<Agent> from_names(std::initializer_list<const char*> names) {
    std::vector<Agent> out;
    out.reserve(names.size());
    for (const char* n : names) out.push_back(Agent{n});
    return out;
  }

  std::vector<Agent> members_;
};

// Collapse adjacent duplicates: canon((a,b,b,a)) = (a,b,a).
inline Chain canon(const Chain& theta) {
  std::vector<Agent> out;
  for (const auto& a : theta.members()) {
    if (out.empty() || out.back() != a) out.push_back(a);
  }
  return Chain(std::move(out));
}

// theta <= theta' iff canon(theta) is a prefix of canon(theta').
inline bool chain_leq(const Chain& lo, const Chain& hi) {
  const auto a = canon(lo).members();
  const auto b = canon(hi).members();
  if (a.size() > b.size()) return false;
  return std::equal(a.begin(), a.end(), b.begin());
}

inline bool chain_equiv(const Chain& a, const Chain& b) {
  return canon(a) == canon(b);
}

// Membership up to ≃: chain vocabularies treat equivalent spellings alike.
inline bool theta_contains(const std::vector<Chain>& theta, const Chain& c) {
  for (const auto& t : theta)
    if (chain_equiv(t, c)) return true;
  return false;
}

inline std::string to_string(const Chain& theta) {
  std::string out;
  for (const auto& a : theta.members()) {
    if (!out.empty()) out += ',';
    out += a.name;
  }
  return out;
}

// Inverse of to_string; interior whitespace around separators is accepted.
inline Chain parse_chain(std::string_view text) {
  std::vector<Agent> members;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string_view part = text.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!part.empty() && std::isspace(static_cast<unsigned char>(part.front())))
      part.remove_prefix(1);
    while (!part.empty() && std::isspace(static_cast<unsigned char>(part.back())))
      part.remove_suffix(1);
    if (!valid_name(part))
      throw Error("bad chain '" + std::string(text) + "': expected agent name");
    members.push_back(Agent{std::string(part)});
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return Chain(std::move(members));
}

}  // namespace alpc
