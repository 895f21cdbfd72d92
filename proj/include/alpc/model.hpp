#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "alpc/chain.hpp"
#include "alpc/partition.hpp"

namespace alpc {

// Raw model description as found in a model file; validate() turns it
// into a Model or reports every defect at once.
struct ModelData {
  std::vector<std::string> worlds;
  std::vector<std::string> agents;
  std::vector<std::string> atoms;
  // world -> atoms true there; worlds may be omitted (nothing true)
  std::map<std::string, std::vector<std::string>> valuation;
  // agent -> partition blocks
  std::map<std::string, std::vector<std::vector<std::string>>> access;
  // chain text -> awareness set; keys equivalent under canon must agree
  std::map<std::string, std::vector<std::string>> awareness;
};

struct ValidationError : Error {
  explicit ValidationError(std::vector<std::string> problems)
      : Error(join_lines(problems)), problems(std::move(problems)) {}

  static std::string join_lines(const std::vector<std::string>& ps) {
    std::ostringstream out;
    out << "invalid model:";
    for (const auto& p : ps) out << "\n  - " << p;
    return out.str();
  }

  std::vector<std::string> problems;
};

class Model {
 public:
  const std::vector<std::string>& worlds() const { return worlds_; }
  const std::vector<Agent>& agents() const { return agents_; }
  const std::vector<std::string>& atoms() const { return atoms_; }

  bool has_world(const std::string& w) const {
    return std::binary_search(worlds_.begin(), worlds_.end(), w);
  }

  bool has_agent(const Agent& i) const {
    return access_.count(i.name) != 0;
  }

  const std::set<std::string>& true_atoms(const std::string& w) const {
    auto it = valuation_.find(w);
    if (it == valuation_.end()) throw Error("unknown world '" + w + "'");
    return it->second;
  }

  bool atom_true(const std::string& w, const std::string& p) const {
    return true_atoms(w).count(p) != 0;
  }

  const Partition& access(const Agent& i) const {
    auto it = access_.find(i.name);
    if (it == access_.end()) throw Error("unknown agent '" + i.name + "'");
    return it->second;
  }

  // Chains of the model, canonical, sorted by chain text.
  const std::vector<Chain>& theta() const { return theta_; }

  bool has_chain(const Chain& theta) const {
    return awareness_.count(to_string(canon(theta))) != 0;
  }

  const std::set<std::string>& awareness(const Chain& theta) const {
    auto it = awareness_.find(to_string(canon(theta)));
    if (it == awareness_.end())
      throw Error("unknown chain '" + to_string(theta) + "'");
    return it->second;
  }

  // Worlds agreeing on every atom the chain is aware of.
  Partition indist(const Chain& theta) const {
    const auto& aw = awareness(theta);
    std::map<std::string, Partition::Block> groups;
    for (const auto& w : worlds_) {
      std::string key;
      for (const auto& p : aw) {
        key += atom_true(w, p) ? '1' : '0';
      }
      groups[key].push_back(w);
    }
    std::vector<Partition::Block> blocks;
    for (auto& [key, block] : groups) blocks.push_back(std::move(block));
    return Partition(std::move(blocks));
  }

  // Reachability underlying C[theta]: the transitive closure of
  // composing indist(theta) steps with access steps of the chain's
  // last agent.  Both are equivalences containing the identity, so
  // the closure is exactly their join.
  Partition reach_c(const Chain& theta) const {
    return join(access(theta.last()), indist(theta));
  }

  friend Model validate(const ModelData& raw);

 private:
  Model() = default;

  std::vector<std::string> worlds_;
  std::vector<Agent> agents_;
  std::vector<std::string> atoms_;
  std::map<std::string, std::set<std::string>> valuation_;
  std::map<std::string, Partition> access_;
  std::map<std::string, std::set<std::string>> awareness_;  // canonical key
  std::vector<Chain> theta_;
};

namespace detail {

template <typename T>
inline std::vector<std::string> duplicates(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  std::vector<std::string> out;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] == v[k - 1] && (out.empty() || out.back() != v[k])) out.push_back(v[k]);
  }
  return out;
}

}  // namespace detail

// Checks every Def-1 side condition and reports all violations, not
// just the first.
inline Model validate(const ModelData& raw) {
  std::vector<std::string> problems;
  auto complain = [&](std::string msg) { problems.push_back(std::move(msg)); };

  if (raw.worlds.empty()) complain("world set is empty");
  for (const auto& w : detail::duplicates(raw.worlds))
    complain("duplicate world '" + w + "'");
  for (const auto& a : detail::duplicates(raw.agents))
    complain("duplicate agent '" + a + "'");
  for (const auto& p : detail::duplicates(raw.atoms))
    complain("duplicate atom '" + p + "'");
  for (const auto& a : raw.agents)
    if (!valid_name(a)) complain("invalid agent name '" + a + "'");
  for (const auto& p : raw.atoms)
    if (!valid_name(p)) complain("invalid atom name '" + p + "'");
  for (const auto& w : raw.worlds)
    if (!valid_name(w)) complain("invalid world name '" + w + "'");

  const std::set<std::string> world_set(raw.worlds.begin(), raw.worlds.end());
  const std::set<std::string> agent_set(raw.agents.begin(), raw.agents.end());
  const std::set<std::string> atom_set(raw.atoms.begin(), raw.atoms.end());

  Model m;
  m.worlds_.assign(world_set.begin(), world_set.end());
  for (const auto& a : agent_set) m.agents_.push_back(Agent{a});
  m.atoms_.assign(atom_set.begin(), atom_set.end());

  // valuation
  for (const auto& [w, ps] : raw.valuation) {
    if (!world_set.count(w)) complain("valuation mentions unknown world '" + w + "'");
    for (const auto& p : ps) {
      if (!atom_set.count(p))
        complain("valuation of '" + w + "' mentions unknown atom '" + p + "'");
    }
  }
  for (const auto& w : raw.worlds) {
    auto it = raw.valuation.find(w);
    if (it == raw.valuation.end()) {
      m.valuation_[w] = {};
    } else {
      m.valuation_[w] = std::set<std::string>(it->second.begin(), it->second.end());
    }
  }

  // access partitions
  for (const auto& [a, blocks] : raw.access) {
    if (!agent_set.count(a)) {
      complain("access relation for unknown agent '" + a + "'");
      continue;
    }
    std::vector<std::string> seen;
    bool bad = false;
    for (const auto& b : blocks) {
      if (b.empty()) {
        complain("agent '" + a + "': empty partition block");
        bad = true;
      }
      for (const auto& w : b) {
        if (!world_set.count(w)) {
          complain("agent '" + a + "': block mentions unknown world '" + w + "'");
          bad = true;
        }
        seen.push_back(w);
      }
    }
    for (const auto& w : detail::duplicates(seen)) {
      complain("agent '" + a + "': world '" + w + "' occurs in two blocks");
      bad = true;
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    if (!bad && seen != m.worlds_) {
      for (const auto& w : m.worlds_) {
        if (!std::binary_search(seen.begin(), seen.end(), w))
          complain("agent '" + a + "': world '" + w + "' not covered");
      }
      bad = true;
    }
    if (!bad) m.access_.emplace(a, Partition(blocks));
  }
  for (const auto& a : raw.agents) {
    if (agent_set.count(a) && !raw.access.count(a))
      complain("agent '" + a + "' has no access partition");
  }

  // awareness sets; keys are chain text, canonically equivalent keys
  // must carry the same set
  std::map<std::string, std::string> canon_source;
  for (const auto& [text, ps] : raw.awareness) {
    std::optional<Chain> theta;
    try {
      theta = canon(parse_chain(text));
    } catch (const Error& e) {
      complain(std::string("awareness: ") + e.what());
      continue;
    }
    for (const auto& i : theta->members()) {
      if (!agent_set.count(i.name))
        complain("awareness chain '" + text + "' mentions unknown agent '" +
                 i.name + "'");
    }
    if (ps.empty()) complain("awareness set for '" + text + "' is empty");
    std::set<std::string> aw(ps.begin(), ps.end());
    for (const auto& p : aw) {
      if (!atom_set.count(p))
        complain("awareness set for '" + text + "' mentions unknown atom '" + p + "'");
    }
    const std::string key = to_string(*theta);
    auto [it, fresh] = m.awareness_.emplace(key, aw);
    if (fresh) {
      canon_source[key] = text;
    } else if (it->second != aw) {
      complain("chains '" + canon_source[key] + "' and '" + text +
               "' are equivalent but have different awareness sets");
    }
  }

  // monotonicity: longer chains are aware of no more
  for (const auto& [k1, aw1] : m.awareness_) {
    for (const auto& [k2, aw2] : m.awareness_) {
      if (k1 == k2) continue;
      Chain t1 = parse_chain(k1), t2 = parse_chain(k2);
      if (!chain_leq(t1, t2)) continue;
      if (!std::includes(aw1.begin(), aw1.end(), aw2.begin(), aw2.end()))
        complain("awareness is not monotone: '" + k2 + "' is aware of atoms '" +
                 k1 + "' is not");
    }
  }

  if (!problems.empty()) throw ValidationError(std::move(problems));

  for (const auto& [key, aw] : m.awareness_) m.theta_.push_back(parse_chain(key));
  return m;
}

}  // namespace alpc
