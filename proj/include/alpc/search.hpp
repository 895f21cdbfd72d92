#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "alpc/model.hpp"
#include "alpc/semantics.hpp"

namespace alpc {

struct SampledAwareness {
  std::size_t count = 32;
  std::uint64_t seed = 0;
};

struct SearchBounds {
  std::size_t max_worlds = 3;
  std::vector<Agent> agents;
  std::vector<std::string> atoms;
  std::vector<Chain> theta;
  // nullopt enumerates every monotone awareness assignment; sampled mode
  // draws `count` random assignments per (valuation, partitions) skeleton.
  std::optional<SampledAwareness> sampled;
  bool symmetry_reduction = true;
  double enumeration_ceiling = 5e7;
};

namespace detail {

inline double bell_number(std::size_t n) {
  // Bell triangle; doubles are plenty for a ceiling estimate.
  std::vector<std::vector<double>> tri = {{1.0}};
  for (std::size_t r = 1; r <= n; ++r) {
    std::vector<double> row = {tri.back().back()};
    for (double x : tri.back()) row.push_back(row.back() + x);
    tri.push_back(std::move(row));
  }
  return tri[n][0];
}

inline double multiset_count(double options, std::size_t slots) {
  // C(options + slots - 1, slots): valuations up to world permutation
  double out = 1.0;
  for (std::size_t i = 0; i < slots; ++i)
    out = out * (options + static_cast<double>(i)) / static_cast<double>(i + 1);
  return out;
}

// For canonical chains sorted shortest-first, the index of chain i's
// longest proper ⪯-predecessor, or npos when it has none.  Because all
// predecessors of a chain are prefixes of one another, the longest one
// carries the tightest awareness constraint.
inline std::size_t longest_predecessor(const std::vector<Chain>& chains,
                                       std::size_t i) {
  std::size_t best = static_cast<std::size_t>(-1);
  for (std::size_t j = 0; j < i; ++j) {
    if (!chain_leq(chains[j], chains[i])) continue;
    if (best == static_cast<std::size_t>(-1) ||
        chains[j].size() > chains[best].size())
      best = j;
  }
  return best;
}

}  // namespace detail

// Deterministic stream of every valid model within the bounds: world
// counts 1..max_worlds, all valuations (up to world permutation when
// symmetry reduction is on), all per-agent partitions, all monotone
// awareness assignments.
class ModelStream {
 public:
  explicit ModelStream(SearchBounds b) : b_(std::move(b)) { prepare(); }

  std::optional<Model> next() {
    if (done_) return std::nullopt;
    if (first_) {
      first_ = false;
    } else if (!advance()) {
      done_ = true;
      return std::nullopt;
    }
    ++yielded_;
    return build();
  }

  std::uint64_t yielded() const { return yielded_; }
  double estimated_total() const { return estimate_; }

 private:
  void prepare() {
    if (b_.max_worlds < 1) throw Error("max_worlds must be at least 1");
    std::sort(b_.agents.begin(), b_.agents.end());
    b_.agents.erase(std::unique(b_.agents.begin(), b_.agents.end()),
                    b_.agents.end());
    std::sort(b_.atoms.begin(), b_.atoms.end());
    b_.atoms.erase(std::unique(b_.atoms.begin(), b_.atoms.end()), b_.atoms.end());

    std::map<std::string, Chain> by_key;
    for (const auto& t : b_.theta) {
      Chain c = canon(t);
      by_key.try_emplace(to_string(c), c);
    }
    chains_.clear();
    for (const auto& [key, c] : by_key) chains_.push_back(c);
    std::stable_sort(chains_.begin(), chains_.end(),
                     [](const Chain& x, const Chain& y) {
                       return x.size() < y.size();
                     });
    for (const auto& c : chains_) {
      chain_keys_.push_back(to_string(c));
      for (const auto& a : c.members())
        if (!std::binary_search(b_.agents.begin(), b_.agents.end(), a))
          throw Error("chain '" + to_string(c) + "' uses agent '" + a.name +
                      "' not in the bounds");
    }
    if (!chains_.empty() && b_.atoms.empty())
      throw Error("bounds with a non-empty theta need at least one atom");

    const double mask_options = std::pow(2.0, b_.atoms.size());
    const double aw_options =
        b_.sampled ? static_cast<double>(b_.sampled->count)
                   : std::pow(std::max(1.0, mask_options - 1.0),
                              static_cast<double>(chains_.size()));
    estimate_ = 0.0;
    for (std::size_t n = 1; n <= b_.max_worlds; ++n) {
      const double vals = b_.symmetry_reduction
                              ? detail::multiset_count(mask_options, n)
                              : std::pow(mask_options, n);
      const double parts =
          std::pow(detail::bell_number(n), static_cast<double>(b_.agents.size()));
      estimate_ += vals * parts * aw_options;
    }
    if (estimate_ > b_.enumeration_ceiling)
      throw Error("enumeration estimate " + std::to_string(estimate_) +
                  " exceeds the ceiling " +
                  std::to_string(b_.enumeration_ceiling) +
                  "; tighten the bounds");

    if (b_.sampled) rng_.seed(b_.sampled->seed);
    start_worlds(1);
  }

  void start_worlds(std::size_t n) {
    n_ = n;
    worlds_.clear();
    for (std::size_t i = 1; i <= n; ++i) worlds_.push_back("w" + std::to_string(i));
    val_.assign(n, 0);
    rgs_.assign(b_.agents.size(), std::vector<unsigned>(n, 0));
    reset_awareness();
  }

  unsigned full_mask() const {
    return b_.atoms.empty() ? 0u : (1u << b_.atoms.size()) - 1u;
  }

  // ---- awareness ----------------------------------------------------------

  std::vector<std::string> allowed_for(std::size_t i) const {
    const std::size_t pred = detail::longest_predecessor(chains_, i);
    if (pred == static_cast<std::size_t>(-1)) return b_.atoms;
    return std::vector<std::string>(sets_[pred].begin(), sets_[pred].end());
  }

  void apply_mask(std::size_t i) {
    sets_[i].clear();
    for (std::size_t bit = 0; bit < allowed_[i].size(); ++bit)
      if (masks_[i] & (1u << bit)) sets_[i].insert(allowed_[i][bit]);
  }

  void rebuild_awareness_from(std::size_t start) {
    for (std::size_t i = start; i < chains_.size(); ++i) {
      allowed_[i] = allowed_for(i);
      masks_[i] = allowed_[i].empty() ? 0u : 1u;
      apply_mask(i);
    }
  }

  void draw_sample() {
    for (std::size_t i = 0; i < chains_.size(); ++i) {
      allowed_[i] = allowed_for(i);
      const unsigned full = (1u << allowed_[i].size()) - 1u;
      masks_[i] = 1u + static_cast<unsigned>(rng_() % full);
      apply_mask(i);
    }
  }

  void reset_awareness() {
    allowed_.assign(chains_.size(), {});
    masks_.assign(chains_.size(), 0);
    sets_.assign(chains_.size(), {});
    if (b_.sampled) {
      sample_pos_ = 0;
      if (!chains_.empty()) draw_sample();
    } else {
      rebuild_awareness_from(0);
    }
  }

  bool advance_awareness() {
    if (chains_.empty()) return false;
    if (b_.sampled) {
      if (sample_pos_ + 1 >= b_.sampled->count) return false;
      ++sample_pos_;
      draw_sample();
      return true;
    }
    for (std::size_t i = chains_.size(); i-- > 0;) {
      const unsigned full = (1u << allowed_[i].size()) - 1u;
      if (masks_[i] < full) {
        ++masks_[i];
        apply_mask(i);
        rebuild_awareness_from(i + 1);
        return true;
      }
    }
    return false;
  }

  // ---- partitions -----------------------------------------------------------

  static bool next_rgs(std::vector<unsigned>& a) {
    for (std::size_t i = a.size(); i-- > 1;) {
      unsigned cap = 0;
      for (std::size_t j = 0; j < i; ++j) cap = std::max(cap, a[j]);
      if (a[i] <= cap) {
        ++a[i];
        std::fill(a.begin() + i + 1, a.end(), 0u);
        return true;
      }
    }
    return false;
  }

  bool advance_partitions() {
    for (std::size_t a = rgs_.size(); a-- > 0;) {
      if (next_rgs(rgs_[a])) {
        for (std::size_t later = a + 1; later < rgs_.size(); ++later)
          rgs_[later].assign(n_, 0);
        return true;
      }
    }
    return false;
  }

  // ---- valuations -----------------------------------------------------------

  bool advance_valuation() {
    const unsigned top = full_mask();
    for (std::size_t i = val_.size(); i-- > 0;) {
      if (val_[i] < top) {
        ++val_[i];
        const unsigned reset = b_.symmetry_reduction ? val_[i] : 0u;
        std::fill(val_.begin() + i + 1, val_.end(), reset);
        return true;
      }
    }
    return false;
  }

  bool advance() {
    if (advance_awareness()) return true;
    if (advance_partitions()) {
      reset_awareness();
      return true;
    }
    if (advance_valuation()) {
      rgs_.assign(b_.agents.size(), std::vector<unsigned>(n_, 0));
      reset_awareness();
      return true;
    }
    if (n_ < b_.max_worlds) {
      start_worlds(n_ + 1);
      return true;
    }
    return false;
  }

  Model build() const {
    ModelData d;
    d.worlds = worlds_;
    for (const auto& a : b_.agents) d.agents.push_back(a.name);
    d.atoms = b_.atoms;
    for (std::size_t i = 0; i < worlds_.size(); ++i) {
      std::vector<std::string> trues;
      for (std::size_t bit = 0; bit < b_.atoms.size(); ++bit)
        if (val_[i] & (1u << bit)) trues.push_back(b_.atoms[bit]);
      d.valuation[worlds_[i]] = std::move(trues);
    }
    for (std::size_t a = 0; a < b_.agents.size(); ++a) {
      std::vector<std::vector<std::string>> blocks;
      for (std::size_t i = 0; i < n_; ++i) {
        while (blocks.size() <= rgs_[a][i]) blocks.emplace_back();
        blocks[rgs_[a][i]].push_back(worlds_[i]);
      }
      d.access[b_.agents[a].name] = std::move(blocks);
    }
    for (std::size_t i = 0; i < chains_.size(); ++i)
      d.awareness[chain_keys_[i]] =
          std::vector<std::string>(sets_[i].begin(), sets_[i].end());
    return validate(d);
  }

  SearchBounds b_;
  std::vector<Chain> chains_;
  std::vector<std::string> chain_keys_;
  double estimate_ = 0.0;

  std::size_t n_ = 0;
  std::vector<std::string> worlds_;
  std::vector<unsigned> val_;
  std::vector<std::vector<unsigned>> rgs_;
  std::vector<std::vector<std::string>> allowed_;
  std::vector<unsigned> masks_;
  std::vector<std::set<std::string>> sets_;
  std::mt19937_64 rng_;
  std::size_t sample_pos_ = 0;

  bool first_ = true;
  bool done_ = false;
  std::uint64_t yielded_ = 0;
};

// ---- countermodel search ---------------------------------------------------

struct Countermodel {
  Model model;
  std::string world;
  Formula formula;
  std::uint64_t index;  // 0-based position in the enumeration
};

namespace detail {

inline void collect_agents(const Formula& f, std::set<Agent>& out) {
  if (f.op() == Op::ImplicitK) out.insert(f.agent());
  for (const auto& k : f.children()) collect_agents(k, out);
}

inline void check_search_inputs(const Formula& f, const SearchBounds& b) {
  if (auto v = nesting_violation(f))
    throw Error("ill-formed formula: chain '" + to_string(v->inner) +
                "' occurs under '" + to_string(v->outer) + "'");
  for (const auto& c : chains_of(f)) {
    if (!theta_contains(b.theta, c))
      throw Error("chain '" + to_string(c) + "' of the formula is not in the bounds");
  }
  std::set<Agent> agents;
  collect_agents(f, agents);
  for (const auto& a : agents) {
    if (std::find(b.agents.begin(), b.agents.end(), a) == b.agents.end())
      throw Error("agent '" + a.name + "' of the formula is not in the bounds");
  }
}

// One worker's walk over its slice of the stream; a worker stops as soon
// as its own indices can no longer beat the best find so far.
inline void search_slice(const Formula& f, const SearchBounds& b, unsigned jobs,
                         unsigned worker, std::atomic<std::uint64_t>& best_index,
                         std::optional<Countermodel>& hit) {
  ModelStream stream(b);
  std::uint64_t index = 0;
  for (std::optional<Model> m = stream.next(); m; m = stream.next(), ++index) {
    if (index % jobs != worker) continue;
    if (index >= best_index.load()) break;
    Evaluator ev(*m);
    for (const auto& w : m->worlds()) {
      if (!ev.holds(w, f)) {
        hit = Countermodel{*m, w, f, index};
        std::uint64_t seen = best_index.load();
        while (index < seen && !best_index.compare_exchange_weak(seen, index)) {
        }
        return;
      }
    }
  }
}

}  // namespace detail

// First falsifying (model, world) in enumeration order, or nullopt when
// the bounds are exhausted.  Absence within bounds is not a validity
// proof.  Parallel runs return the identical witness.
inline std::optional<Countermodel> find_countermodel(const Formula& f,
                                                     const SearchBounds& b,
                                                     unsigned jobs = 1) {
  detail::check_search_inputs(f, b);
  if (jobs <= 1) {
    ModelStream stream(b);
    std::uint64_t index = 0;
    for (std::optional<Model> m = stream.next(); m; m = stream.next(), ++index) {
      Evaluator ev(*m);
      for (const auto& w : m->worlds())
        if (!ev.holds(w, f)) return Countermodel{*m, w, f, index};
    }
    return std::nullopt;
  }

  ModelStream probe(b);  // surface bounds errors before spawning workers
  std::atomic<std::uint64_t> best_index{std::numeric_limits<std::uint64_t>::max()};
  std::vector<std::optional<Countermodel>> hits(jobs);
  std::vector<std::thread> workers;
  for (unsigned j = 0; j < jobs; ++j)
    workers.emplace_back([&, j] {
      detail::search_slice(f, b, jobs, j, best_index, hits[j]);
    });
  for (auto& t : workers) t.join();

  std::optional<Countermodel> best;
  for (auto& hit : hits)
    if (hit && (!best || hit->index < best->index)) best = hit;
  return best;
}

// ---- random models ----------------------------------------------------------

struct RandomModelParams {
  std::size_t num_worlds = 3;
  std::vector<Agent> agents;
  std::vector<std::string> atoms;
  std::vector<Chain> theta;
};

// Deterministic in the seed.  Partitions mix identity, single-block, and
// Chinese-restaurant-style shapes so both extremes appear; awareness sets
// are sampled at the ⪯-minimal chains and shrunk along extensions.
inline Model random_model(std::uint64_t seed, const RandomModelParams& p) {
  if (p.num_worlds < 1) throw Error("num_worlds must be at least 1");
  if (!p.theta.empty() && p.atoms.empty())
    throw Error("params with a non-empty theta need at least one atom");
  std::mt19937_64 rng(seed);

  ModelData d;
  for (std::size_t i = 1; i <= p.num_worlds; ++i)
    d.worlds.push_back("w" + std::to_string(i));
  for (const auto& a : p.agents) d.agents.push_back(a.name);
  d.atoms = p.atoms;

  for (const auto& w : d.worlds) {
    std::vector<std::string> trues;
    for (const auto& atom_name : p.atoms)
      if (rng() % 2 == 0) trues.push_back(atom_name);
    d.valuation[w] = std::move(trues);
  }

  for (const auto& a : d.agents) {
    std::vector<std::vector<std::string>> blocks;
    switch (rng() % 10) {
      case 0:  // identity
        for (const auto& w : d.worlds) blocks.push_back({w});
        break;
      case 1:  // single block
        blocks.push_back(d.worlds);
        break;
      default:
        for (const auto& w : d.worlds) {
          const std::size_t pick = rng() % (blocks.size() + 1);
          if (pick == blocks.size()) blocks.emplace_back();
          blocks[pick].push_back(w);
        }
        break;
    }
    d.access[a] = std::move(blocks);
  }

  std::map<std::string, Chain> by_key;
  for (const auto& t : p.theta) {
    Chain c = canon(t);
    by_key.try_emplace(to_string(c), c);
  }
  std::vector<Chain> chains;
  for (const auto& [key, c] : by_key) chains.push_back(c);
  std::stable_sort(chains.begin(), chains.end(),
                   [](const Chain& x, const Chain& y) {
                     return x.size() < y.size();
                   });
  std::vector<std::vector<std::string>> assigned;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const std::size_t pred = detail::longest_predecessor(chains, i);
    const std::vector<std::string>& allowed =
        pred == static_cast<std::size_t>(-1) ? p.atoms : assigned[pred];
    std::vector<std::string> chosen;
    while (chosen.empty()) {
      for (const auto& atom_name : allowed)
        if (rng() % 3 != 0) chosen.push_back(atom_name);
    }
    d.awareness[to_string(chains[i])] = chosen;
    assigned.push_back(std::move(chosen));
  }

  return validate(d);
}

}  // namespace alpc
