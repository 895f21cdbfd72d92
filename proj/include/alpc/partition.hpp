#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "alpc/error.hpp"

namespace alpc {

// A partition of a finite set of world names into equivalence blocks.
// Blocks are kept canonical: worlds sorted within each block, blocks
// sorted by their first world.
class Partition {
 public:
  using Block = std::vector<std::string>;

  explicit Partition(std::vector<Block> blocks) {
    for (auto& b : blocks) {
      if (b.empty()) throw Error("partition block must be non-empty");
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
    }
    std::sort(blocks.begin(), blocks.end());
    blocks_ = std::move(blocks);
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      for (const auto& w : blocks_[k]) {
        if (!index_.emplace(w, k).second)
          throw Error("world '" + w + "' appears in two partition blocks");
      }
    }
  }

  static Partition identity(const std::vector<std::string>& worlds) {
    std::vector<Block> blocks;
    blocks.reserve(worlds.size());
    for (const auto& w : worlds) blocks.push_back({w});
    return Partition(std::move(blocks));
  }

  static Partition single_block(const std::vector<std::string>& worlds) {
    if (worlds.empty()) throw Error("partition of empty world set");
    return Partition({worlds});
  }

  const std::vector<Block>& blocks() const { return blocks_; }

  std::vector<std::string> world_set() const {
    std::vector<std::string> out;
    for (const auto& [w, k] : index_) out.push_back(w);
    return out;  // sorted: index_ is an ordered map
  }

  bool contains(const std::string& w) const { return index_.count(w) != 0; }

  const Block& block_of(const std::string& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) throw Error("world '" + w + "' not in partition");
    return blocks_[it->second];
  }

  bool same_block(const std::string& v, const std::string& w) const {
    auto a = index_.find(v), b = index_.find(w);
    if (a == index_.end() || b == index_.end())
      throw Error("world not in partition");
    return a->second == b->second;
  }

  // Every block of this partition lies inside some block of `coarser`.
  bool refines(const Partition& coarser) const {
    for (const auto& b : blocks_) {
      for (const auto& w : b) {
        if (!coarser.contains(w)) return false;
        if (!coarser.same_block(b.front(), w)) return false;
      }
    }
    return true;
  }

  bool operator==(const Partition& other) const { return blocks_ == other.blocks_; }

 private:
  std::vector<Block> blocks_;
  std::map<std::string, std::size_t> index_;
};

// Finest common coarsening of two partitions of the same world set.
inline Partition join(const Partition& p, const Partition& q) {
  const auto worlds = p.world_set();
  if (worlds != q.world_set())
    throw Error("join of partitions over different world sets");

  std::map<std::string, std::size_t> id;
  for (std::size_t k = 0; k < worlds.size(); ++k) id[worlds[k]] = k;

  std::vector<std::size_t> parent(worlds.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t x, std::size_t y) { parent[find(x)] = find(y); };

  for (const Partition* part : {&p, &q}) {
    for (const auto& b : part->blocks()) {
      for (std::size_t k = 1; k < b.size(); ++k) unite(id[b[0]], id[b[k]]);
    }
  }

  std::map<std::size_t, Partition::Block> groups;
  for (const auto& w : worlds) groups[find(id[w])].push_back(w);
  std::vector<Partition::Block> blocks;
  for (auto& [root, block] : groups) blocks.push_back(std::move(block));
  return Partition(std::move(blocks));
}

}  // namespace alpc
