// Copyright (c) 2026 The gossiplab developers
// Distributed under the MIT software license.

#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "gossiplab/types.hpp"
#include "gossiplab/util.hpp"

namespace gossiplab {

// Per-node address database, capacity-bounded. Insertion beyond capacity
// evicts a uniformly random existing entry; no result here depends on the
// eviction rule, it only has to be unbiased.
class AddrDb {
 public:
  explicit AddrDb(uint64_t salt = 0, int capacity = kAddrDbCapacity)
      : salt_(salt), capacity_(capacity) {}

  int Size() const { return static_cast<int>(entries_.size()); }
  uint64_t Salt() const { return salt_; }

  bool Contains(NodeId owner) const { return index_.count(owner) != 0; }

  const std::vector<NetAddress>& Entries() const { return entries_; }

  // Inserts or refreshes (newer timestamp wins). Returns false if the entry
  // was already present.
  bool Insert(const NetAddress& addr, Rng& rng) {
    auto it = index_.find(addr.owner);
    if (it != index_.end()) {
      NetAddress& existing = entries_[it->second];
      if (addr.timestamp_s > existing.timestamp_s) existing = addr;
      return false;
    }
    if (Size() >= capacity_) {
      size_t victim = rng.Below(entries_.size());
      index_.erase(entries_[victim].owner);
      entries_[victim] = addr;
      index_[addr.owner] = victim;
      return true;
    }
    index_[addr.owner] = entries_.size();
    entries_.push_back(addr);
    return true;
  }

 private:
  uint64_t salt_;
  int capacity_;
  std::vector<NetAddress> entries_;
  std::unordered_map<NodeId, size_t> index_;
};

}  // namespace gossiplab
