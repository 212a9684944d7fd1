// Copyright (c) 2026 The gossiplab developers
// Distributed under the MIT software license.

#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "gossiplab/types.hpp"

namespace gossiplab {

// Membership set for transaction ids. World-generated ids are small and
// dense, so those live in a bitmap; anything larger falls back to a hash set.
class TxIdSet {
 public:
  bool Contains(TxId tx) const {
    if (tx < kDenseLimit) {
      size_t word = static_cast<size_t>(tx >> 6);
      return word < bits_.size() && (bits_[word] >> (tx & 63)) & 1;
    }
    return sparse_.count(tx) != 0;
  }

  void Insert(TxId tx) {
    if (tx < kDenseLimit) {
      size_t word = static_cast<size_t>(tx >> 6);
      if (word >= bits_.size()) bits_.resize(word + 1, 0);
      bits_[word] |= 1ULL << (tx & 63);
    } else {
      sparse_.insert(tx);
    }
  }

  void Clear() {
    bits_.clear();
    sparse_.clear();
  }

 private:
  static constexpr TxId kDenseLimit = 1 << 20;
  std::vector<uint64_t> bits_;
  std::unordered_set<TxId> sparse_;
};

// One direction of a link. Histories and queues belong to the sending side;
// the two directions of a link are fully independent, and a reconnect
// produces a fresh Connection (new nonce, empty histories).
struct Connection {
  ConnId id = kNoConn;
  NodeId from = kNoNode;
  NodeId to = kNoNode;
  uint64_t nonce = 0;  // re-randomized on (re)establishment
  int64_t established_at_s = 0;
  int64_t history_epoch = 0;  // day index of last history reset

  std::unordered_set<NodeId> addr_history;  // owners already sent this epoch
  TxIdSet tx_history;                       // tx ids already sent this epoch

  // Outgoing queues, flushed when this connection is the trickle pick.
  std::vector<NetAddress> addr_queue;
  std::unordered_set<NodeId> addr_queued;  // owners currently queued
  std::vector<TxId> tx_queue;
  bool pending = false;  // mirrored in the owner's pending-halves counter

  // Histories only grow within one epoch and are emptied at rollover,
  // evaluated lazily on access.
  void TouchEpoch(int64_t now_s) {
    int64_t day = DayOf(now_s);
    if (day != history_epoch) {
      addr_history.clear();
      tx_history.Clear();
      history_epoch = day;
    }
  }

  bool AddrInHistory(NodeId owner, int64_t now_s) {
    TouchEpoch(now_s);
    return addr_history.count(owner) != 0;
  }

  void MarkAddrSent(NodeId owner, int64_t now_s) {
    TouchEpoch(now_s);
    addr_history.insert(owner);
  }

  bool TxInHistory(TxId tx, int64_t now_s) {
    TouchEpoch(now_s);
    return tx_history.Contains(tx);
  }

  void MarkTxSent(TxId tx, int64_t now_s) {
    TouchEpoch(now_s);
    tx_history.Insert(tx);
  }
};

}  // namespace gossiplab
