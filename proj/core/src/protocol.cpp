// Copyright (c) 2026 The gossiplab developers
// Distributed under the MIT software license.

#include "gossiplab/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gossiplab::protocol {

uint64_t RelayRank(NodeId addr_owner, uint64_t salt, int64_t day, uint64_t conn_nonce) {
  return KeyedHash({addr_owner, salt, static_cast<uint64_t>(day), conn_nonce});
}

std::vector<size_t> SelectResponsibleIndices(const NetAddress& addr,
                                             std::span<const Neighbor> neighbors,
                                             uint64_t salt, int64_t day) {
  if (neighbors.empty()) return {};
  size_t want = addr.reachability == Reachability::Reachable ? 2 : 1;

  size_t best = 0, second = 0;
  uint64_t best_rank = ~0ULL, second_rank = ~0ULL;
  for (size_t i = 0; i < neighbors.size(); ++i) {
    uint64_t r = RelayRank(addr.owner, salt, day, neighbors[i].conn_nonce);
    if (r < best_rank) {
      second = best;
      second_rank = best_rank;
      best = i;
      best_rank = r;
    } else if (r < second_rank) {
      second = i;
      second_rank = r;
    }
  }

  std::vector<size_t> out;
  out.push_back(best);
  if (want == 2 && neighbors.size() > 1) out.push_back(second);
  return out;
}

std::vector<NodeId> ResponsibleNodes(const NetAddress& addr,
                                     std::span<const Neighbor> neighbors,
                                     uint64_t salt, int64_t day) {
  std::vector<NodeId> out;
  for (size_t i : SelectResponsibleIndices(addr, neighbors, salt, day))
    out.push_back(neighbors[i].peer);
  return out;
}

bool ShouldForwardAddr(int msg_addr_count, const NetAddress& addr, int64_t now_s,
                       Connection& conn) {
  if (msg_addr_count > kMaxForwardableAddrMsg) return false;
  if (now_s - addr.timestamp_s > kAddrFreshWindowS) return false;
  return !conn.AddrInHistory(addr.owner, now_s);
}

bool TxForwardedImmediately(TxId tx, uint64_t salt) {
  return (KeyedHash({tx, salt}) & 3) == 0;
}

TxSchedule ScheduleTxForwarding(TxId tx, std::span<Connection* const> conns,
                                uint64_t salt, int64_t now_s) {
  TxSchedule sched;
  sched.immediate = TxForwardedImmediately(tx, salt);
  for (size_t i = 0; i < conns.size(); ++i) {
    if (!conns[i]->TxInHistory(tx, now_s)) sched.queued_to.push_back(i);
  }
  return sched;
}

size_t TricklePick(size_t n_neighbors, Rng& rng) {
  if (n_neighbors == 0) throw std::runtime_error("trickle_pick: no neighbors");
  return static_cast<size_t>(rng.Below(n_neighbors));
}

int GetAddrReplySize(int db_size) {
  int want = static_cast<int>(std::floor(kGetAddrFraction * db_size + 0.5));
  return std::min(want, kGetAddrMaxReply);
}

std::vector<NetAddress> GetAddrResponse(const AddrDb& db, Rng& rng) {
  int n = db.Size();
  int k = GetAddrReplySize(n);
  std::vector<NetAddress> out;
  out.reserve(k);
  for (uint32_t i : rng.SampleWithoutReplacement(n, k)) out.push_back(db.Entries()[i]);
  return out;
}

}  // namespace gossiplab::protocol
