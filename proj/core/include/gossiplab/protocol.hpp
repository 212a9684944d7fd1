// Copyright (c) 2026 The gossiplab developers
// Distributed under the MIT software license.

#pragma once

/*
 Pure, deterministic gossip rules: responsible-node selection, ADDR
 forwarding checks, transaction forwarding scheduling, trickle selection and
 GETADDR sampling. No event loop lives here; the simulator drives these.

 Responsible-node selection hashes (address owner, node salt, current day,
 per-connection nonce). The nonce replaces the reference client's use of the
 neighbour struct's memory address: same statistical effect (re-randomized
 on reconnect), reproducible under seeding.
*/

#include <cstdint>
#include <span>
#include <vector>

#include "gossiplab/addr_db.hpp"
#include "gossiplab/connection.hpp"
#include "gossiplab/types.hpp"
#include "gossiplab/util.hpp"

namespace gossiplab::protocol {

// A forwarding candidate as the selection rules see it.
struct Neighbor {
  NodeId peer = kNoNode;
  uint64_t conn_nonce = 0;
};

// Rank key for one candidate; stable for 24 hours for fixed inputs.
uint64_t RelayRank(NodeId addr_owner, uint64_t salt, int64_t day, uint64_t conn_nonce);

// Indices of the 1 (unreachable) or 2 (reachable) lowest-ranked candidates.
// Empty input yields an empty selection.
std::vector<size_t> SelectResponsibleIndices(const NetAddress& addr,
                                             std::span<const Neighbor> neighbors,
                                             uint64_t salt, int64_t day);

// Same selection reported as peer node ids.
std::vector<NodeId> ResponsibleNodes(const NetAddress& addr,
                                     std::span<const Neighbor> neighbors,
                                     uint64_t salt, int64_t day);

// True iff the enclosing ADDR message is small enough, the address is still
// fresh, and the owner was not already sent over this connection this epoch.
bool ShouldForwardAddr(int msg_addr_count, const NetAddress& addr, int64_t now_s,
                       Connection& conn);

struct TxSchedule {
  bool immediate = false;           // flush all queues at once
  std::vector<size_t> queued_to;    // indices of connections to queue on
};

// Queues a transaction on every connection whose history lacks it. The
// immediate flag is a pure function of (tx, salt) and comes up for exactly
// 1/4 of ids (two low hash bits zero).
TxSchedule ScheduleTxForwarding(TxId tx, std::span<Connection* const> conns,
                                uint64_t salt, int64_t now_s);

bool TxForwardedImmediately(TxId tx, uint64_t salt);

// Uniformly random trickle pick among n connections. Throws on n == 0.
size_t TricklePick(size_t n_neighbors, Rng& rng);

// min(round(0.23 * |entries|), 2500) entries, sampled uniformly without
// replacement. Rounding is half-up for determinism.
std::vector<NetAddress> GetAddrResponse(const AddrDb& db, Rng& rng);

int GetAddrReplySize(int db_size);

}  // namespace gossiplab::protocol
