// Copyright (c) 2026 The gossiplab developers
// Distributed under the MIT software license.

#pragma once

#include <cstdint>

namespace gossiplab {

// Opaque peer identifier; stands in for an IP address.
using NodeId = uint64_t;
// Opaque transaction identifier; stands in for a transaction hash.
using TxId = uint64_t;
using ConnId = uint32_t;

inline constexpr NodeId kNoNode = ~0ULL;
inline constexpr ConnId kNoConn = ~0u;

enum class NodeRole : uint8_t {
  Server,  // accepts inbound connections
  Client,  // behind NAT/firewall, outbound only
};

enum class Reachability : uint8_t { Reachable, Unreachable };

struct NetAddress {
  NodeId owner = kNoNode;
  Reachability reachability = Reachability::Reachable;
  int64_t timestamp_s = 0;
};

// Protocol constants of the modeled gossip rules.
inline constexpr int kMaxForwardableAddrMsg = 10;      // ADDR msgs above this are not relayed
inline constexpr int64_t kAddrFreshWindowS = 600;      // relays stop past this age
inline constexpr int64_t kTrickleIntervalMs = 100;     // one queue flush round
inline constexpr int64_t kHistoryEpochS = 86400;       // per-connection histories reset daily
inline constexpr int kAddrDbCapacity = 20480;
inline constexpr double kGetAddrFraction = 0.23;
inline constexpr int kGetAddrMaxReply = 2500;
inline constexpr int kDefaultOutgoing = 8;
inline constexpr int kDefaultMaxConnections = 125;

inline int64_t DayOf(int64_t now_s) { return now_s / kHistoryEpochS; }

}  // namespace gossiplab
