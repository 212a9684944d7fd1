// Copyright (c) 2026 The gossiplab developers
// Distributed under the MIT software license.

#pragma once

/*
 Deterministic seeded discrete-event simulator of the gossip network.

 One World owns all mutation single-threaded; multiple Worlds may run in
 parallel (replica parallelism). Message exchange:

   ADDR      queued per connection, flushed by 100 ms trickle rounds
   GETADDR   answered directly with the 23%/2500 sample
   INV/GETDATA/TX  explicit three-step exchange with link + processing delays

 Time is integer milliseconds; protocol freshness rules run on seconds.
 Event ordering is (time, insertion sequence), ties FIFO, so identical
 configurations replay identically.
*/

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gossiplab/addr_db.hpp"
#include "gossiplab/connection.hpp"
#include "gossiplab/delay.hpp"
#include "gossiplab/protocol.hpp"
#include "gossiplab/types.hpp"
#include "gossiplab/util.hpp"

namespace gossiplab::netsim {

struct WorldConfig {
  int n_servers = 250;
  int n_clients = 20;
  int outgoing_per_peer = kDefaultOutgoing;
  int max_connections_per_server = kDefaultMaxConnections;
  double target_mean_degree = 0.0;  // 0: leave the 8-outgoing graph alone
  DelayModel delay;
  ChurnModel churn;
  uint64_t seed = 1;
  bool tor_ban_enabled = false;
  bool trickle_phase_jitter = true;

  void Validate() const;
};

// The up-to-8 servers a client connected to; its session identifier.
struct EntryFingerprint {
  NodeId client = kNoNode;
  std::vector<NodeId> entries;
  int64_t session_start_s = 0;
  bool degraded = false;  // fewer slots than requested were available
};

struct Node {
  NodeId id = kNoNode;
  NodeRole role = NodeRole::Server;
  uint64_t salt = 0;
  NodeId public_addr = kNoNode;  // advertised owner; NAT groups share one
  bool use_proxy = false;
  bool online = false;
  bool attacker_owned = false;
  int64_t trickle_phase_ms = 0;
  bool tick_armed = false;
  int pending_halves = 0;     // outgoing halves with queued content
  std::vector<ConnId> links;  // live link ids
  AddrDb addr_db;
  TxIdSet known_txs;
  TxIdSet requested_txs;
};

// A live bidirectional link; half[0] is a->b, half[1] is b->a.
struct Link {
  ConnId id = kNoConn;
  NodeId a = kNoNode;
  NodeId b = kNoNode;
  bool alive = false;
  Connection half[2];

  int SideOf(NodeId n) const { return n == a ? 0 : 1; }
  NodeId PeerOf(NodeId n) const { return n == a ? b : a; }
};

enum class MsgType : uint8_t { Addr, GetAddr, Inv, GetData, TxData };

struct GroundTruthTx {
  TxId tx = 0;
  NodeId origin = kNoNode;
  NodeId origin_public_addr = kNoNode;
  uint64_t pseudonym = 0;
  int64_t generated_at_ms = 0;
  bool immediate = false;
  std::vector<NodeId> entries_at_generation;
};

struct EventLogRecord {
  int64_t t_ms;
  const char* kind;
  NodeId from;
  NodeId to;
  uint64_t payload;
};

// Read-only observation hooks handed to the attacker toolkit. Called by the
// event loop between state transitions.
class ObservationTap {
 public:
  virtual ~ObservationTap() = default;
  virtual void OnAddrDelivered(NodeId from_server, ConnId link, int64_t t_ms,
                               const std::vector<NetAddress>& addrs) = 0;
  virtual void OnInvDelivered(NodeId from_server, ConnId link, int64_t t_ms, TxId tx) = 0;
};

class World {
 public:
  // Servers form a connected random graph via each server's outgoing
  // connections; clients start offline. Identical seed, identical world.
  static World Build(const WorldConfig& cfg);

  const WorldConfig& Config() const { return cfg_; }
  int64_t NowMs() const { return now_ms_; }
  int64_t NowS() const { return now_ms_ / 1000; }

  // --- topology / population -------------------------------------------
  int ServerCount() const { return cfg_.n_servers; }
  bool IsServer(NodeId n) const { return nodes_[n].role == NodeRole::Server; }
  Node& NodeRef(NodeId n) { return nodes_[n]; }
  const Node& NodeRef(NodeId n) const { return nodes_[n]; }
  std::vector<NodeId> Servers() const;
  std::vector<NodeId> Clients() const;
  Link& LinkRef(ConnId id) { return links_[id]; }
  const Link& LinkRef(ConnId id) const { return links_[id]; }
  int LiveConnectionCount(NodeId n) const { return static_cast<int>(nodes_[n].links.size()); }
  int FreeSlots(NodeId server) const;
  std::vector<NodeId> ServerNeighbors(NodeId n) const;  // distinct server peers

  // Extra node for attacker probes / stealth addresses. Never a server.
  NodeId AddAttackerNode();

  // --- connections -------------------------------------------------------
  // Opens from->to. Returns kNoConn if the target is offline, not a server,
  // or out of slots.
  ConnId Connect(NodeId from, NodeId to);
  void Disconnect(ConnId link);

  // Client comes online: opens outgoing connections to uniformly random
  // distinct servers with free slots and advertises its public address on
  // each. Returns the resulting fingerprint (flagged if degraded).
  EntryFingerprint ClientConnect(NodeId client);
  void ClientDisconnect(NodeId client);

  // --- protocol actions ----------------------------------------------------
  // Sends an ADDR message (as `sender`) over one link; counts as one message.
  void SendAddrMessage(ConnId link, NodeId sender, std::vector<NetAddress> addrs);
  // Synchronous GETADDR exchange (query + sampled reply), message-counted.
  std::vector<NetAddress> QueryGetAddr(NodeId requester, NodeId server);
  // Whether a liveness probe (TCP connect + handshake) would succeed.
  bool ProbeLiveness(NodeId target) const;

  void GenerateTx(NodeId origin, TxId tx, uint64_t pseudonym);

  // --- scheduling -----------------------------------------------------------
  void ScheduleClientConnect(NodeId client, int64_t at_ms);
  void ScheduleClientDisconnect(NodeId client, int64_t at_ms);
  void ScheduleTx(NodeId origin, int64_t at_ms, uint64_t pseudonym);
  void ScheduleAction(int64_t at_ms, std::function<void(World&)> fn);

  // Processes all events up to and including t_end_ms.
  void RunUntil(int64_t t_end_ms);

  // Disables inbound-from-proxy on the targets for 24h; proxied clients fall
  // back to direct connections (their true address becomes visible).
  void ApplyTorBan(const std::vector<NodeId>& targets);
  bool ProxyBanned(NodeId server) const;

  void SetTap(ObservationTap* tap) { tap_ = tap; }

  // --- metrics / invariants -------------------------------------------------
  uint64_t EventLogHash() const { return log_hash_.Digest(); }
  uint64_t MessagesSent(MsgType t) const { return msg_counts_[static_cast<int>(t)]; }
  const std::vector<GroundTruthTx>& TxTable() const { return tx_table_; }
  const GroundTruthTx* TxTruth(TxId tx) const;
  bool ConnectionConservationHolds() const;
  bool GraphConnected() const;  // over online servers
  int TxReachCount(TxId tx) const;  // online servers knowing the tx
  void SetEventSink(std::function<void(const EventLogRecord&)> sink) { sink_ = std::move(sink); }

  Rng& WorldRng() { return rng_; }

  // Assigns the shared public address for a NAT group of clients.
  void SetPublicAddr(NodeId client, NodeId public_addr) { nodes_[client].public_addr = public_addr; }
  void SetUseProxy(NodeId client, bool v) { nodes_[client].use_proxy = v; }
  NodeId ProxyAddr() const { return proxy_addr_; }

 private:
  struct Event {
    int64_t at_ms;
    uint64_t seq;
    int kind;
    // payload
    ConnId link = kNoConn;
    int dir = 0;
    NodeId node = kNoNode;
    TxId tx = 0;
    uint64_t aux = 0;
    std::shared_ptr<std::vector<NetAddress>> addrs;
    std::shared_ptr<std::function<void(World&)>> fn;
  };
  struct EventOrder {
    bool operator()(const Event& x, const Event& y) const {
      if (x.at_ms != y.at_ms) return x.at_ms > y.at_ms;
      return x.seq > y.seq;
    }
  };
  enum EventKind {
    kDeliverAddr,
    kDeliverInv,
    kDeliverGetData,
    kDeliverTx,
    kTrickleTick,
    kConnectClient,
    kDisconnectClient,
    kGenerateTx,
    kForwardTx,
    kAction,
  };

  World() : addr_db_rng_(0), rng_(0) {}

  void Push(Event ev);
  void Log(const char* kind, NodeId from, NodeId to, uint64_t payload);

  void HandleAddr(const Event& ev);
  void HandleInv(const Event& ev);
  void HandleGetData(const Event& ev);
  void HandleTxData(const Event& ev);
  void HandleTick(const Event& ev);
  void ForwardTxFrom(NodeId node, TxId tx);
  void FlushConnection(NodeId node, ConnId link, int side);
  void FlushAllTxQueues(NodeId node);
  void EnsureTickArmed(NodeId node);
  void AdvertiseOn(NodeId client, ConnId link);
  std::vector<std::pair<ConnId, int>> OutHalves(NodeId node) const;
  Connection& HalfOf(ConnId link, NodeId sender) {
    return links_[link].half[links_[link].SideOf(sender)];
  }

  WorldConfig cfg_;
  int64_t now_ms_ = 0;
  uint64_t seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<ConnId> free_links_;
  NodeId proxy_addr_ = kNoNode;
  std::unordered_map<NodeId, int64_t> proxy_ban_until_s_;
  std::vector<GroundTruthTx> tx_table_;
  std::unordered_map<TxId, size_t> tx_index_;
  TxId next_tx_id_ = 0;
  Rng addr_db_rng_;
  Rng rng_;
  ObservationTap* tap_ = nullptr;
  Fnv1a log_hash_;
  std::function<void(const EventLogRecord&)> sink_;
  uint64_t msg_counts_[8] = {0};

  friend class WorldTestPeer;
};

}  // namespace gossiplab::netsim
