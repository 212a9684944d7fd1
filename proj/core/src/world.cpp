// Copyright (c) 2026 The gossiplab developers
// Distributed under the MIT software license.

#include "gossiplab/world.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace gossiplab::netsim {

namespace {

// Fake/non-node address space: markers and the proxy stand-in live here so
// they can never collide with real node ids.
constexpr NodeId kProxyAddrId = (1ULL << 40) - 1;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int Find(int x) { return parent[x] == x ? x : parent[x] = Find(parent[x]); }
  void Unite(int a, int b) { parent[Find(a)] = Find(b); }
};

}  // namespace

void WorldConfig::Validate() const {
  if (n_servers < 1) throw std::invalid_argument("n_servers must be positive");
  if (outgoing_per_peer < 1) throw std::invalid_argument("outgoing_per_peer must be >= 1");
  if (max_connections_per_server < outgoing_per_peer)
    throw std::invalid_argument("max_connections_per_server below outgoing_per_peer");
  if (n_servers < outgoing_per_peer + 1)
    throw std::invalid_argument("not enough servers to pick distinct outgoing peers");
  churn.Validate();
}

World World::Build(const WorldConfig& cfg) {
  cfg.Validate();
  World w;
  w.cfg_ = cfg;
  w.rng_ = Rng(cfg.seed);
  w.addr_db_rng_ = Rng(Rng::SplitSeed(cfg.seed, 0xdbdbdbdb));
  w.proxy_addr_ = kProxyAddrId;

  int total = cfg.n_servers + cfg.n_clients;
  w.nodes_.resize(total);
  for (int i = 0; i < total; ++i) {
    Node& n = w.nodes_[i];
    n.id = static_cast<NodeId>(i);
    n.role = i < cfg.n_servers ? NodeRole::Server : NodeRole::Client;
    n.salt = w.rng_.NextU64();
    n.public_addr = n.id;
    n.online = n.role == NodeRole::Server;
    n.trickle_phase_ms =
        cfg.trickle_phase_jitter ? static_cast<int64_t>(w.rng_.Below(kTrickleIntervalMs)) : 0;
  }

  // Every server's address book starts with all server addresses.
  for (int i = 0; i < cfg.n_servers; ++i) {
    for (int j = 0; j < cfg.n_servers; ++j) {
      if (i == j) continue;
      w.nodes_[i].addr_db.Insert(
          {static_cast<NodeId>(j), Reachability::Reachable, 0}, w.addr_db_rng_);
    }
  }

  auto linked = [&](NodeId a, NodeId b) {
    for (ConnId id : w.nodes_[a].links)
      if (w.links_[id].PeerOf(a) == b) return true;
    return false;
  };

  // Server graph via each server's outgoing connections.
  for (int i = 0; i < cfg.n_servers; ++i) {
    int made = 0, attempts = 0;
    while (made < cfg.outgoing_per_peer && attempts < 50 * cfg.n_servers) {
      ++attempts;
      NodeId peer = w.rng_.Below(cfg.n_servers);
      if (peer == static_cast<NodeId>(i) || linked(i, peer)) continue;
      if (w.FreeSlots(peer) <= 0 || w.FreeSlots(i) <= 0) continue;
      if (w.Connect(i, peer) != kNoConn) ++made;
    }
  }

  // Optional extra random links to hit a target mean degree.
  if (cfg.target_mean_degree > 0) {
    int64_t want_links =
        static_cast<int64_t>(cfg.target_mean_degree * cfg.n_servers / 2.0);
    int64_t have = 0;
    for (const Link& l : w.links_)
      if (l.alive) ++have;
    int64_t attempts = 0;
    while (have < want_links && attempts < 200 * want_links) {
      ++attempts;
      NodeId a = w.rng_.Below(cfg.n_servers);
      NodeId b = w.rng_.Below(cfg.n_servers);
      if (a == b || linked(a, b)) continue;
      if (w.FreeSlots(a) <= 0 || w.FreeSlots(b) <= 0) continue;
      if (w.Connect(a, b) != kNoConn) ++have;
    }
  }

  // Join any leftover components.
  UnionFind uf(cfg.n_servers);
  for (const Link& l : w.links_)
    if (l.alive) uf.Unite(static_cast<int>(l.a), static_cast<int>(l.b));
  for (int i = 1; i < cfg.n_servers; ++i) {
    if (uf.Find(i) != uf.Find(0)) {
      if (w.Connect(i, uf.Find(0)) != kNoConn) uf.Unite(i, uf.Find(0));
    }
  }

  // Scheduled server churn, when enabled.
  if (cfg.churn.enabled && !cfg.churn.server_disconnect_curve.empty()) {
    for (int i = 0; i < cfg.n_servers; ++i) {
      int64_t life_s = cfg.churn.SampleServerLifetimeS(w.rng_);
      if (life_s >= 0) {
        Event ev;
        ev.kind = kDisconnectClient;  // same handling: drop all links
        ev.at_ms = life_s * 1000;
        ev.node = static_cast<NodeId>(i);
        w.Push(std::move(ev));
      }
    }
  }

  return w;
}

std::vector<NodeId> World::Servers() const {
  std::vector<NodeId> out;
  for (int i = 0; i < cfg_.n_servers; ++i)
    if (nodes_[i].online) out.push_back(i);
  return out;
}

std::vector<NodeId> World::Clients() const {
  std::vector<NodeId> out;
  for (int i = cfg_.n_servers; i < cfg_.n_servers + cfg_.n_clients; ++i) out.push_back(i);
  return out;
}

int World::FreeSlots(NodeId server) const {
  return cfg_.max_connections_per_server - LiveConnectionCount(server);
}

std::vector<NodeId> World::ServerNeighbors(NodeId n) const {
  std::vector<NodeId> out;
  for (ConnId id : nodes_[n].links) {
    NodeId peer = links_[id].PeerOf(n);
    if (peer < static_cast<NodeId>(cfg_.n_servers) && !nodes_[peer].attacker_owned)
      out.push_back(peer);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

NodeId World::AddAttackerNode() {
  Node n;
  n.id = nodes_.size();
  n.role = NodeRole::Client;
  n.salt = rng_.NextU64();
  n.public_addr = n.id;
  n.online = true;
  n.attacker_owned = true;
  n.trickle_phase_ms =
      cfg_.trickle_phase_jitter ? static_cast<int64_t>(rng_.Below(kTrickleIntervalMs)) : 0;
  nodes_.push_back(std::move(n));
  return nodes_.back().id;
}

ConnId World::Connect(NodeId from, NodeId to) {
  if (to >= nodes_.size() || from >= nodes_.size()) return kNoConn;
  Node& target = nodes_[to];
  if (target.role != NodeRole::Server || !target.online) return kNoConn;
  if (FreeSlots(to) <= 0) return kNoConn;

  ConnId id;
  if (!free_links_.empty()) {
    id = free_links_.back();
    free_links_.pop_back();
    uint32_t gen = links_[id].half[0].nonce ? 1 : 0;  // unused; generation below
    (void)gen;
    links_[id] = Link{};
  } else {
    id = static_cast<ConnId>(links_.size());
    links_.emplace_back();
  }
  Link& l = links_[id];
  l.id = id;
  l.a = from;
  l.b = to;
  l.alive = true;
  for (int s = 0; s < 2; ++s) {
    Connection& c = l.half[s];
    c.id = id;
    c.from = s == 0 ? from : to;
    c.to = s == 0 ? to : from;
    c.nonce = rng_.NextU64();
    c.established_at_s = NowS();
    c.history_epoch = DayOf(NowS());
  }
  nodes_[from].links.push_back(id);
  nodes_[to].links.push_back(id);
  Log("conn", from, to, id);
  return id;
}

void World::Disconnect(ConnId id) {
  if (id >= links_.size() || !links_[id].alive) return;
  Link& l = links_[id];
  l.alive = false;
  for (NodeId n : {l.a, l.b}) {
    auto& v = nodes_[n].links;
    auto it = std::find(v.begin(), v.end(), id);
    if (it != v.end()) {
      *it = v.back();
      v.pop_back();
    }
  }
  for (int s = 0; s < 2; ++s) {
    l.half[s].addr_queue.clear();
    l.half[s].addr_queued.clear();
    l.half[s].tx_queue.clear();
  }
  Log("drop", l.a, l.b, id);
  free_links_.push_back(id);
}

EntryFingerprint World::ClientConnect(NodeId client) {
  Node& c = nodes_[client];
  EntryFingerprint fp;
  fp.client = client;
  fp.session_start_s = NowS();
  if (c.online) return fp;
  c.online = true;

  std::vector<NodeId> candidates;
  for (int i = 0; i < cfg_.n_servers; ++i)
    if (nodes_[i].online && FreeSlots(i) > 0) candidates.push_back(i);

  int want = cfg_.outgoing_per_peer;
  if (static_cast<int>(candidates.size()) < want) {
    fp.degraded = true;
    want = static_cast<int>(candidates.size());
  }
  for (uint32_t idx : rng_.SampleWithoutReplacement(candidates.size(), want)) {
    NodeId server = candidates[idx];
    ConnId link = Connect(client, server);
    if (link == kNoConn) {
      fp.degraded = true;
      continue;
    }
    fp.entries.push_back(server);
    AdvertiseOn(client, link);
  }
  if (static_cast<int>(fp.entries.size()) < cfg_.outgoing_per_peer) fp.degraded = true;
  Log("client_up", client, kNoNode, fp.entries.size());
  return fp;
}

void World::ClientDisconnect(NodeId client) {
  Node& c = nodes_[client];
  if (!c.online) return;
  std::vector<ConnId> ids = c.links;
  for (ConnId id : ids) Disconnect(id);
  c.online = false;
  c.tick_armed = false;
  Log("client_down", client, kNoNode, 0);
}

void World::AdvertiseOn(NodeId client, ConnId link) {
  const Node& c = nodes_[client];
  NodeId server = links_[link].PeerOf(client);
  NodeId advertised = c.public_addr;
  if (c.use_proxy && !ProxyBanned(server)) advertised = proxy_addr_;
  SendAddrMessage(link, client, {{advertised, Reachability::Reachable, NowS()}});
}

void World::SendAddrMessage(ConnId link, NodeId sender, std::vector<NetAddress> addrs) {
  if (!links_[link].alive) return;
  Event ev;
  ev.kind = kDeliverAddr;
  ev.at_ms = now_ms_ + cfg_.delay.SampleLinkDelayMs(rng_);
  ev.link = link;
  ev.dir = links_[link].SideOf(sender);
  ev.addrs = std::make_shared<std::vector<NetAddress>>(std::move(addrs));
  ++msg_counts_[static_cast<int>(MsgType::Addr)];
  Push(std::move(ev));
}

std::vector<NetAddress> World::QueryGetAddr(NodeId requester, NodeId server) {
  ++msg_counts_[static_cast<int>(MsgType::GetAddr)];
  Log("getaddr", requester, server, 0);
  return protocol::GetAddrResponse(nodes_[server].addr_db, rng_);
}

bool World::ProbeLiveness(NodeId target) const {
  if (target >= nodes_.size()) return false;
  const Node& n = nodes_[target];
  return n.role == NodeRole::Server && n.online && !n.attacker_owned &&
         FreeSlots(target) > 0;
}

void World::GenerateTx(NodeId origin, TxId tx, uint64_t pseudonym) {
  Node& n = nodes_[origin];
  GroundTruthTx truth;
  truth.tx = tx;
  truth.origin = origin;
  truth.origin_public_addr = n.public_addr;
  truth.pseudonym = pseudonym;
  truth.generated_at_ms = now_ms_;
  truth.immediate = protocol::TxForwardedImmediately(tx, n.salt);
  for (ConnId id : n.links) {
    NodeId peer = links_[id].PeerOf(origin);
    if (IsServer(peer)) truth.entries_at_generation.push_back(peer);
  }
  tx_index_[tx] = tx_table_.size();
  tx_table_.push_back(std::move(truth));
  n.known_txs.Insert(tx);
  Log("gen_tx", origin, kNoNode, tx);
  ForwardTxFrom(origin, tx);
}

void World::ScheduleClientConnect(NodeId client, int64_t at_ms) {
  Event ev;
  ev.kind = kConnectClient;
  ev.at_ms = at_ms;
  ev.node = client;
  Push(std::move(ev));
}

void World::ScheduleClientDisconnect(NodeId client, int64_t at_ms) {
  Event ev;
  ev.kind = kDisconnectClient;
  ev.at_ms = at_ms;
  ev.node = client;
  Push(std::move(ev));
}

void World::ScheduleTx(NodeId origin, int64_t at_ms, uint64_t pseudonym) {
  Event ev;
  ev.kind = kGenerateTx;
  ev.at_ms = at_ms;
  ev.node = origin;
  ev.aux = pseudonym;
  Push(std::move(ev));
}

void World::ScheduleAction(int64_t at_ms, std::function<void(World&)> fn) {
  Event ev;
  ev.kind = kAction;
  ev.at_ms = at_ms;
  ev.fn = std::make_shared<std::function<void(World&)>>(std::move(fn));
  Push(std::move(ev));
}

void World::ApplyTorBan(const std::vector<NodeId>& targets) {
  if (!cfg_.tor_ban_enabled) throw std::runtime_error("tor_ban_enabled is off");
  for (NodeId t : targets) proxy_ban_until_s_[t] = NowS() + kHistoryEpochS;
}

bool World::ProxyBanned(NodeId server) const {
  auto it = proxy_ban_until_s_.find(server);
  return it != proxy_ban_until_s_.end() && NowS() < it->second;
}

const GroundTruthTx* World::TxTruth(TxId tx) const {
  auto it = tx_index_.find(tx);
  return it == tx_index_.end() ? nullptr : &tx_table_[it->second];
}

bool World::ConnectionConservationHolds() const {
  uint64_t degree_sum = 0;
  for (const Node& n : nodes_) degree_sum += n.links.size();
  uint64_t live = 0;
  for (const Link& l : links_)
    if (l.alive) ++live;
  if (degree_sum != 2 * live) return false;
  for (const Node& n : nodes_) {
    if (n.role == NodeRole::Server &&
        static_cast<int>(n.links.size()) > cfg_.max_connections_per_server)
      return false;
  }
  return true;
}

bool World::GraphConnected() const {
  std::vector<NodeId> servers = Servers();
  if (servers.empty()) return true;
  std::unordered_set<NodeId> seen;
  std::queue<NodeId> bfs;
  bfs.push(servers[0]);
  seen.insert(servers[0]);
  while (!bfs.empty()) {
    NodeId cur = bfs.front();
    bfs.pop();
    for (ConnId id : nodes_[cur].links) {
      NodeId peer = links_[id].PeerOf(cur);
      if (peer < static_cast<NodeId>(cfg_.n_servers) && nodes_[peer].online &&
          !seen.count(peer)) {
        seen.insert(peer);
        bfs.push(peer);
      }
    }
  }
  return seen.size() == servers.size();
}

int World::TxReachCount(TxId tx) const {
  int count = 0;
  for (int i = 0; i < cfg_.n_servers; ++i)
    if (nodes_[i].online && nodes_[i].known_txs.Contains(tx)) ++count;
  return count;
}

void World::Push(Event ev) {
  ev.seq = seq_++;
  queue_.push(std::move(ev));
}

void World::Log(const char* kind, NodeId from, NodeId to, uint64_t payload) {
  log_hash_.Write(static_cast<uint64_t>(now_ms_));
  log_hash_.Write(static_cast<uint64_t>(kind[0]) | (static_cast<uint64_t>(kind[1]) << 8));
  log_hash_.Write(from);
  log_hash_.Write(to);
  log_hash_.Write(payload);
  if (sink_) sink_({now_ms_, kind, from, to, payload});
}

std::vector<std::pair<ConnId, int>> World::OutHalves(NodeId node) const {
  std::vector<std::pair<ConnId, int>> out;
  out.reserve(nodes_[node].links.size());
  for (ConnId id : nodes_[node].links) out.emplace_back(id, links_[id].SideOf(node));
  return out;
}

void World::EnsureTickArmed(NodeId node) {
  Node& n = nodes_[node];
  if (n.tick_armed) return;
  int64_t k = (now_ms_ - n.trickle_phase_ms) / kTrickleIntervalMs + 1;
  if (k < 0) k = 0;
  int64_t next = n.trickle_phase_ms + k * kTrickleIntervalMs;
  while (next <= now_ms_) next += kTrickleIntervalMs;
  Event ev;
  ev.kind = kTrickleTick;
  ev.at_ms = next;
  ev.node = node;
  Push(std::move(ev));
  n.tick_armed = true;
}

void World::HandleAddr(const Event& ev) {
  Link& l = links_[ev.link];
  if (!l.alive) return;
  const Connection& arriving = l.half[ev.dir];
  NodeId receiver = arriving.to;
  NodeId sender = arriving.from;
  Node& node = nodes_[receiver];
  const std::vector<NetAddress>& addrs = *ev.addrs;
  Log("addr", sender, receiver, addrs.size());

  if (node.attacker_owned) {
    if (tap_) tap_->OnAddrDelivered(sender, ev.link, now_ms_, addrs);
    return;
  }
  if (!node.online) return;

  int count = static_cast<int>(addrs.size());
  int64_t now_s = NowS();

  // Forwarding candidates: every connection except the one the message
  // arrived on (its history already contains the address).
  std::vector<protocol::Neighbor> neighbors;
  std::vector<std::pair<ConnId, int>> slots;
  neighbors.reserve(node.links.size());
  for (ConnId id : node.links) {
    if (id == ev.link) continue;
    int side = links_[id].SideOf(receiver);
    neighbors.push_back({links_[id].PeerOf(receiver), links_[id].half[side].nonce});
    slots.emplace_back(id, side);
  }

  bool enqueued = false;
  for (const NetAddress& a : addrs) {
    if (a.owner == node.public_addr || a.owner == node.id) continue;
    node.addr_db.Insert(a, addr_db_rng_);
    if (neighbors.empty()) continue;
    for (size_t idx : protocol::SelectResponsibleIndices(
             a, std::span<const protocol::Neighbor>(neighbors), node.salt, DayOf(now_s))) {
      Connection& conn = links_[slots[idx].first].half[slots[idx].second];
      if (!protocol::ShouldForwardAddr(count, a, now_s, conn)) continue;
      if (conn.addr_queued.count(a.owner)) continue;
      conn.addr_queue.push_back(a);
      conn.addr_queued.insert(a.owner);
      enqueued = true;
    }
  }
  if (enqueued) EnsureTickArmed(receiver);
}

void World::HandleInv(const Event& ev) {
  Link& l = links_[ev.link];
  if (!l.alive) return;
  const Connection& arriving = l.half[ev.dir];
  NodeId receiver = arriving.to;
  Node& node = nodes_[receiver];
  Log("inv", arriving.from, receiver, ev.tx);

  if (node.attacker_owned) {
    if (tap_) tap_->OnInvDelivered(arriving.from, ev.link, now_ms_, ev.tx);
    return;
  }
  if (!node.online) return;
  if (node.known_txs.Contains(ev.tx) || node.requested_txs.Contains(ev.tx)) return;
  node.requested_txs.Insert(ev.tx);

  Event get;
  get.kind = kDeliverGetData;
  get.at_ms = now_ms_ + static_cast<int64_t>(cfg_.delay.processing_ms) +
              cfg_.delay.SampleLinkDelayMs(rng_);
  get.link = ev.link;
  get.dir = 1 - ev.dir;
  get.tx = ev.tx;
  ++msg_counts_[static_cast<int>(MsgType::GetData)];
  Push(std::move(get));
}

void World::HandleGetData(const Event& ev) {
  Link& l = links_[ev.link];
  if (!l.alive) return;
  const Connection& arriving = l.half[ev.dir];
  NodeId receiver = arriving.to;  // the node asked for the tx payload
  if (!nodes_[receiver].known_txs.Contains(ev.tx)) return;
  Log("getdata", arriving.from, receiver, ev.tx);

  Event txev;
  txev.kind = kDeliverTx;
  txev.at_ms = now_ms_ + cfg_.delay.SampleLinkDelayMs(rng_);
  txev.link = ev.link;
  txev.dir = 1 - ev.dir;
  txev.tx = ev.tx;
  ++msg_counts_[static_cast<int>(MsgType::TxData)];
  Push(std::move(txev));
}

void World::HandleTxData(const Event& ev) {
  Link& l = links_[ev.link];
  if (!l.alive) return;
  const Connection& arriving = l.half[ev.dir];
  NodeId receiver = arriving.to;
  Node& node = nodes_[receiver];
  Log("tx", arriving.from, receiver, ev.tx);
  if (!node.online || node.attacker_owned) return;
  if (node.known_txs.Contains(ev.tx)) return;
  node.known_txs.Insert(ev.tx);

  // Validation cost before the tx is scheduled to this node's neighbours.
  Event fwd;
  fwd.kind = kForwardTx;
  fwd.at_ms = now_ms_ + static_cast<int64_t>(cfg_.delay.processing_ms);
  fwd.node = receiver;
  fwd.tx = ev.tx;
  Push(std::move(fwd));
}

void World::ForwardTxFrom(NodeId node_id, TxId tx) {
  Node& node = nodes_[node_id];
  if (!node.online) return;
  if (node.links.empty()) return;

  std::vector<Connection*> conns;
  conns.reserve(node.links.size());
  for (ConnId id : node.links) conns.push_back(&links_[id].half[links_[id].SideOf(node_id)]);

  protocol::TxSchedule sched =
      protocol::ScheduleTxForwarding(tx, std::span<Connection* const>(conns), node.salt, NowS());
  bool enqueued = false;
  for (size_t idx : sched.queued_to) {
    Connection& c = *conns[idx];
    if (std::find(c.tx_queue.begin(), c.tx_queue.end(), tx) != c.tx_queue.end()) continue;
    c.tx_queue.push_back(tx);
    enqueued = true;
  }
  if (sched.immediate) {
    FlushAllTxQueues(node_id);
  } else if (enqueued) {
    EnsureTickArmed(node_id);
  }
}

void World::FlushAllTxQueues(NodeId node_id) {
  Node& node = nodes_[node_id];
  int64_t now_s = NowS();
  for (ConnId id : node.links) {
    Link& l = links_[id];
    Connection& c = l.half[l.SideOf(node_id)];
    for (TxId tx : c.tx_queue) {
      if (c.TxInHistory(tx, now_s)) continue;
      c.MarkTxSent(tx, now_s);
      Event inv;
      inv.kind = kDeliverInv;
      inv.at_ms = now_ms_ + cfg_.delay.SampleLinkDelayMs(rng_);
      inv.link = id;
      inv.dir = l.SideOf(node_id);
      inv.tx = tx;
      ++msg_counts_[static_cast<int>(MsgType::Inv)];
      Push(std::move(inv));
    }
    c.tx_queue.clear();
  }
}

void World::FlushConnection(NodeId node_id, ConnId link, int side) {
  Link& l = links_[link];
  if (!l.alive) return;
  Connection& c = l.half[side];
  int64_t now_s = NowS();

  if (!c.addr_queue.empty()) {
    std::vector<NetAddress> msg;
    msg.swap(c.addr_queue);
    c.addr_queued.clear();
    for (const NetAddress& a : msg) c.MarkAddrSent(a.owner, now_s);
    Event ev;
    ev.kind = kDeliverAddr;
    ev.at_ms = now_ms_ + cfg_.delay.SampleLinkDelayMs(rng_);
    ev.link = link;
    ev.dir = side;
    ev.addrs = std::make_shared<std::vector<NetAddress>>(std::move(msg));
    ++msg_counts_[static_cast<int>(MsgType::Addr)];
    Push(std::move(ev));
  }

  for (TxId tx : c.tx_queue) {
    if (c.TxInHistory(tx, now_s)) continue;
    c.MarkTxSent(tx, now_s);
    Event inv;
    inv.kind = kDeliverInv;
    inv.at_ms = now_ms_ + cfg_.delay.SampleLinkDelayMs(rng_);
    inv.link = link;
    inv.dir = side;
    inv.tx = tx;
    ++msg_counts_[static_cast<int>(MsgType::Inv)];
    Push(std::move(inv));
  }
  c.tx_queue.clear();
}

void World::HandleTick(const Event& ev) {
  Node& node = nodes_[ev.node];
  node.tick_armed = false;
  if (!node.online || node.links.empty()) return;

  size_t pick = protocol::TricklePick(node.links.size(), rng_);
  ConnId link = node.links[pick];
  FlushConnection(ev.node, link, links_[link].SideOf(ev.node));

  // Keep ticking while anything is queued on any connection.
  for (ConnId id : node.links) {
    const Connection& c = links_[id].half[links_[id].SideOf(ev.node)];
    if (!c.addr_queue.empty() || !c.tx_queue.empty()) {
      EnsureTickArmed(ev.node);
      return;
    }
  }
}

void World::RunUntil(int64_t t_end_ms) {
  if (t_end_ms < now_ms_) throw std::invalid_argument("run_until into the past");
  while (!queue_.empty() && queue_.top().at_ms <= t_end_ms) {
    Event ev = queue_.top();
    queue_.pop();
    now_ms_ = ev.at_ms;
    switch (ev.kind) {
      case kDeliverAddr:
        HandleAddr(ev);
        break;
      case kDeliverInv:
        HandleInv(ev);
        break;
      case kDeliverGetData:
        HandleGetData(ev);
        break;
      case kDeliverTx:
        HandleTxData(ev);
        break;
      case kTrickleTick:
        HandleTick(ev);
        break;
      case kConnectClient:
        ClientConnect(ev.node);
        break;
      case kDisconnectClient:
        ClientDisconnect(ev.node);
        break;
      case kGenerateTx:
        GenerateTx(ev.node, next_tx_id_++, ev.aux);
        break;
      case kForwardTx:
        ForwardTxFrom(ev.node, ev.tx);
        break;
      case kAction:
        (*ev.fn)(*this);
        break;
      default:
        break;
    }
  }
  now_ms_ = t_end_ms;
}

}  // namespace gossiplab::netsim
