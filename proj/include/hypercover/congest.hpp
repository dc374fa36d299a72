#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "hypercover/errors.hpp"
#include "hypercover/hypergraph.hpp"
#include "hypercover/numeric.hpp"

namespace hypercover::congest {

enum class Side : std::uint8_t { Vertex, Edge };

struct NodeId {
  Side side;
  std::uint32_t index;

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline NodeId vertex_node(std::uint32_t v) { return {Side::Vertex, v}; }
inline NodeId edge_node(std::uint32_t e) { return {Side::Edge, e}; }

/// Bipartite communication network: link (v, e) iff v in e.
class Topology {
 public:
  explicit Topology(const Hypergraph& h);

  std::size_t num_vertices() const { return vertex_links_.size(); }
  std::size_t num_edges() const { return edge_links_.size(); }
  std::size_t num_links() const { return links_; }

  std::span<const std::uint32_t> neighbors(NodeId node) const {
    return node.side == Side::Vertex ? std::span<const std::uint32_t>(vertex_links_[node.index])
                                     : std::span<const std::uint32_t>(edge_links_[node.index]);
  }
  bool adjacent(NodeId a, NodeId b) const;

 private:
  std::vector<std::vector<std::uint32_t>> vertex_links_;  // v -> sorted edges
  std::vector<std::vector<std::uint32_t>> edge_links_;    // e -> sorted vertices
  std::size_t links_ = 0;
};

inline Topology build_network(const Hypergraph& h) { return Topology(h); }

// ---------------------------------------------------------------------------
// Messages

enum class MessageKind : std::uint8_t {
  WeightDegree,    // v -> e: (w(v), |E(v)|)
  InitialDeal,     // e -> v: (w(v_e), |E(v_e)|) of the min normalized-weight member
  Covered,         // v -> e: v joined the cover; e -> v: e is covered
  Raise,           // v -> e
  Stuck,           // v -> e
  LevelDelta,      // v -> e: number of level increments this iteration
  DealHalvings,    // e -> v: number of halvings applied this iteration
  DealMultiplied,  // e -> v: one bit, deal was multiplied by alpha
  LocalDegree,     // e -> v: Delta(e) = max_{u in e} |E(u)|
};

std::string_view to_string(MessageKind kind);
MessageKind message_kind_from_string(std::string_view name);

struct Message {
  MessageKind kind;
  BigInt first;   // kind-specific payload
  BigInt second;

  static Message weight_degree(const BigInt& w, std::uint64_t d);
  static Message initial_deal(const BigInt& w, std::uint64_t d);
  static Message covered() { return {MessageKind::Covered, 0, 0}; }
  static Message raise() { return {MessageKind::Raise, 0, 0}; }
  static Message stuck() { return {MessageKind::Stuck, 0, 0}; }
  static Message level_delta(std::uint64_t k);
  static Message deal_halvings(std::uint64_t k);
  static Message deal_multiplied(bool multiplied);
  static Message local_degree(std::uint64_t d);

  friend bool operator==(const Message&, const Message&) = default;
};

/// Length in bits of the kind tag; the tag set is a prefix code per link
/// direction (2 bits for the frequent kinds, 3 for the rest).
std::uint32_t tag_bits(MessageKind kind);

/// Width of the length prefix written before each integer payload:
/// ceil(log2(ceil(log2 max(n, 2)))).
std::uint32_t length_prefix_bits(std::size_t n);

/// Exact encoded size of m in a network over n vertices.
std::uint32_t account_message(const Message& m, std::size_t n);

/// C_msg * ceil(log2 max(n, 2)) + 8 with C_msg = 4.
std::uint32_t bit_budget(std::size_t n);

// ---------------------------------------------------------------------------
// Round engine

struct Incoming {
  NodeId from;
  Message msg;
};

struct Outgoing {
  NodeId to;
  Message msg;
};

struct LoggedMessage {
  NodeId from;
  NodeId to;
  Message msg;
  std::uint32_t bits = 0;
  bool delivered = true;  // false for a recorded non-adjacent send
};

enum class ViolationPolicy { Throw, Record };

/// Per-node inboxes for the next round. Each inbox is sorted by sender so
/// that delivery order never depends on evaluation order.
struct Mailboxes {
  std::vector<std::vector<Incoming>> vertex;
  std::vector<std::vector<Incoming>> edge;

  Mailboxes() = default;
  Mailboxes(std::size_t n, std::size_t m) : vertex(n), edge(m) {}

  std::vector<Incoming>& of(NodeId node) {
    return node.side == Side::Vertex ? vertex[node.index] : edge[node.index];
  }
  bool empty() const;
};

struct RoundDelivery {
  Mailboxes next;
  std::vector<LoggedMessage> log;  // sorted by (from, to)
  std::uint32_t max_bits = 0;
  std::size_t locality_violations = 0;
};

/// Node evaluation order for one round: all vertices then all edges, or a
/// seeded permutation of that list when `shuffle_seed` is non-zero.
std::vector<NodeId> evaluation_order(std::size_t n, std::size_t m, std::uint64_t shuffle_seed,
                                     std::uint64_t round);

/// Runs one synchronous round. Every node's step reads only its own state
/// and inbox and returns its outbox; outboxes are delivered afterwards.
/// Step signatures:
///   std::vector<Outgoing> vstep(std::uint32_t v, VState&, std::span<const Incoming>)
///   std::vector<Outgoing> estep(std::uint32_t e, EState&, std::span<const Incoming>)
template <class VState, class EState, class VStep, class EStep>
RoundDelivery run_round(std::vector<VState>& vertices, std::vector<EState>& edges,
                        const Mailboxes& inbox, const Topology& topology, VStep&& vstep,
                        EStep&& estep, std::span<const NodeId> order,
                        ViolationPolicy policy = ViolationPolicy::Throw) {
  const std::size_t n = vertices.size();
  const std::size_t m = edges.size();
  std::vector<std::vector<Outgoing>> out_v(n), out_e(m);
  for (const NodeId node : order) {
    if (node.side == Side::Vertex) {
      out_v[node.index] = vstep(node.index, vertices[node.index],
                                std::span<const Incoming>(inbox.vertex[node.index]));
    } else {
      out_e[node.index] = estep(node.index, edges[node.index],
                                std::span<const Incoming>(inbox.edge[node.index]));
    }
  }

  RoundDelivery result{Mailboxes(n, m), {}, 0, 0};
  auto deliver = [&](NodeId from, std::vector<Outgoing>& outbox) {
    for (auto& out : outbox) {
      LoggedMessage logged{from, out.to, out.msg, account_message(out.msg, n), true};
      const bool in_range = out.to.side == Side::Vertex ? out.to.index < n : out.to.index < m;
      if (!in_range || out.to.side == from.side || !topology.adjacent(from, out.to)) {
        if (policy == ViolationPolicy::Throw) {
          throw Error(ErrorCode::NonAdjacentSend, "message between non-adjacent nodes");
        }
        logged.delivered = false;
        ++result.locality_violations;
      } else {
        result.next.of(out.to).push_back(Incoming{from, out.msg});
      }
      result.max_bits = std::max(result.max_bits, logged.bits);
      result.log.push_back(std::move(logged));
    }
  };
  for (std::uint32_t v = 0; v < n; ++v) deliver(vertex_node(v), out_v[v]);
  for (std::uint32_t e = 0; e < m; ++e) deliver(edge_node(e), out_e[e]);

  auto by_sender = [](const Incoming& a, const Incoming& b) { return a.from < b.from; };
  for (auto& box : result.next.vertex) std::stable_sort(box.begin(), box.end(), by_sender);
  for (auto& box : result.next.edge) std::stable_sort(box.begin(), box.end(), by_sender);
  return result;
}

}  // namespace hypercover::congest
