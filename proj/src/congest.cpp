#include "hypercover/congest.hpp"

#include <string>

namespace hypercover::congest {

Topology::Topology(const Hypergraph& h)
    : vertex_links_(h.num_vertices()), edge_links_(h.num_edges()) {
  for (EdgeIndex e = 0; e < h.num_edges(); ++e) {
    for (VertexIndex v : h.edge(e)) {
      vertex_links_[v].push_back(e);
      edge_links_[e].push_back(v);
      ++links_;
    }
  }
}

bool Topology::adjacent(NodeId a, NodeId b) const {
  if (a.side == b.side) return false;
  const NodeId vertex = a.side == Side::Vertex ? a : b;
  const NodeId edge = a.side == Side::Vertex ? b : a;
  if (vertex.index >= vertex_links_.size() || edge.index >= edge_links_.size()) return false;
  const auto& links = edge_links_[edge.index];
  return std::binary_search(links.begin(), links.end(), vertex.index);
}

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::WeightDegree: return "WeightDegree";
    case MessageKind::InitialDeal: return "InitialDeal";
    case MessageKind::Covered: return "Covered";
    case MessageKind::Raise: return "Raise";
    case MessageKind::Stuck: return "Stuck";
    case MessageKind::LevelDelta: return "LevelDelta";
    case MessageKind::DealHalvings: return "DealHalvings";
    case MessageKind::DealMultiplied: return "DealMultiplied";
    case MessageKind::LocalDegree: return "LocalDegree";
  }
  return "Unknown";
}

MessageKind message_kind_from_string(std::string_view name) {
  for (auto kind : {MessageKind::WeightDegree, MessageKind::InitialDeal, MessageKind::Covered,
                    MessageKind::Raise, MessageKind::Stuck, MessageKind::LevelDelta,
                    MessageKind::DealHalvings, MessageKind::DealMultiplied,
                    MessageKind::LocalDegree}) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorCode::BadInput, "unknown message kind '" + std::string(name) + "'");
}

namespace {
BigInt from_u64(std::uint64_t x) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(x), 0, 0, &x);
  return r;
}
}  // namespace

Message Message::weight_degree(const BigInt& w, std::uint64_t d) {
  return {MessageKind::WeightDegree, w, from_u64(d)};
}
Message Message::initial_deal(const BigInt& w, std::uint64_t d) {
  return {MessageKind::InitialDeal, w, from_u64(d)};
}
Message Message::level_delta(std::uint64_t k) { return {MessageKind::LevelDelta, from_u64(k), 0}; }
Message Message::deal_halvings(std::uint64_t k) {
  return {MessageKind::DealHalvings, from_u64(k), 0};
}
Message Message::deal_multiplied(bool multiplied) {
  return {MessageKind::DealMultiplied, multiplied ? 1 : 0, 0};
}
Message Message::local_degree(std::uint64_t d) {
  return {MessageKind::LocalDegree, from_u64(d), 0};
}

std::uint32_t tag_bits(MessageKind kind) {
  switch (kind) {
    case MessageKind::WeightDegree:
    case MessageKind::Raise:
    case MessageKind::Stuck:
    case MessageKind::InitialDeal:
    case MessageKind::DealHalvings:
    case MessageKind::DealMultiplied:
      return 2;
    case MessageKind::Covered:
    case MessageKind::LevelDelta:
    case MessageKind::LocalDegree:
      return 3;
  }
  return 3;
}

std::uint32_t length_prefix_bits(std::size_t n) {
  return ceil_log2(ceil_log2(std::max<std::size_t>(n, 2)));
}

std::uint32_t account_message(const Message& m, std::size_t n) {
  const std::uint32_t prefix = length_prefix_bits(n);
  auto integer = [&](const BigInt& x) { return prefix + bit_length(x); };
  std::uint32_t bits = tag_bits(m.kind);
  switch (m.kind) {
    case MessageKind::WeightDegree:
    case MessageKind::InitialDeal:
      bits += integer(m.first) + integer(m.second);
      break;
    case MessageKind::LevelDelta:
    case MessageKind::DealHalvings:
    case MessageKind::LocalDegree:
      bits += integer(m.first);
      break;
    case MessageKind::DealMultiplied:
      bits += 1;
      break;
    case MessageKind::Covered:
    case MessageKind::Raise:
    case MessageKind::Stuck:
      break;
  }
  return bits;
}

std::uint32_t bit_budget(std::size_t n) {
  return 4 * ceil_log2(std::max<std::size_t>(n, 2)) + 8;
}

bool Mailboxes::empty() const {
  auto none = [](const auto& boxes) {
    return std::all_of(boxes.begin(), boxes.end(), [](const auto& b) { return b.empty(); });
  };
  return none(vertex) && none(edge);
}

std::vector<NodeId> evaluation_order(std::size_t n, std::size_t m, std::uint64_t shuffle_seed,
                                     std::uint64_t round) {
  std::vector<NodeId> order;
  order.reserve(n + m);
  for (std::uint32_t v = 0; v < n; ++v) order.push_back(vertex_node(v));
  for (std::uint32_t e = 0; e < m; ++e) order.push_back(edge_node(e));
  if (shuffle_seed != 0) {
    std::mt19937_64 rng(shuffle_seed ^ (round * 0x9E3779B97F4A7C15ULL));
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

}  // namespace hypercover::congest
