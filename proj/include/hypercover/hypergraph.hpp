#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypercover/numeric.hpp"

namespace hypercover {

using VertexId = std::int64_t;    // external label
using VertexIndex = std::uint32_t;  // dense position in [0, n)
using EdgeIndex = std::uint32_t;    // dense position in [0, m)

/// Unvalidated instance data as read from a file or built by hand.
struct RawInstance {
  struct Vertex {
    VertexId id;
    BigInt weight;
  };
  std::vector<Vertex> vertices;
  std::vector<std::vector<VertexId>> edges;
};

/// Weighted hypergraph G = (V, E). Immutable once built; construct through
/// validate() (or the helpers that call it).
class Hypergraph {
 public:
  /// Throws Error{EmptyEdge, UnknownVertex, NonPositiveWeight,
  /// DuplicateVertexInEdge}. Vertex ids must be unique (duplicates report
  /// BadInput).
  static Hypergraph validate(const RawInstance& raw);

  std::size_t num_vertices() const { return ids_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  /// Rank f = max |e| (0 when there are no edges).
  std::uint32_t rank() const { return rank_; }
  /// Maximum degree Delta = max_v |E(v)|.
  std::uint32_t max_degree() const { return max_degree_; }
  /// W = max_v w(v) / min_v w(v).
  const Rational& weight_ratio() const { return weight_ratio_; }
  const BigInt& max_weight() const { return max_weight_; }

  VertexId vertex_id(VertexIndex v) const { return ids_[v]; }
  std::optional<VertexIndex> index_of(VertexId id) const;

  const BigInt& weight(VertexIndex v) const { return weights_[v]; }
  std::span<const BigInt> weights() const { return weights_; }

  /// Members of e in increasing vertex-index order.
  std::span<const VertexIndex> edge(EdgeIndex e) const { return edges_[e]; }
  /// E(v) in increasing edge-index order.
  std::span<const EdgeIndex> incident(VertexIndex v) const { return incident_[v]; }
  std::uint32_t degree(VertexIndex v) const {
    return static_cast<std::uint32_t>(incident_[v].size());
  }
  /// Degree-0 vertices never take part in the protocol.
  bool inert(VertexIndex v) const { return incident_[v].empty(); }

  /// Sum of |e| over all edges; equals the sum of degrees.
  std::size_t incidence_count() const { return incidences_; }

  /// Notes recorded when the instance breaks the polynomial size
  /// assumptions (m or max weight above n^2). Informational only.
  const std::vector<std::string>& assumption_notes() const { return notes_; }

  /// Copy with exact duplicate edges removed (first occurrence kept).
  Hypergraph deduplicated() const;

  BigInt total_weight(std::span<const VertexIndex> set) const;

  RawInstance to_raw() const;

 private:
  Hypergraph() = default;

  std::vector<VertexId> ids_;
  std::vector<BigInt> weights_;
  std::vector<std::vector<VertexIndex>> edges_;
  std::vector<std::vector<EdgeIndex>> incident_;
  std::unordered_map<VertexId, VertexIndex> index_;
  std::uint32_t rank_ = 0;
  std::uint32_t max_degree_ = 0;
  std::size_t incidences_ = 0;
  BigInt max_weight_;
  Rational weight_ratio_;
  std::vector<std::string> notes_;
};

/// True iff every edge intersects `cover`. Vertex ids not in h raise
/// Error{UnknownVertex}.
bool is_cover(const Hypergraph& h, std::span<const VertexId> cover);
bool is_cover_indices(const Hypergraph& h, std::span<const VertexIndex> cover);

// ---------------------------------------------------------------------------
// Set cover view

struct SetCoverInstance {
  std::vector<std::int64_t> elements;
  std::vector<std::vector<std::int64_t>> subsets;
  std::vector<BigInt> weights;  // one per subset
};

struct SetCoverReduction {
  Hypergraph hypergraph;
  /// vertex index i corresponds to subset i; vertex ids are 0..|U|-1.
  std::vector<std::size_t> subset_of_vertex;
  /// edge index k corresponds to elements[k].
  std::vector<std::int64_t> element_of_edge;
};

/// One vertex per subset, one hyperedge e_x = {u_i : x in U_i} per element.
/// Throws Error{UncoverableElement} when some element lies in no subset.
SetCoverReduction from_set_cover(const SetCoverInstance& sc);

// ---------------------------------------------------------------------------
// Generation

struct GeneratedInstance {
  Hypergraph hypergraph;
  std::vector<std::string> warnings;  // parameter clamps
};

/// m edges, each a uniformly random vertex subset with size uniform in
/// [1, f]; weights uniform in [1, weight_max]. Deterministic per seed.
/// Out-of-range parameters are clamped and reported in `warnings`.
GeneratedInstance generate_random(std::int64_t n, std::int64_t m, std::int64_t f,
                                  std::int64_t weight_max, std::uint64_t seed);

/// Instance whose maximum degree is exactly `delta`: `hubs` hub vertices
/// each sit in `delta` edges of size f. The other f-1 members come from a
/// pool of delta*(f-1) leaves, each used once per hub, so leaves have degree
/// `hubs` (clamped below delta when f > 1). Used by the bench sweep.
GeneratedInstance generate_hubs(std::uint32_t delta, std::uint32_t f, std::uint32_t hubs,
                                std::int64_t weight_max, std::uint64_t seed);

}  // namespace hypercover
