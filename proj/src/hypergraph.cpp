#include "hypercover/hypergraph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

#include "hypercover/errors.hpp"

namespace hypercover {

Hypergraph Hypergraph::validate(const RawInstance& raw) {
  Hypergraph h;
  const std::size_t n = raw.vertices.size();
  h.ids_.reserve(n);
  h.weights_.reserve(n);
  for (const auto& vx : raw.vertices) {
    if (vx.weight < 1) {
      throw Error(ErrorCode::NonPositiveWeight,
                  "vertex " + std::to_string(vx.id) + " has weight " + vx.weight.get_str());
    }
    const auto index = static_cast<VertexIndex>(h.ids_.size());
    if (!h.index_.emplace(vx.id, index).second) {
      throw Error(ErrorCode::BadInput, "duplicate vertex id " + std::to_string(vx.id));
    }
    h.ids_.push_back(vx.id);
    h.weights_.push_back(vx.weight);
  }

  h.incident_.assign(n, {});
  h.edges_.reserve(raw.edges.size());
  for (std::size_t k = 0; k < raw.edges.size(); ++k) {
    const auto& members = raw.edges[k];
    if (members.empty()) throw Error(ErrorCode::EmptyEdge, "edge " + std::to_string(k) + " is empty");
    std::vector<VertexIndex> e;
    e.reserve(members.size());
    for (VertexId id : members) {
      auto it = h.index_.find(id);
      if (it == h.index_.end()) {
        throw Error(ErrorCode::UnknownVertex,
                    "edge " + std::to_string(k) + " names vertex " + std::to_string(id));
      }
      e.push_back(it->second);
    }
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
      throw Error(ErrorCode::DuplicateVertexInEdge,
                  "edge " + std::to_string(k) + " repeats a vertex");
    }
    const auto index = static_cast<EdgeIndex>(h.edges_.size());
    for (VertexIndex v : e) h.incident_[v].push_back(index);
    h.rank_ = std::max(h.rank_, static_cast<std::uint32_t>(e.size()));
    h.incidences_ += e.size();
    h.edges_.push_back(std::move(e));
  }
  for (const auto& inc : h.incident_) {
    h.max_degree_ = std::max(h.max_degree_, static_cast<std::uint32_t>(inc.size()));
  }

  if (n == 0) {
    h.max_weight_ = 0;
    h.weight_ratio_ = 1;
  } else {
    const auto [lo, hi] = std::minmax_element(h.weights_.begin(), h.weights_.end());
    h.max_weight_ = *hi;
    h.weight_ratio_ = Rational(*hi, *lo);
    h.weight_ratio_.canonicalize();
  }

  const BigInt n2 = BigInt(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n);
  if (BigInt(static_cast<unsigned long>(h.edges_.size())) > n2) {
    h.notes_.push_back("edge count " + std::to_string(h.edges_.size()) + " exceeds n^2");
  }
  if (h.max_weight_ > n2) {
    h.notes_.push_back("max weight " + h.max_weight_.get_str() + " exceeds n^2");
  }
  return h;
}

std::optional<VertexIndex> Hypergraph::index_of(VertexId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Hypergraph Hypergraph::deduplicated() const {
  RawInstance raw = to_raw();
  std::set<std::vector<VertexIndex>> seen;
  raw.edges.clear();
  for (const auto& e : edges_) {
    if (!seen.insert(e).second) continue;
    std::vector<VertexId> ids;
    for (VertexIndex v : e) ids.push_back(ids_[v]);
    raw.edges.push_back(std::move(ids));
  }
  return validate(raw);
}

BigInt Hypergraph::total_weight(std::span<const VertexIndex> set) const {
  BigInt total = 0;
  for (VertexIndex v : set) total += weights_.at(v);
  return total;
}

RawInstance Hypergraph::to_raw() const {
  RawInstance raw;
  for (std::size_t v = 0; v < ids_.size(); ++v) raw.vertices.push_back({ids_[v], weights_[v]});
  for (const auto& e : edges_) {
    std::vector<VertexId> ids;
    for (VertexIndex v : e) ids.push_back(ids_[v]);
    raw.edges.push_back(std::move(ids));
  }
  return raw;
}

bool is_cover_indices(const Hypergraph& h, std::span<const VertexIndex> cover) {
  std::vector<char> in(h.num_vertices(), 0);
  for (VertexIndex v : cover) {
    if (v >= h.num_vertices()) {
      throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(v));
    }
    in[v] = 1;
  }
  for (EdgeIndex e = 0; e < h.num_edges(); ++e) {
    const auto members = h.edge(e);
    if (std::none_of(members.begin(), members.end(), [&](VertexIndex v) { return in[v]; })) {
      return false;
    }
  }
  return true;
}

bool is_cover(const Hypergraph& h, std::span<const VertexId> cover) {
  std::vector<VertexIndex> indices;
  indices.reserve(cover.size());
  for (VertexId id : cover) {
    auto v = h.index_of(id);
    if (!v) throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(id));
    indices.push_back(*v);
  }
  return is_cover_indices(h, indices);
}

SetCoverReduction from_set_cover(const SetCoverInstance& sc) {
  if (sc.weights.size() != sc.subsets.size()) {
    throw Error(ErrorCode::BadInput, "one weight per subset required");
  }
  std::map<std::int64_t, std::size_t> position;
  for (std::size_t k = 0; k < sc.elements.size(); ++k) {
    if (!position.emplace(sc.elements[k], k).second) {
      throw Error(ErrorCode::BadInput, "duplicate element " + std::to_string(sc.elements[k]));
    }
  }
  std::vector<std::vector<VertexId>> members(sc.elements.size());
  for (std::size_t i = 0; i < sc.subsets.size(); ++i) {
    std::set<std::int64_t> distinct(sc.subsets[i].begin(), sc.subsets[i].end());
    for (std::int64_t x : distinct) {
      auto it = position.find(x);
      if (it == position.end()) {
        throw Error(ErrorCode::BadInput, "subset " + std::to_string(i) + " names unknown element " +
                                             std::to_string(x));
      }
      members[it->second].push_back(static_cast<VertexId>(i));
    }
  }

  RawInstance raw;
  for (std::size_t i = 0; i < sc.subsets.size(); ++i) {
    raw.vertices.push_back({static_cast<VertexId>(i), sc.weights[i]});
  }
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (members[k].empty()) {
      throw Error(ErrorCode::UncoverableElement,
                  "element " + std::to_string(sc.elements[k]) + " lies in no subset");
    }
    raw.edges.push_back(members[k]);
  }

  SetCoverReduction out{Hypergraph::validate(raw), {}, sc.elements};
  out.subset_of_vertex.resize(sc.subsets.size());
  std::iota(out.subset_of_vertex.begin(), out.subset_of_vertex.end(), std::size_t{0});
  return out;
}

GeneratedInstance generate_random(std::int64_t n, std::int64_t m, std::int64_t f,
                                  std::int64_t weight_max, std::uint64_t seed) {
  std::vector<std::string> warnings;
  auto clamp = [&](std::int64_t& value, std::int64_t lo, std::int64_t hi, const char* name) {
    const std::int64_t clamped = std::clamp(value, lo, hi);
    if (clamped != value) {
      warnings.push_back(std::string(name) + " clamped from " + std::to_string(value) + " to " +
                         std::to_string(clamped));
      value = clamped;
    }
  };
  clamp(n, 1, std::int64_t{1} << 24, "n");
  clamp(m, 1, std::int64_t{1} << 24, "m");
  clamp(f, 1, n, "f");
  clamp(weight_max, 1, std::int64_t{1} << 62, "weight_max");

  std::mt19937_64 rng(seed);
  RawInstance raw;
  std::uniform_int_distribution<std::int64_t> weight(1, weight_max);
  for (std::int64_t v = 1; v <= n; ++v) raw.vertices.push_back({v, BigInt(std::to_string(weight(rng)))});

  std::vector<VertexId> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), VertexId{1});
  std::uniform_int_distribution<std::int64_t> size(1, f);
  for (std::int64_t k = 0; k < m; ++k) {
    const auto s = static_cast<std::size_t>(size(rng));
    for (std::size_t i = 0; i < s; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    std::vector<VertexId> e(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(s));
    std::sort(e.begin(), e.end());
    raw.edges.push_back(std::move(e));
  }
  return {Hypergraph::validate(raw), std::move(warnings)};
}

GeneratedInstance generate_hubs(std::uint32_t delta, std::uint32_t f, std::uint32_t hubs,
                                std::int64_t weight_max, std::uint64_t seed) {
  std::vector<std::string> warnings;
  if (delta < 1) {
    warnings.push_back("delta clamped to 1");
    delta = 1;
  }
  if (f < 1) {
    warnings.push_back("f clamped to 1");
    f = 1;
  }
  if (hubs < 1) {
    warnings.push_back("hubs clamped to 1");
    hubs = 1;
  }
  if (weight_max < 1) {
    warnings.push_back("weight_max clamped to 1");
    weight_max = 1;
  }

  if (f > 1 && hubs >= delta) {
    warnings.push_back("hubs clamped to " + std::to_string(delta - 1));
    hubs = std::max<std::uint32_t>(1, delta - 1);
  }

  // Every hub partitions a fresh shuffle of the leaf pool into its delta
  // edges, so leaves have degree `hubs` and no edge repeats.
  const std::uint64_t leaves = std::uint64_t{delta} * (f - 1);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> weight(1, weight_max);
  RawInstance raw;
  for (std::uint64_t v = 1; v <= hubs + leaves; ++v) {
    raw.vertices.push_back({static_cast<VertexId>(v), BigInt(std::to_string(weight(rng)))});
  }
  std::vector<VertexId> pool(leaves);
  std::iota(pool.begin(), pool.end(), static_cast<VertexId>(hubs + 1));
  for (std::uint32_t hub = 1; hub <= hubs; ++hub) {
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::uint32_t k = 0; k < delta; ++k) {
      std::vector<VertexId> e{static_cast<VertexId>(hub)};
      for (std::uint32_t i = 0; i + 1 < f; ++i) e.push_back(pool[std::size_t{k} * (f - 1) + i]);
      std::sort(e.begin(), e.end());
      raw.edges.push_back(std::move(e));
    }
  }
  return {Hypergraph::validate(raw), std::move(warnings)};
}

}  // namespace hypercover
