#include "support.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "hypercover/io.hpp"

namespace hypercover::testing {

Hypergraph make_instance(const std::vector<std::pair<VertexId, long>>& vertices,
                         const std::vector<std::vector<VertexId>>& edges) {
  RawInstance raw;
  for (const auto& [id, w] : vertices) raw.vertices.push_back({id, BigInt(w)});
  raw.edges = edges;
  return Hypergraph::validate(raw);
}

Hypergraph single() { return make_instance({{1, 1}}, {{1}}); }

Hypergraph triangle() { return make_instance({{1, 1}, {2, 1}, {3, 1}}, {{1, 2}, {2, 3}, {1, 3}}); }

Hypergraph star(std::uint32_t k) {
  std::vector<std::pair<VertexId, long>> vertices{{1, 1}};
  std::vector<std::vector<VertexId>> edges;
  for (std::uint32_t i = 0; i < k; ++i) {
    vertices.push_back({static_cast<VertexId>(i + 2), 1});
    edges.push_back({1, static_cast<VertexId>(i + 2)});
  }
  return make_instance(vertices, edges);
}

Hypergraph path2() { return make_instance({{1, 1}, {2, 1}, {3, 1}}, {{1, 2}, {2, 3}}); }

Hypergraph suite_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 17);
  const std::int64_t n = std::uniform_int_distribution<std::int64_t>(2, 12)(rng);
  const std::int64_t m = std::uniform_int_distribution<std::int64_t>(1, 20)(rng);
  const std::int64_t f = std::uniform_int_distribution<std::int64_t>(2, 4)(rng);
  const std::int64_t wmax = std::uniform_int_distribution<std::int64_t>(1, 8)(rng);
  return generate_random(n, m, f, wmax, seed).hypergraph;
}

namespace {

Rational small_coefficient(std::mt19937_64& rng) {
  static const long num[] = {1, 1, 1, 2, 3, 1, 3};
  static const long den[] = {1, 2, 4, 1, 1, 3, 2};
  const auto k = std::uniform_int_distribution<int>(0, 6)(rng);
  return make_rational(num[k], den[k]);
}

}  // namespace

ilp::CoveringILP random_zero_one(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x2545f4914f6cdd1dULL + 3);
  ilp::CoveringILP p;
  const auto n = std::uniform_int_distribution<std::uint32_t>(1, 8)(rng);
  const auto m = std::uniform_int_distribution<std::uint32_t>(1, 4)(rng);
  for (std::uint32_t j = 0; j < n; ++j) {
    p.names.push_back("x" + std::to_string(j + 1));
    p.w.push_back(Rational(std::uniform_int_distribution<long>(1, 6)(rng)));
  }
  std::vector<std::uint32_t> vars(n);
  for (std::uint32_t j = 0; j < n; ++j) vars[j] = j;
  for (std::uint32_t i = 0; i < m; ++i) {
    const auto size = std::uniform_int_distribution<std::uint32_t>(1, std::min<std::uint32_t>(4, n))(rng);
    std::shuffle(vars.begin(), vars.end(), rng);
    std::vector<std::uint32_t> support(vars.begin(), vars.begin() + size);
    std::sort(support.begin(), support.end());
    std::vector<ilp::Term> row;
    Rational total = 0;
    for (auto j : support) {
      row.push_back({j, small_coefficient(rng)});
      total += row.back().coeff;
    }
    // b ranges over (0, total] in steps of total / 4.
    const auto k = std::uniform_int_distribution<long>(1, 4)(rng);
    Rational b = total * make_rational(k, 4);
    p.rows.push_back(std::move(row));
    p.b.push_back(b);
  }
  return p;
}

ilp::CoveringILP random_ilp(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0xbf58476d1ce4e5b9ULL + 11);
  while (true) {
    ilp::CoveringILP p;
    const auto n = std::uniform_int_distribution<std::uint32_t>(1, 3)(rng);
    const auto m = std::uniform_int_distribution<std::uint32_t>(1, 3)(rng);
    for (std::uint32_t j = 0; j < n; ++j) {
      p.names.push_back("x" + std::to_string(j + 1));
      const bool zero = std::uniform_int_distribution<int>(0, 9)(rng) == 0;
      p.w.push_back(zero ? Rational(0) : small_coefficient(rng) * 2);
    }
    for (std::uint32_t i = 0; i < m; ++i) {
      std::vector<ilp::Term> row;
      for (std::uint32_t j = 0; j < n; ++j) {
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0 && !(j + 1 == n && row.empty())) continue;
        row.push_back({j, small_coefficient(rng)});
      }
      p.rows.push_back(std::move(row));
      p.b.push_back(Rational(std::uniform_int_distribution<long>(1, 4)(rng)));
    }
    const ilp::ProgramStats stats = ilp::program_stats(ilp::normalize(p));
    if (stats.M && *stats.M <= 7) return p;
  }
}

std::string trace_text(const Hypergraph& h, const RunResult& r) {
  std::ostringstream out;
  io::write_trace(out, h, r.params, r.trace);
  return out.str();
}

std::string result_text(const Hypergraph& h, const RunResult& r) { return io::run_result_to_json(h, r).dump(); }

}  // namespace hypercover::testing
