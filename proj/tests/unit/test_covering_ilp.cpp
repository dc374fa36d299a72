#include <doctest.h>

#include "hypercover/covering_ilp.hpp"
#include "hypercover/errors.hpp"
#include "hypercover/oracle.hpp"
#include "support.hpp"

using namespace hypercover;
using namespace hypercover::ilp;
using namespace hypercover::testing;

namespace {

CoveringILP program(std::vector<std::vector<Term>> rows, std::vector<Rational> b, std::vector<Rational> w) {
  CoveringILP p;
  p.rows = std::move(rows);
  p.b = std::move(b);
  p.w = std::move(w);
  for (std::size_t j = 0; j < p.w.size(); ++j) p.names.push_back("x" + std::to_string(j + 1));
  return p;
}

ErrorCode code_of(const CoveringILP& p) {
  try {
    normalize(p);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("normalize accepted the program");
  return ErrorCode::BadInput;
}

std::vector<std::vector<VertexId>> edges_of(const HypergraphReduction& r) {
  std::vector<std::vector<VertexId>> out;
  for (EdgeIndex e = 0; e < r.hypergraph.num_edges(); ++e) {
    std::vector<VertexId> ids;
    for (VertexIndex v : r.hypergraph.edge(e)) ids.push_back(r.hypergraph.vertex_id(v));
    out.push_back(ids);
  }
  return out;
}

}  // namespace

TEST_CASE("normalize") {
  const auto p = program({{Term{0, make_rational(1, 2)}, Term{1, Rational(2)}}}, {Rational(1)},
                         {Rational(1), Rational(1)});
  const ProgramStats s = program_stats(normalize(p));
  REQUIRE(s.M.has_value());
  CHECK(*s.M == 2);
  CHECK(s.box == 2);
  CHECK(s.f == 2);
  CHECK(s.delta == 1);

  const auto zero_rhs = program({{Term{0, Rational(1)}}}, {Rational(0)}, {Rational(1)});
  const CoveringILP dropped = normalize(zero_rhs);
  CHECK(dropped.num_rows() == 0);
  CHECK(is_feasible(dropped, std::vector<BigInt>{0}));

  const auto empty_row = program({{Term{0, Rational(0)}, Term{1, Rational(0)}}}, {Rational(1)},
                                 {Rational(1), Rational(1)});
  CHECK(code_of(empty_row) == ErrorCode::Infeasible);
  const auto negative = program({{Term{0, Rational(-1)}}}, {Rational(1)}, {Rational(1)});
  CHECK(code_of(negative) == ErrorCode::NegativeEntry);
  const auto negative_weight = program({{Term{0, Rational(1)}}}, {Rational(1)}, {Rational(-1)});
  CHECK(code_of(negative_weight) == ErrorCode::NegativeEntry);

  const auto repeated = program({{Term{0, Rational(1)}, Term{0, Rational(2)}}}, {Rational(3)}, {Rational(1)});
  const CoveringILP merged = normalize(repeated);
  REQUIRE(merged.rows[0].size() == 1);
  CHECK(merged.rows[0][0].coeff == 3);
}

TEST_CASE("binary expansion") {
  const auto unit = program({{Term{0, Rational(1)}, Term{1, Rational(1)}}}, {Rational(1)}, {Rational(2), Rational(3)});
  const ZeroOneProgram a = ilp_to_zo(normalize(unit));
  CHECK(a.bits == 1);
  CHECK(a.program.num_vars() == 2);
  CHECK(a.program.w == unit.w);

  const auto five = program({{Term{0, make_rational(1, 5)}}}, {Rational(1)}, {Rational(3)});
  const ZeroOneProgram b = ilp_to_zo(normalize(five));
  CHECK(b.bits == 3);
  REQUIRE(b.program.num_vars() == 3);
  for (std::uint32_t l = 0; l < 3; ++l) {
    CHECK(b.origin[l].var == 0);
    CHECK(b.origin[l].bit == l);
    CHECK(b.program.w[l] == 3 * pow2(l));
    CHECK(b.program.rows[0][l].coeff == make_rational(1, 5) * pow2(l));
  }
  CHECK(b.program.names[2] == "x1.2");
}

TEST_CASE("lift") {
  const auto five = program({{Term{0, make_rational(1, 5)}}}, {Rational(1)}, {Rational(3)});
  const CoveringILP p = normalize(five);
  const ZeroOneProgram zo = ilp_to_zo(p);
  const std::vector<std::uint8_t> bits{1, 0, 1};
  CHECK(lift_solution(p, zo, bits) == std::vector<BigInt>{5});
  const std::vector<std::uint8_t> zeros{0, 0, 0};
  CHECK_THROWS_AS(lift_solution(p, zo, zeros), Error);

  const CoveringILP free = normalize(program({{Term{0, Rational(1)}}}, {Rational(0)}, {Rational(1)}));
  const ZeroOneProgram zfree = ilp_to_zo(free);
  CHECK(lift_solution(free, zfree, std::vector<std::uint8_t>(zfree.program.num_vars(), 0)) ==
        std::vector<BigInt>{0});
}

TEST_CASE("hypergraph reduction examples") {
  SUBCASE("x1 + x2 >= 1") {
    const auto p = program({{Term{0, Rational(1)}, Term{1, Rational(1)}}}, {Rational(1)}, {Rational(1), Rational(1)});
    const HypergraphReduction r = zo_to_hypergraph(as_zero_one(normalize(p)));
    CHECK(edges_of(r) == std::vector<std::vector<VertexId>>{{0, 1}});
    CHECK(r.stats.edges_enumerated == 1);
    CHECK_FALSE(r.stats.rank_strict);
  }
  SUBCASE("2 x1 + x2 + x3 >= 2") {
    const auto p = program({{Term{0, Rational(2)}, Term{1, Rational(1)}, Term{2, Rational(1)}}}, {Rational(2)},
                           {Rational(1), Rational(1), Rational(1)});
    const HypergraphReduction r = zo_to_hypergraph(as_zero_one(normalize(p)));
    CHECK(r.stats.edges_enumerated == 3);
    auto edges = edges_of(r);
    std::sort(edges.begin(), edges.end());
    CHECK(edges == std::vector<std::vector<VertexId>>{{0, 1}, {0, 2}});
    CHECK(r.stats.rank_within_bound);
  }
  SUBCASE("weights are scaled to integers") {
    const auto p = program({{Term{0, Rational(1)}, Term{1, Rational(1)}}}, {Rational(1)},
                           {make_rational(1, 2), make_rational(2, 3)});
    const HypergraphReduction r = zo_to_hypergraph(as_zero_one(normalize(p)));
    CHECK(r.weight_scale == 6);
    CHECK(r.hypergraph.weight(0) == 3);
    CHECK(r.hypergraph.weight(1) == 4);
  }
  SUBCASE("guards") {
    const auto infeasible = program({{Term{0, Rational(1)}}}, {Rational(2)}, {Rational(1)});
    CHECK_THROWS_AS(zo_to_hypergraph(as_zero_one(normalize(infeasible))), Error);
    const auto zero = program({{Term{0, Rational(1)}}}, {Rational(1)}, {Rational(0)});
    CHECK_THROWS_AS(zo_to_hypergraph(as_zero_one(normalize(zero))), Error);
    std::vector<Term> wide;
    std::vector<Rational> w;
    for (std::uint32_t j = 0; j < 5; ++j) {
      wide.push_back({j, Rational(1)});
      w.push_back(Rational(1));
    }
    const auto big = program({wide}, {Rational(1)}, w);
    try {
      zo_to_hypergraph(as_zero_one(normalize(big)), 4);
      FAIL("expected RankGuardExceeded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::RankGuardExceeded);
    }
  }
}

TEST_CASE("covers correspond to feasible assignments") {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    const CoveringILP p = normalize(random_zero_one(seed));
    const ZeroOneProgram zo = as_zero_one(p);
    const HypergraphReduction r = zo_to_hypergraph(zo);
    const std::size_t n = p.num_vars();
    REQUIRE(r.hypergraph.num_vertices() == n);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<BigInt> x(n);
      std::vector<VertexIndex> cover;
      for (std::uint32_t j = 0; j < n; ++j) {
        x[j] = (mask >> j) & 1u;
        if (x[j] == 1) cover.push_back(*r.hypergraph.index_of(j));
      }
      CHECK(is_feasible(p, x) == is_cover_indices(r.hypergraph, cover));
    }
    CHECK(r.stats.rank_within_bound);
    CHECK(r.stats.degree_within_bound);
  }
}

TEST_CASE("solve") {
  SUBCASE("x >= 1") {
    const auto p = program({{Term{0, Rational(1)}}}, {Rational(1)}, {Rational(1)});
    const IlpSolution s = solve_ilp(p, Rational(1));
    CHECK(s.x == std::vector<BigInt>{1});
    CHECK(s.value == 1);
  }
  SUBCASE("0.5 x1 + 2 x2 >= 1") {
    const auto p = program({{Term{0, make_rational(1, 2)}, Term{1, Rational(2)}}}, {Rational(1)},
                           {Rational(1), Rational(1)});
    const IlpSolution s = solve_ilp(p, Rational(1));
    CHECK(s.feasible);
    CHECK(s.value >= 1);
    CHECK(s.value <= Rational(s.hyper_rank + 1));
    REQUIRE(s.certificate.has_value());
    CHECK(s.certificate->valid);
  }
  SUBCASE("vertex cover of the triangle") {
    const auto p = program({{Term{0, Rational(1)}, Term{1, Rational(1)}},
                            {Term{1, Rational(1)}, Term{2, Rational(1)}},
                            {Term{0, Rational(1)}, Term{2, Rational(1)}}},
                           {Rational(1), Rational(1), Rational(1)}, {Rational(1), Rational(1), Rational(1)});
    const IlpSolution s = solve_ilp(p, Rational(1));
    CHECK(s.value >= 2);
    CHECK(s.value <= 6);
    // Same cover as the direct run.
    const RunResult direct = run_mwhvc(triangle(), Rational(1));
    std::vector<BigInt> expected(3, 0);
    for (VertexIndex v : direct.cover) expected[v] = 1;
    CHECK(s.x == expected);
  }
  SUBCASE("zero-weight variables are fixed at the box bound") {
    const auto p = program({{Term{0, Rational(1)}, Term{1, Rational(1)}}, {Term{1, Rational(1)}}},
                           {Rational(3), Rational(1)}, {Rational(0), Rational(2)});
    const IlpSolution s = solve_ilp(p, Rational(1));
    CHECK(s.fixed_vars == std::vector<std::uint32_t>{0});
    CHECK(s.x[0] == 3);
    CHECK(s.x[1] == 1);
    CHECK(s.value == 2);
  }
  SUBCASE("infeasible program") {
    const auto p = program({{Term{0, Rational(0)}}}, {Rational(1)}, {Rational(1)});
    CHECK_THROWS_AS(solve_ilp(p, Rational(1)), Error);
  }
  SUBCASE("random programs stay within the ratio") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      const CoveringILP raw = random_ilp(seed);
      const IlpSolution s = solve_ilp(raw, make_rational(1, 2));
      const CoveringILP p = normalize(raw);
      CHECK(is_feasible(p, s.x));
      const Rational opt = oracle::exact_ilp(p, program_stats(p).box).value;
      CHECK(s.value <= (Rational(s.hyper_rank) + make_rational(1, 2)) * opt);
      CHECK(s.zo_rank_within_bound);
      CHECK(s.zo_degree_preserved);
    }
  }
}
