#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "hypercover/covering_ilp.hpp"
#include "hypercover/hypergraph.hpp"
#include "hypercover/numeric.hpp"

namespace hypercover::oracle {

struct ExactSolution {
  bool feasible = true;
  Rational value;
  /// Vertex indices (exact_mwhvc) or the assignment vector (exact_zo,
  /// exact_ilp).
  std::vector<std::uint32_t> cover;
  std::vector<BigInt> assignment;
  std::uint64_t search_nodes = 0;
  std::chrono::microseconds elapsed{0};
};

/// Minimum-weight cover by branch and bound. Throws Error{TooLarge} when
/// n > vertex_limit.
ExactSolution exact_mwhvc(const Hypergraph& h, std::size_t vertex_limit = 24);

/// Optimum over {0,1}^n. An infeasible program yields feasible == false.
/// Throws Error{TooLarge} when n > var_limit.
ExactSolution exact_zo(const ilp::ZeroOneProgram& zo, std::size_t var_limit = 20);

/// Optimum over the box {0..box}^n. Throws Error{TooLarge} when
/// n > var_limit or (box+1)^n > value_limit, Error{Infeasible} when no box
/// point is feasible.
ExactSolution exact_ilp(const ilp::CoveringILP& program, const BigInt& box,
                        std::size_t var_limit = 8, std::uint64_t value_limit = 1u << 22);

}  // namespace hypercover::oracle
