#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hypercover/covering_ilp.hpp"
#include "hypercover/hypergraph.hpp"
#include "hypercover/protocol.hpp"

namespace hypercover::testing {

/// Builds a validated instance from (id, weight) pairs and id lists.
Hypergraph make_instance(const std::vector<std::pair<VertexId, long>>& vertices,
                         const std::vector<std::vector<VertexId>>& edges);

Hypergraph single();             // {1}, w = 1, edge {1}
Hypergraph triangle();           // unit weights, edges 12, 23, 13
Hypergraph star(std::uint32_t k);  // center 1, leaves 2..k+1, unit weights
Hypergraph path2();              // 1 - 2 - 3, unit weights

/// Random instance of the acceptance family: n <= 12, m <= 20,
/// f in {2, 3, 4}, weights <= 8.
Hypergraph suite_instance(std::uint64_t seed);

/// Zero-one program with n <= 8 variables, m <= 4 rows, at most 4 nonzeros
/// per row, feasible at all-ones.
ilp::CoveringILP random_zero_one(std::uint64_t seed);

/// Covering ILP with n <= 3 variables and M <= 7.
ilp::CoveringILP random_ilp(std::uint64_t seed);

/// Serialized trace, used to compare runs byte for byte.
std::string trace_text(const Hypergraph& h, const RunResult& r);

/// Serialized RunResult JSON.
std::string result_text(const Hypergraph& h, const RunResult& r);

}  // namespace hypercover::testing
