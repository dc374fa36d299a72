#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypercover/certify.hpp"
#include "hypercover/hypergraph.hpp"
#include "hypercover/numeric.hpp"
#include "hypercover/protocol.hpp"

namespace hypercover::ilp {

struct Term {
  std::uint32_t var = 0;
  Rational coeff;
};

/// min w.x  s.t.  A x >= b,  x in N^n, all data non-negative.
/// Rows are sparse, sorted by variable.
struct CoveringILP {
  std::vector<std::string> names;  // one per variable
  std::vector<std::vector<Term>> rows;
  std::vector<Rational> b;
  std::vector<Rational> w;

  std::size_t num_vars() const { return w.size(); }
  std::size_t num_rows() const { return rows.size(); }
};

struct ProgramStats {
  std::uint32_t f = 0;      // max nonzeros in a row
  std::uint32_t delta = 0;  // max nonzeros in a column
  std::optional<Rational> M;  // max_j max_i b_i / A_ij over nonzeros; empty without rows
  BigInt box = 1;             // max(1, ceil(M))
};

ProgramStats program_stats(const CoveringILP& p);

/// Drops zero coefficients and rows with b_i = 0, merges repeated terms.
/// Throws Error{NegativeEntry} for negative data and Error{Infeasible}
/// for a row with b_i > 0 and no nonzero coefficient.
CoveringILP normalize(const CoveringILP& raw);

bool is_feasible(const CoveringILP& p, std::span<const BigInt> x);
Rational objective(const CoveringILP& p, std::span<const BigInt> x);

/// Where a zero-one variable came from: x_var = sum_bit 2^bit * x_{var,bit}.
struct BitVar {
  std::uint32_t var = 0;
  std::uint32_t bit = 0;
};

struct ZeroOneProgram {
  CoveringILP program;         // variables restricted to {0,1}
  std::vector<BitVar> origin;  // per zero-one variable
  std::uint32_t bits = 1;      // B
};

/// Treats an already-binary program as its own zero-one program.
ZeroOneProgram as_zero_one(const CoveringILP& p);

/// Binary expansion with B = floor(log2 box) + 1 bits per variable so that
/// 2^B - 1 >= box. Column (j, l) is 2^l * A^(j), weight 2^l * w_j.
ZeroOneProgram ilp_to_zo(const CoveringILP& normalized);

struct EdgeOrigin {
  std::uint32_t row = 0;
  std::vector<std::uint32_t> deficit_set;  // S with A_i . 1_S < b_i
};

struct ReductionStats {
  std::uint32_t zo_f = 0;
  std::uint32_t zo_delta = 0;
  std::uint32_t rank = 0;        // f' of the hypergraph
  std::uint32_t max_degree = 0;  // Delta' of the hypergraph
  std::size_t edges_enumerated = 0;
  std::size_t edges_kept = 0;
  bool rank_within_bound = true;    // f' <= f(A)
  bool degree_within_bound = true;  // Delta' < 2^f(A) * Delta(A)
  bool rank_strict = true;          // f' < f(A); reported, not required
};

struct HypergraphReduction {
  Hypergraph hypergraph;           // vertex i <-> zero-one variable i (id i)
  std::vector<EdgeOrigin> origin;  // per kept edge
  BigInt weight_scale;             // hypergraph weight = scale * zo weight
  ReductionStats stats;
};

/// For every row and every S subset of its support with A_i . 1_S < b_i,
/// emits the hyperedge support \ S; then keeps only inclusion-minimal
/// edges. Throws Error{Infeasible} if some row fails at all-ones,
/// Error{RankGuardExceeded} for a row with more than `rank_guard`
/// nonzeros, Error{NonPositiveWeight} for a zero weight.
HypergraphReduction zo_to_hypergraph(const ZeroOneProgram& zo, std::uint32_t rank_guard = 20);

/// x_j = sum_l 2^l * bits[(j, l)], re-checked against the original
/// program. Throws Error{LiftInfeasible} if the result violates a row.
std::vector<BigInt> lift_solution(const CoveringILP& original, const ZeroOneProgram& zo,
                                  std::span<const std::uint8_t> bits);

/// Same, starting from a cover of the reduced hypergraph.
std::vector<BigInt> lift_cover(const CoveringILP& original, const ZeroOneProgram& zo,
                               std::span<const VertexIndex> cover);

struct IlpSolution {
  std::vector<BigInt> x;  // per original variable
  Rational value;
  bool feasible = false;
  std::vector<std::uint32_t> fixed_vars;  // zero-weight variables set to the box bound
  ProgramStats original_stats;
  CoveringILP reduced;                        // after fixing, positive weights only
  std::vector<std::uint32_t> reduced_origin;  // original variable per reduced variable
  ZeroOneProgram zo;
  ReductionStats reduction;
  BigInt weight_scale;
  std::uint32_t hyper_rank = 0;
  std::uint32_t hyper_max_degree = 0;
  bool zo_rank_within_bound = true;   // f(A') <= f(A) * B
  bool zo_degree_preserved = true;    // Delta(A') == Delta(A)
  std::optional<RunResult> run;       // empty when no hyperedges remain
  std::optional<Hypergraph> hypergraph;
  std::optional<certify::Certificate> certificate;  // over the reduced hypergraph
};

/// normalize -> fix zero-weight variables -> ilp_to_zo -> zo_to_hypergraph
/// -> run_mwhvc -> lift.
IlpSolution solve_ilp(const CoveringILP& raw, const Rational& epsilon,
                      const RunOptions& opts = {});

}  // namespace hypercover::ilp
