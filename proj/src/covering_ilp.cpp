#include "hypercover/covering_ilp.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "hypercover/errors.hpp"

namespace hypercover::ilp {

ProgramStats program_stats(const CoveringILP& p) {
  ProgramStats s;
  std::vector<std::uint32_t> column(p.num_vars(), 0);
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    std::uint32_t nnz = 0;
    for (const Term& t : p.rows[i]) {
      if (t.coeff == 0) continue;
      ++nnz;
      ++column.at(t.var);
      Rational ratio = p.b[i] / t.coeff;
      ratio.canonicalize();
      if (!s.M || ratio > *s.M) s.M = ratio;
    }
    s.f = std::max(s.f, nnz);
  }
  for (auto c : column) s.delta = std::max(s.delta, c);
  s.box = s.M ? std::max(BigInt(1), hypercover::ceil(*s.M)) : BigInt(1);
  return s;
}

CoveringILP normalize(const CoveringILP& raw) {
  const std::size_t n = raw.w.size();
  if (raw.b.size() != raw.rows.size()) throw Error(ErrorCode::BadInput, "one right-hand side per row required");
  if (!raw.names.empty() && raw.names.size() != n) throw Error(ErrorCode::BadInput, "one name per variable required");

  CoveringILP out;
  out.w = raw.w;
  out.names = raw.names;
  if (out.names.empty()) {
    for (std::size_t j = 0; j < n; ++j) out.names.push_back("x" + std::to_string(j));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (raw.w[j] < 0) throw Error(ErrorCode::NegativeEntry, "weight of " + out.names[j] + " is negative");
  }
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    if (raw.b[i] < 0) throw Error(ErrorCode::NegativeEntry, "row " + std::to_string(i) + " has a negative bound");
    std::map<std::uint32_t, Rational> merged;
    for (const Term& t : raw.rows[i]) {
      if (t.var >= n) throw Error(ErrorCode::BadInput, "row " + std::to_string(i) + " names an unknown variable");
      if (t.coeff < 0) throw Error(ErrorCode::NegativeEntry, "row " + std::to_string(i) + " has a negative coefficient");
      merged[t.var] += t.coeff;
    }
    std::vector<Term> row;
    for (auto& [var, coeff] : merged) {
      if (coeff != 0) row.push_back(Term{var, coeff});
    }
    if (raw.b[i] == 0) continue;
    if (row.empty()) throw Error(ErrorCode::Infeasible, "row " + std::to_string(i) + " has no nonzero coefficient");
    out.rows.push_back(std::move(row));
    out.b.push_back(raw.b[i]);
  }
  return out;
}

bool is_feasible(const CoveringILP& p, std::span<const BigInt> x) {
  if (x.size() != p.num_vars()) return false;
  if (std::any_of(x.begin(), x.end(), [](const BigInt& v) { return v < 0; })) return false;
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    Rational lhs = 0;
    for (const Term& t : p.rows[i]) lhs += t.coeff * x[t.var];
    if (lhs < p.b[i]) return false;
  }
  return true;
}

Rational objective(const CoveringILP& p, std::span<const BigInt> x) {
  Rational value = 0;
  for (std::size_t j = 0; j < p.num_vars() && j < x.size(); ++j) value += p.w[j] * x[j];
  return value;
}

ZeroOneProgram as_zero_one(const CoveringILP& p) {
  ZeroOneProgram zo;
  zo.program = p;
  zo.bits = 1;
  for (std::uint32_t j = 0; j < p.num_vars(); ++j) zo.origin.push_back(BitVar{j, 0});
  return zo;
}

ZeroOneProgram ilp_to_zo(const CoveringILP& normalized) {
  const ProgramStats stats = program_stats(normalized);
  const std::uint32_t bits = bit_length(stats.box);
  ZeroOneProgram zo;
  zo.bits = bits;
  CoveringILP& p = zo.program;
  for (std::uint32_t j = 0; j < normalized.num_vars(); ++j) {
    const std::string& name = j < normalized.names.size() ? normalized.names[j] : "x" + std::to_string(j);
    for (std::uint32_t l = 0; l < bits; ++l) {
      p.names.push_back(name + "." + std::to_string(l));
      p.w.push_back(normalized.w[j] * pow2(l));
      zo.origin.push_back(BitVar{j, l});
    }
  }
  for (std::size_t i = 0; i < normalized.rows.size(); ++i) {
    std::vector<Term> row;
    for (const Term& t : normalized.rows[i]) {
      for (std::uint32_t l = 0; l < bits; ++l) row.push_back(Term{t.var * bits + l, t.coeff * pow2(l)});
    }
    p.rows.push_back(std::move(row));
    p.b.push_back(normalized.b[i]);
  }
  return zo;
}

HypergraphReduction zo_to_hypergraph(const ZeroOneProgram& zo, std::uint32_t rank_guard) {
  const CoveringILP& p = zo.program;
  const std::size_t n = p.num_vars();

  BigInt scale = 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (p.w[j] <= 0) {
      throw Error(ErrorCode::NonPositiveWeight, "zero-one variable " + std::to_string(j) + " has weight " +
                                                    to_fraction_string(p.w[j]));
    }
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), p.w[j].get_den_mpz_t());
  }

  struct Candidate {
    std::vector<std::uint32_t> members;
    EdgeOrigin origin;
  };
  std::vector<Candidate> candidates;
  std::map<std::vector<std::uint32_t>, std::size_t> first_seen;
  for (std::uint32_t i = 0; i < p.rows.size(); ++i) {
    std::vector<const Term*> support;
    for (const Term& t : p.rows[i]) {
      if (t.coeff != 0) support.push_back(&t);
    }
    if (support.size() > rank_guard) {
      throw Error(ErrorCode::RankGuardExceeded, "row " + std::to_string(i) + " has " + std::to_string(support.size()) +
                                                    " nonzeros, guard is " + std::to_string(rank_guard));
    }
    Rational full = 0;
    for (const Term* t : support) full += t->coeff;
    if (full < p.b[i]) throw Error(ErrorCode::Infeasible, "row " + std::to_string(i) + " fails with every variable set");

    const std::uint64_t subsets = std::uint64_t{1} << support.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      Rational lhs = 0;
      for (std::size_t k = 0; k < support.size(); ++k) {
        if (mask >> k & 1) lhs += support[k]->coeff;
      }
      if (lhs >= p.b[i]) continue;
      Candidate c;
      c.origin.row = i;
      for (std::size_t k = 0; k < support.size(); ++k) {
        if (mask >> k & 1) {
          c.origin.deficit_set.push_back(support[k]->var);
        } else {
          c.members.push_back(support[k]->var);
        }
      }
      std::sort(c.members.begin(), c.members.end());
      if (first_seen.emplace(c.members, candidates.size()).second) candidates.push_back(std::move(c));
    }
  }

  HypergraphReduction out{Hypergraph::validate({}), {}, scale, {}};
  out.stats.edges_enumerated = candidates.size();
  std::vector<std::size_t> by_size(candidates.size());
  for (std::size_t k = 0; k < by_size.size(); ++k) by_size[k] = k;
  std::stable_sort(by_size.begin(), by_size.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].members.size() < candidates[b].members.size();
  });
  std::vector<bool> keep(candidates.size(), true);
  for (std::size_t a = 0; a < by_size.size(); ++a) {
    const auto& small = candidates[by_size[a]].members;
    if (!keep[by_size[a]]) continue;
    for (std::size_t b = a + 1; b < by_size.size(); ++b) {
      auto& big = candidates[by_size[b]];
      if (!keep[by_size[b]] || big.members.size() == small.size()) continue;
      if (std::includes(big.members.begin(), big.members.end(), small.begin(), small.end())) keep[by_size[b]] = false;
    }
  }

  RawInstance raw;
  for (std::size_t j = 0; j < n; ++j) {
    const Rational scaled = p.w[j] * scale;
    raw.vertices.push_back({static_cast<VertexId>(j), scaled.get_num()});
  }
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (!keep[k]) continue;
    raw.edges.emplace_back(candidates[k].members.begin(), candidates[k].members.end());
    out.origin.push_back(std::move(candidates[k].origin));
  }
  out.hypergraph = Hypergraph::validate(raw);

  const ProgramStats zs = program_stats(p);
  ReductionStats& st = out.stats;
  st.zo_f = zs.f;
  st.zo_delta = zs.delta;
  st.rank = out.hypergraph.rank();
  st.max_degree = out.hypergraph.max_degree();
  st.edges_kept = out.hypergraph.num_edges();
  st.rank_within_bound = st.rank <= st.zo_f;
  st.rank_strict = st.rank < st.zo_f;
  st.degree_within_bound =
      st.edges_kept == 0 || BigInt(st.max_degree) < (BigInt(1) << st.zo_f) * BigInt(st.zo_delta);
  return out;
}

std::vector<BigInt> lift_solution(const CoveringILP& original, const ZeroOneProgram& zo,
                                  std::span<const std::uint8_t> bits) {
  if (bits.size() != zo.origin.size()) throw Error(ErrorCode::BadInput, "one bit per zero-one variable required");
  std::vector<BigInt> x(original.num_vars(), 0);
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (!bits[k]) continue;
    const BitVar& o = zo.origin[k];
    if (o.var >= x.size()) throw Error(ErrorCode::BadInput, "bit variable maps outside the program");
    x[o.var] += BigInt(1) << o.bit;
  }
  if (!is_feasible(original, x)) throw Error(ErrorCode::LiftInfeasible, "lifted solution violates a constraint");
  return x;
}

std::vector<BigInt> lift_cover(const CoveringILP& original, const ZeroOneProgram& zo,
                               std::span<const VertexIndex> cover) {
  std::vector<std::uint8_t> bits(zo.origin.size(), 0);
  for (VertexIndex v : cover) bits.at(v) = 1;
  return lift_solution(original, zo, bits);
}

IlpSolution solve_ilp(const CoveringILP& raw, const Rational& epsilon, const RunOptions& opts) {
  IlpSolution s;
  const CoveringILP normalized = normalize(raw);
  s.original_stats = program_stats(normalized);
  const std::size_t n = normalized.num_vars();

  // Zero-weight variables cost nothing at the box bound, which satisfies
  // every row they appear in.
  std::vector<BigInt> fixed(n, 0);
  std::vector<bool> is_fixed(n, false);
  for (std::uint32_t j = 0; j < n; ++j) {
    if (normalized.w[j] == 0) {
      is_fixed[j] = true;
      fixed[j] = s.original_stats.box;
      s.fixed_vars.push_back(j);
    }
  }
  std::vector<std::int64_t> position(n, -1);
  for (std::uint32_t j = 0; j < n; ++j) {
    if (is_fixed[j]) continue;
    position[j] = static_cast<std::int64_t>(s.reduced_origin.size());
    s.reduced_origin.push_back(j);
    s.reduced.names.push_back(normalized.names[j]);
    s.reduced.w.push_back(normalized.w[j]);
  }
  for (std::size_t i = 0; i < normalized.rows.size(); ++i) {
    const auto& row = normalized.rows[i];
    if (std::any_of(row.begin(), row.end(), [&](const Term& t) { return is_fixed[t.var]; })) continue;
    std::vector<Term> mapped;
    for (const Term& t : row) mapped.push_back(Term{static_cast<std::uint32_t>(position[t.var]), t.coeff});
    s.reduced.rows.push_back(std::move(mapped));
    s.reduced.b.push_back(normalized.b[i]);
  }

  s.zo = ilp_to_zo(s.reduced);
  const ProgramStats reduced_stats = program_stats(s.reduced);
  const ProgramStats zo_stats = program_stats(s.zo.program);
  s.zo_rank_within_bound = zo_stats.f <= reduced_stats.f * s.zo.bits;
  s.zo_degree_preserved = zo_stats.delta == reduced_stats.delta;

  std::vector<BigInt> reduced_x(s.reduced.num_vars(), 0);
  if (!s.reduced.rows.empty()) {
    HypergraphReduction red = zo_to_hypergraph(s.zo);
    s.reduction = red.stats;
    s.weight_scale = red.weight_scale;
    s.hyper_rank = red.hypergraph.rank();
    s.hyper_max_degree = red.hypergraph.max_degree();
    RunResult run = run_mwhvc(red.hypergraph, epsilon, opts);
    reduced_x = lift_cover(s.reduced, s.zo, run.cover);
    s.certificate = certify::make_certificate(red.hypergraph, run.cover, run.dual, run.params.f, epsilon);
    s.run = std::move(run);
    s.hypergraph = std::move(red.hypergraph);
  } else {
    s.weight_scale = 1;
  }

  s.x = fixed;
  for (std::size_t k = 0; k < reduced_x.size(); ++k) s.x[s.reduced_origin[k]] = reduced_x[k];
  if (!is_feasible(normalized, s.x)) throw Error(ErrorCode::LiftInfeasible, "solution violates the original program");
  s.feasible = true;
  s.value = objective(normalized, s.x);
  return s;
}

}  // namespace hypercover::ilp
