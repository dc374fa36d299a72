#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypercover/hypergraph.hpp"
#include "hypercover/numeric.hpp"
#include "hypercover/protocol.hpp"
#include "hypercover/trace.hpp"

namespace hypercover::certify {

struct FeasibilityVerdict {
  bool feasible = true;
  std::vector<VertexIndex> violating_vertices;  // sum of dual over E(v) exceeds w(v)
  std::vector<EdgeIndex> negative_edges;
  Rational dual_total;
  std::optional<Rational> min_slack;  // min_v w(v) - sum; empty when n == 0
};

/// Exact check of the edge-packing constraints and non-negativity.
FeasibilityVerdict check_dual_feasibility(const Hypergraph& h, std::span<const Rational> dual);

/// T_eps = { v : sum_{e in E(v)} dual(e) >= (1 - beta) w(v) }.
std::vector<VertexIndex> tight_set(const Hypergraph& h, std::span<const Rational> dual,
                                   const Rational& beta);

/// w(C) / sum(dual). Weak duality makes this an upper bound on w(C)/opt.
/// Throws Error{ZeroDual} if the dual total is zero and C is non-empty;
/// an empty cover with zero dual has ratio 0.
Rational certificate_ratio(const Hypergraph& h, std::span<const VertexIndex> cover,
                           std::span<const Rational> dual);

struct Certificate {
  std::vector<VertexIndex> cover;
  std::vector<Rational> dual;
  BigInt cover_weight;
  Rational dual_total;
  std::optional<Rational> ratio;
  Rational ratio_bound;  // f + eps
  std::vector<VertexIndex> tight;
  bool is_cover = false;
  bool cover_within_tight = false;
  FeasibilityVerdict feasibility;
  bool valid = false;  // cover, feasible, ratio <= f + eps
};

Certificate make_certificate(const Hypergraph& h, std::span<const VertexIndex> cover,
                             std::span<const Rational> dual, std::uint32_t f,
                             const Rational& epsilon);

// ---------------------------------------------------------------------------
// Trace audit

enum class Verdict : std::uint8_t { Valid, Flagged, Failed };
std::string_view to_string(Verdict v);

struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::Valid;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::optional<Rational> min_slack;  // smallest margin seen; negative on failure
  std::vector<std::string> details;   // first few violations / notes

  bool ok() const { return verdict != Verdict::Failed; }
};

struct AuditReport {
  std::vector<CheckResult> checks;
  std::map<std::uint32_t, std::uint32_t> raise_histogram;  // raises -> #edges
  std::map<std::uint32_t, std::uint32_t> stuck_histogram;  // stuck count -> #(v, level)
  std::uint32_t max_level_delta = 0;
  std::uint32_t max_message_bits = 0;
  std::size_t snapshots_checked = 0;

  bool passed() const;
  const CheckResult* find(std::string_view name) const;
  std::vector<std::string> failed_checks() const;
};

/// Re-verifies every invariant and counting bound from the raw trace:
/// per-edge values in the snapshots and the message log. Nothing the
/// protocol cached is trusted; its counters are only compared against.
AuditReport audit_trace(const Hypergraph& h, const ProtocolParams& params, const RunTrace& trace);

/// audit_trace plus the final certificate of the run.
AuditReport audit_run(const Hypergraph& h, const RunResult& result);

/// Adds weak-duality and approximation checks against an exact optimum.
/// In f-approximation mode also checks w(C) <= f * opt.
void attach_oracle(AuditReport& report, const Hypergraph& h, const RunResult& result,
                   const BigInt& opt, bool f_approx_mode);

}  // namespace hypercover::certify
