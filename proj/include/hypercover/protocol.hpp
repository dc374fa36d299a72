#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hypercover/congest.hpp"
#include "hypercover/hypergraph.hpp"
#include "hypercover/numeric.hpp"
#include "hypercover/trace.hpp"

namespace hypercover {

enum class Variant : std::uint8_t {
  FullDeal,  // A: delta(e) += deal(e)
  HalfDeal,  // B: delta(e) += deal(e) / 2, at most one level-up per iteration
};

enum class AlphaMode : std::uint8_t { Global, PerEdge };

/// Which arm of the multiplier case split produced alpha.
enum class AlphaBranch : std::uint8_t {
  Scaled,     // formula value >= (log Delta)^(gamma/2) and > 2
  Clamped,    // formula value >= (log Delta)^(gamma/2) but <= 2, so max(2, .) = 2
  Otherwise,  // formula value below the threshold, alpha = 2
};

std::string_view to_string(Variant v);
std::string_view to_string(AlphaMode m);
std::string_view to_string(AlphaBranch b);
Variant variant_from_string(std::string_view s);
AlphaMode alpha_mode_from_string(std::string_view s);

struct AlphaChoice {
  Rational alpha;  // dyadic, >= 2
  AlphaBranch branch = AlphaBranch::Otherwise;
  double formula_value = 0.0;
};

/// The multiplier for rank f and maximum degree `delta` (clamped to >= 3).
/// The formula is evaluated in double precision and floored to a multiple
/// of 1/256; log2(f/eps) is clamped below at 1 so f = eps = 1 stays finite.
AlphaChoice choose_alpha(std::uint32_t f, const BigInt& delta, const Rational& epsilon,
                         const Rational& gamma);

struct ProtocolParams {
  Rational epsilon;
  std::uint32_t f = 1;
  Rational beta;   // eps / (f + eps)
  std::uint32_t z = 1;  // ceil(log2(1 / beta))
  Rational alpha;  // global multiplier (per-edge mode: alpha of the max-degree edge)
  Rational gamma;
  BigInt delta;    // maximum degree the global alpha was computed for
  AlphaMode alpha_mode = AlphaMode::Global;
  Variant variant = Variant::FullDeal;
  AlphaBranch alpha_branch = AlphaBranch::Otherwise;
  double alpha_formula = 0.0;

  /// 1 for variant A, 2 for variant B: a stuck iteration moves at least
  /// 1/(factor * alpha) of a level's slack.
  unsigned stuck_factor() const { return variant == Variant::HalfDeal ? 2 : 1; }
  /// Multiplier for an edge whose local maximum degree is `local_delta`.
  Rational edge_alpha(std::uint64_t local_delta) const;
};

/// Throws Error{BadEpsilon} unless 0 < eps <= 1.
ProtocolParams compute_params(std::uint32_t f, const BigInt& delta, const Rational& epsilon,
                              const Rational& gamma = Rational(1, 1000),
                              Variant variant = Variant::FullDeal,
                              AlphaMode alpha_mode = AlphaMode::Global);

/// deal_0(e) = 1/2 * min_{v in e} w(v) / |E(v)|.
Rational initial_deal(std::span<const BigInt> weights, std::span<const std::uint64_t> degrees);

// ---------------------------------------------------------------------------
// Node state machines

/// Deliberate protocol bugs used to show the auditor catches them.
enum class Fault : std::uint8_t {
  None,
  WrongHalving,          // edges report halvings but leave the deal untouched
  SkippedTightness,      // vertices never join the cover
  OffByOneLevel,         // level loop compares against 0.5^l instead of 0.5^(l+1)
  DeltaOvershoot,        // dual grows by twice the deal
  NonAdjacentSend,       // target vertex also messages an edge it is not in
  PrematureTermination,  // target vertex quits in iteration 1 without covering
};

std::string_view to_string(Fault f);
Fault fault_from_string(std::string_view s);

struct IncidentEdge {
  std::uint32_t edge = 0;
  Rational deal;
  Rational dual;
  Rational alpha;
  bool uncovered = true;
};

struct VertexState {
  BigInt weight;
  std::uint32_t level = 0;
  std::vector<IncidentEdge> incident;  // E(v), sorted by edge index
  Rational dual_sum;                   // sum of dual over E(v)
  Rational alpha_max;                  // max alpha(e) over E(v)
  bool in_cover = false;
  bool terminated = false;
  std::uint32_t last_level_delta = 0;
  std::vector<std::uint32_t> stuck_per_level;

  std::uint32_t degree() const { return static_cast<std::uint32_t>(incident.size()); }
  std::size_t uncovered_count() const;
  IncidentEdge* slot(std::uint32_t edge);
};

struct EdgeState {
  std::vector<std::uint32_t> members;  // sorted vertex indices
  Rational deal;
  Rational dual;
  Rational alpha;
  std::uint64_t local_max_degree = 0;
  bool covered = false;
  bool terminated = false;
  std::uint32_t covered_iteration = 0;
  std::uint32_t halvings = 0;
  std::uint32_t raises = 0;
};

struct StepContext {
  const ProtocolParams& params;
  Phase phase;
  std::uint32_t iteration;
  Fault fault = Fault::None;
  std::uint32_t fault_target = 0;
  std::uint32_t num_edges = 0;  // only used to aim the NonAdjacentSend fault
  bool self_check = true;
};

VertexState make_vertex_state(const Hypergraph& h, VertexIndex v);
EdgeState make_edge_state(const Hypergraph& h, EdgeIndex e);

/// One round of a vertex node. Throws Error{InvariantViolation} when
/// self-checks are on and the level reaches z or the dual sum exceeds w(v).
std::vector<congest::Outgoing> vertex_step(VertexIndex v, VertexState& s,
                                           std::span<const congest::Incoming> inbox,
                                           const StepContext& ctx);

/// One round of a hyperedge node. Throws Error{InvariantViolation} when a
/// covered edge receives traffic (self-checks on).
std::vector<congest::Outgoing> edge_step(EdgeIndex e, EdgeState& s,
                                         std::span<const congest::Incoming> inbox,
                                         const StepContext& ctx);

// ---------------------------------------------------------------------------
// Whole runs

struct RunOptions {
  Variant variant = Variant::FullDeal;
  AlphaMode alpha_mode = AlphaMode::Global;
  Rational gamma = Rational(1, 1000);
  std::optional<Rational> alpha_override;  // any alpha >= 2 (global mode)
  double cap_multiplier = 4.0;
  std::optional<std::uint32_t> iteration_cap;
  std::uint32_t snapshot_every = 1;  // 0 disables intermediate snapshots
  std::uint64_t shuffle_seed = 0;    // non-zero permutes evaluation order
  Fault fault = Fault::None;
  std::uint32_t fault_target = 0;
  bool self_check = true;
  congest::ViolationPolicy locality = congest::ViolationPolicy::Throw;
};

struct RunResult {
  ProtocolParams params;
  std::vector<VertexIndex> cover;  // increasing
  std::vector<Rational> dual;      // final delta(e), per edge
  std::vector<std::uint32_t> levels;
  RunTrace trace;

  BigInt cover_weight(const Hypergraph& h) const { return h.total_weight(cover); }
  Rational dual_total() const;
  std::uint32_t iterations() const { return trace.termination_iteration; }
};

ProtocolParams params_for(const Hypergraph& h, const Rational& epsilon, const RunOptions& opts);

/// Exact iteration bound used for the default iteration cap:
/// max_e ceil(log_alpha(e)(Delta_e * 2^(f z))) + f * z * ceil(factor * alpha_max).
std::uint64_t iteration_bound(const Hypergraph& h, const ProtocolParams& params);

/// Default cap: ceil(multiplier * iteration_bound) + 1.
std::uint32_t default_iteration_cap(const Hypergraph& h, const ProtocolParams& params,
                                    double multiplier);

/// Runs to termination or to the cap; a capped run is reported through
/// trace.capped rather than an exception.
RunResult simulate(const Hypergraph& h, const ProtocolParams& params, const RunOptions& opts = {});

/// Throws Error{CapExceeded} when the run does not terminate within the cap.
RunResult run_mwhvc(const Hypergraph& h, const Rational& epsilon, const RunOptions& opts = {});

/// eps = 1 / (n * max_v w(v)); with integer weights the cover is within f of optimal.
Rational f_approx_epsilon(const Hypergraph& h);
RunResult f_approx(const Hypergraph& h, const RunOptions& opts = {});

}  // namespace hypercover
