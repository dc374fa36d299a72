#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "hypercover/congest.hpp"
#include "hypercover/numeric.hpp"

namespace hypercover {

/// What a round does. Two setup rounds precede the iterations; every
/// iteration i >= 1 is the fixed pipeline Tighten, Halve, Decide, Apply.
enum class Phase : std::uint8_t {
  InitReport,  // v -> e: weight and degree
  InitDeal,    // e -> v: initial deal (and Delta(e) in per-edge mode)
  Tighten,     // v -> e: Covered, or LevelDelta after the level loop
  Halve,       // e -> v: Covered notices, halving counts
  Decide,      // v -> e: Raise / Stuck
  Apply,       // e -> v: multiplied bit; delta(e) grows by the deal
};

std::string_view to_string(Phase phase);
Phase phase_from_string(std::string_view name);

/// Mid: after Decide (levels and E'(v) final for the iteration, deals
/// halved, duals still from the previous iteration). End: after Apply.
enum class SnapshotStage : std::uint8_t { Mid, End };

struct VertexSnapshot {
  std::uint32_t level = 0;
  bool in_cover = false;
  bool terminated = false;
  Rational dual_sum;  // the vertex's own running sum
  std::vector<std::uint32_t> uncovered;  // E'(v) as the vertex sees it
};

struct EdgeSnapshot {
  Rational deal;
  Rational dual;
  bool covered = false;
  bool terminated = false;
};

struct Snapshot {
  SnapshotStage stage = SnapshotStage::End;
  std::vector<VertexSnapshot> vertices;
  std::vector<EdgeSnapshot> edges;
};

struct RoundRecord {
  std::uint32_t round = 0;
  std::uint32_t iteration = 0;
  Phase phase = Phase::InitReport;
  std::vector<congest::LoggedMessage> messages;
  std::optional<Snapshot> snapshot;
};

/// Everything a run leaves behind for the auditor. The counters below are
/// the protocol's own bookkeeping; the auditor recomputes them from the
/// message log and compares.
struct RunTrace {
  std::vector<RoundRecord> rounds;
  std::uint32_t iteration_cap = 0;
  std::uint32_t termination_iteration = 0;
  bool capped = false;
  bool all_terminated = false;
  /// First iteration at whose end C covered every edge (omniscient view).
  std::optional<std::uint32_t> cover_complete_iteration;
  /// Iteration at whose end every node had terminated locally.
  std::optional<std::uint32_t> local_termination_iteration;
  std::uint32_t max_message_bits = 0;
  std::size_t message_count = 0;
  std::size_t locality_violations = 0;

  std::vector<std::uint32_t> raise_count;         // per edge
  std::vector<std::uint32_t> covered_iteration;   // per edge, 0 = never
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> stuck_count;  // (v, level)

  std::size_t rounds_executed() const { return rounds.size(); }
};

}  // namespace hypercover
