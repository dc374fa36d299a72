#include "hypercover/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <spdlog/spdlog.h>

#include "hypercover/errors.hpp"

namespace hypercover {

using congest::Incoming;
using congest::Message;
using congest::MessageKind;
using congest::Outgoing;

std::string_view to_string(Fault f) {
  switch (f) {
    case Fault::None: return "none";
    case Fault::WrongHalving: return "wrong-halving";
    case Fault::SkippedTightness: return "skipped-tightness";
    case Fault::OffByOneLevel: return "off-by-one-level";
    case Fault::DeltaOvershoot: return "delta-overshoot";
    case Fault::NonAdjacentSend: return "non-adjacent-send";
    case Fault::PrematureTermination: return "premature-termination";
  }
  return "none";
}

Fault fault_from_string(std::string_view s) {
  for (auto f : {Fault::None, Fault::WrongHalving, Fault::SkippedTightness, Fault::OffByOneLevel,
                 Fault::DeltaOvershoot, Fault::NonAdjacentSend, Fault::PrematureTermination}) {
    if (to_string(f) == s) return f;
  }
  throw Error(ErrorCode::BadInput, "unknown fault '" + std::string(s) + "'");
}

std::size_t VertexState::uncovered_count() const {
  return static_cast<std::size_t>(
      std::count_if(incident.begin(), incident.end(), [](const IncidentEdge& e) { return e.uncovered; }));
}

IncidentEdge* VertexState::slot(std::uint32_t edge) {
  auto it = std::lower_bound(incident.begin(), incident.end(), edge,
                             [](const IncidentEdge& s, std::uint32_t e) { return s.edge < e; });
  return it != incident.end() && it->edge == edge ? &*it : nullptr;
}

VertexState make_vertex_state(const Hypergraph& h, VertexIndex v) {
  VertexState s;
  s.weight = h.weight(v);
  for (EdgeIndex e : h.incident(v)) s.incident.push_back(IncidentEdge{e, 0, 0, 0, true});
  s.terminated = s.incident.empty();
  return s;
}

EdgeState make_edge_state(const Hypergraph& h, EdgeIndex e) {
  EdgeState s;
  const auto members = h.edge(e);
  s.members.assign(members.begin(), members.end());
  return s;
}

namespace {

std::uint64_t to_u64(const BigInt& x) {
  if (x < 0 || mpz_sizeinbase(x.get_mpz_t(), 2) > 64) {
    throw Error(ErrorCode::InvariantViolation, "message payload out of range");
  }
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, x.get_mpz_t());
  return out;
}

Rational half_power(std::uint64_t k) { return pow2(-static_cast<long>(k)); }

void recompute_dual_sum(VertexState& s) {
  s.dual_sum = 0;
  for (const auto& slot : s.incident) s.dual_sum += slot.dual;
}

IncidentEdge& require_slot(VertexState& s, std::uint32_t edge) {
  IncidentEdge* slot = s.slot(edge);
  if (slot == nullptr) throw Error(ErrorCode::InvariantViolation, "message from a non-incident edge");
  return *slot;
}

void send_to_uncovered(const VertexState& s, const Message& msg, std::vector<Outgoing>& out) {
  for (const auto& slot : s.incident) {
    if (slot.uncovered) out.push_back({congest::edge_node(slot.edge), msg});
  }
}

void send_to_members(const EdgeState& s, const Message& msg, std::vector<Outgoing>& out) {
  for (std::uint32_t v : s.members) out.push_back({congest::vertex_node(v), msg});
}

// Tighten: deliveries from the previous Apply (or the setup), then steps a and d.
std::vector<Outgoing> vertex_tighten(VertexIndex v, VertexState& s, std::span<const Incoming> inbox,
                                     const StepContext& ctx) {
  const ProtocolParams& p = ctx.params;
  for (const auto& in : inbox) {
    IncidentEdge& slot = require_slot(s, in.from.index);
    switch (in.msg.kind) {
      case MessageKind::InitialDeal: {
        Rational deal(in.msg.first, in.msg.second * 2);
        deal.canonicalize();
        slot.deal = deal;
        slot.dual = deal;
        if (slot.alpha == 0) slot.alpha = p.alpha;
        break;
      }
      case MessageKind::LocalDegree:
        slot.alpha = p.edge_alpha(to_u64(in.msg.first));
        break;
      case MessageKind::DealMultiplied: {
        if (in.msg.first != 0) slot.deal *= slot.alpha;
        Rational step = p.variant == Variant::HalfDeal ? Rational(slot.deal / 2) : slot.deal;
        if (ctx.fault == Fault::DeltaOvershoot) step *= 2;
        slot.dual += step;
        break;
      }
      default:
        throw Error(ErrorCode::InvariantViolation,
                    "unexpected " + std::string(congest::to_string(in.msg.kind)) + " in tighten round");
    }
  }
  if (ctx.iteration == 1) {
    s.alpha_max = 0;
    for (const auto& slot : s.incident) s.alpha_max = std::max(s.alpha_max, slot.alpha);
  }
  recompute_dual_sum(s);
  if (s.terminated) return {};

  std::vector<Outgoing> out;
  if (ctx.fault == Fault::PrematureTermination && v == ctx.fault_target && ctx.iteration == 1) {
    s.terminated = true;
    return out;
  }
  if (ctx.fault == Fault::NonAdjacentSend && v == ctx.fault_target && ctx.iteration == 1) {
    for (std::uint32_t e = 0; e < ctx.num_edges; ++e) {
      if (s.slot(e) == nullptr) {
        out.push_back({congest::edge_node(e), Message::level_delta(0)});
        break;
      }
    }
  }
  if (ctx.self_check && s.dual_sum > s.weight) {
    throw Error(ErrorCode::InvariantViolation, "dual sum exceeds weight at vertex " + std::to_string(v));
  }

  // Step a: beta-tightness.
  if (ctx.fault != Fault::SkippedTightness && s.dual_sum >= (1 - p.beta) * s.weight) {
    s.in_cover = true;
    s.terminated = true;
    send_to_uncovered(s, Message::covered(), out);
    return out;
  }

  // Step d: level loop. Deal halvings are applied once the edges report
  // the combined count of all members.
  const std::uint32_t start = s.level;
  const std::uint32_t guard = p.z + 64;
  auto threshold = [&](std::uint32_t level) -> Rational {
    const long k = ctx.fault == Fault::OffByOneLevel ? static_cast<long>(level)
                                                     : static_cast<long>(level) + 1;
    return Rational(s.weight) * (1 - pow2(-k));
  };
  while (s.dual_sum > threshold(s.level) && s.level < guard) {
    ++s.level;
    if (ctx.self_check && s.level >= p.z) {
      throw Error(ErrorCode::InvariantViolation, "level reached z at vertex " + std::to_string(v));
    }
  }
  s.last_level_delta = s.level - start;
  if (ctx.self_check && p.variant == Variant::HalfDeal && s.last_level_delta > 1) {
    throw Error(ErrorCode::InvariantViolation,
                "more than one level-up in one iteration at vertex " + std::to_string(v));
  }
  if (s.last_level_delta > 0) send_to_uncovered(s, Message::level_delta(s.last_level_delta), out);
  return out;
}

// Decide: step c, then step e with the deals after every member's halvings.
std::vector<Outgoing> vertex_decide(VertexIndex, VertexState& s, std::span<const Incoming> inbox,
                                    const StepContext&) {
  for (const auto& in : inbox) {
    IncidentEdge& slot = require_slot(s, in.from.index);
    switch (in.msg.kind) {
      case MessageKind::Covered:
        slot.uncovered = false;
        break;
      case MessageKind::DealHalvings:
        slot.deal *= half_power(to_u64(in.msg.first));
        break;
      default:
        throw Error(ErrorCode::InvariantViolation,
                    "unexpected " + std::string(congest::to_string(in.msg.kind)) + " in decide round");
    }
  }
  if (s.terminated) return {};
  if (s.uncovered_count() == 0) {
    s.terminated = true;
    return {};
  }

  Rational pending = 0;
  for (const auto& slot : s.incident) {
    if (slot.uncovered) pending += slot.deal;
  }
  std::vector<Outgoing> out;
  const bool raise = s.alpha_max * pending <= Rational(s.weight) * half_power(s.level + 1);
  if (raise) {
    send_to_uncovered(s, Message::raise(), out);
  } else {
    if (s.stuck_per_level.size() <= s.level) s.stuck_per_level.resize(s.level + 1, 0);
    ++s.stuck_per_level[s.level];
    send_to_uncovered(s, Message::stuck(), out);
  }
  return out;
}

}  // namespace

std::vector<Outgoing> vertex_step(VertexIndex v, VertexState& s, std::span<const Incoming> inbox,
                                  const StepContext& ctx) {
  switch (ctx.phase) {
    case Phase::InitReport: {
      std::vector<Outgoing> out;
      if (s.terminated) return out;
      const Message msg = Message::weight_degree(s.weight, s.degree());
      for (const auto& slot : s.incident) out.push_back({congest::edge_node(slot.edge), msg});
      return out;
    }
    case Phase::Tighten:
      return vertex_tighten(v, s, inbox, ctx);
    case Phase::Decide:
      return vertex_decide(v, s, inbox, ctx);
    case Phase::InitDeal:
    case Phase::Halve:
    case Phase::Apply:
      if (!inbox.empty() && ctx.self_check) {
        throw Error(ErrorCode::InvariantViolation, "vertex received traffic in an edge round");
      }
      return {};
  }
  return {};
}

std::vector<Outgoing> edge_step(EdgeIndex e, EdgeState& s, std::span<const Incoming> inbox,
                                const StepContext& ctx) {
  const ProtocolParams& p = ctx.params;
  std::vector<Outgoing> out;
  if (s.terminated) {
    if (!inbox.empty() && ctx.self_check) {
      throw Error(ErrorCode::InvariantViolation,
                  "covered edge " + std::to_string(e) + " received protocol traffic");
    }
    return out;
  }
  switch (ctx.phase) {
    case Phase::InitDeal: {
      std::vector<BigInt> weights;
      std::vector<std::uint64_t> degrees;
      std::size_t best = 0;
      Rational best_ratio;
      for (const auto& in : inbox) {
        if (in.msg.kind != MessageKind::WeightDegree) continue;
        Rational ratio(in.msg.first, in.msg.second);
        ratio.canonicalize();
        if (weights.empty() || ratio < best_ratio) {
          best = weights.size();
          best_ratio = ratio;
        }
        weights.push_back(in.msg.first);
        degrees.push_back(to_u64(in.msg.second));
        s.local_max_degree = std::max(s.local_max_degree, degrees.back());
      }
      if (weights.empty()) throw Error(ErrorCode::InvariantViolation, "edge without member reports");
      s.deal = initial_deal(weights, degrees);
      s.dual = s.deal;
      s.alpha = p.edge_alpha(s.local_max_degree);
      send_to_members(s, Message::initial_deal(weights[best], degrees[best]), out);
      if (p.alpha_mode == AlphaMode::PerEdge) {
        send_to_members(s, Message::local_degree(s.local_max_degree), out);
      }
      return out;
    }
    case Phase::Halve: {
      bool covered = false;
      std::uint64_t halvings = 0;
      for (const auto& in : inbox) {
        if (in.msg.kind == MessageKind::Covered) covered = true;
        if (in.msg.kind == MessageKind::LevelDelta) halvings += to_u64(in.msg.first);
      }
      if (covered) {
        s.covered = true;
        s.terminated = true;
        s.covered_iteration = ctx.iteration;
        send_to_members(s, Message::covered(), out);
        return out;
      }
      if (halvings > 0) {
        if (ctx.fault != Fault::WrongHalving) s.deal *= half_power(halvings);
        s.halvings += static_cast<std::uint32_t>(halvings);
        send_to_members(s, Message::deal_halvings(halvings), out);
      }
      return out;
    }
    case Phase::Apply: {
      std::size_t raises = 0;
      for (const auto& in : inbox) {
        if (in.msg.kind == MessageKind::Raise) ++raises;
      }
      const bool multiply = raises == s.members.size();
      if (multiply) {
        s.deal *= s.alpha;
        ++s.raises;
      }
      Rational step = p.variant == Variant::HalfDeal ? Rational(s.deal / 2) : s.deal;
      if (ctx.fault == Fault::DeltaOvershoot) step *= 2;
      s.dual += step;
      send_to_members(s, Message::deal_multiplied(multiply), out);
      return out;
    }
    case Phase::InitReport:
    case Phase::Tighten:
    case Phase::Decide:
      if (!inbox.empty() && ctx.self_check) {
        throw Error(ErrorCode::InvariantViolation, "edge received traffic in a vertex round");
      }
      return out;
  }
  return out;
}

// ---------------------------------------------------------------------------

Rational RunResult::dual_total() const {
  Rational total = 0;
  for (const auto& d : dual) total += d;
  return total;
}

ProtocolParams params_for(const Hypergraph& h, const Rational& epsilon, const RunOptions& opts) {
  ProtocolParams p = compute_params(h.rank(), BigInt(h.max_degree()), epsilon, opts.gamma,
                                    opts.variant, opts.alpha_mode);
  if (opts.alpha_override) {
    if (*opts.alpha_override < 2) throw Error(ErrorCode::BadInput, "alpha must be at least 2");
    if (opts.alpha_mode != AlphaMode::Global) {
      throw Error(ErrorCode::BadInput, "alpha override requires the global alpha mode");
    }
    p.alpha = *opts.alpha_override;
  }
  return p;
}

std::uint64_t iteration_bound(const Hypergraph& h, const ProtocolParams& p) {
  if (h.num_edges() == 0) return 0;
  const Rational halving_room = pow2(static_cast<long>(p.f) * p.z);
  std::uint64_t raise_bound = 0;
  Rational alpha_max = 0;
  for (EdgeIndex e = 0; e < h.num_edges(); ++e) {
    std::uint64_t local = 0;
    for (VertexIndex v : h.edge(e)) local = std::max<std::uint64_t>(local, h.degree(v));
    const Rational alpha = p.edge_alpha(local);
    const Rational delta = p.alpha_mode == AlphaMode::Global ? Rational(p.delta)
                                                             : Rational(BigInt(std::to_string(local)));
    raise_bound = std::max(raise_bound, ceil_log(alpha, delta * halving_room));
    alpha_max = std::max(alpha_max, alpha);
  }
  const BigInt stuck = ceil(Rational(p.stuck_factor()) * alpha_max);
  return raise_bound + std::uint64_t{p.f} * p.z * stuck.get_ui();
}

std::uint32_t default_iteration_cap(const Hypergraph& h, const ProtocolParams& params,
                                    double multiplier) {
  const double bound = static_cast<double>(iteration_bound(h, params));
  const double cap = std::ceil(std::max(0.0, multiplier) * bound) + 1.0;
  if (cap >= static_cast<double>(std::numeric_limits<std::uint32_t>::max())) {
    return std::numeric_limits<std::uint32_t>::max() - 1;
  }
  return static_cast<std::uint32_t>(cap);
}

namespace {

Snapshot take_snapshot(SnapshotStage stage, const std::vector<VertexState>& vs,
                       const std::vector<EdgeState>& es) {
  Snapshot snap;
  snap.stage = stage;
  snap.vertices.reserve(vs.size());
  for (const auto& s : vs) {
    VertexSnapshot vsnap;
    vsnap.level = s.level;
    vsnap.in_cover = s.in_cover;
    vsnap.terminated = s.terminated;
    vsnap.dual_sum = s.dual_sum;
    for (const auto& slot : s.incident) {
      if (slot.uncovered) vsnap.uncovered.push_back(slot.edge);
    }
    snap.vertices.push_back(std::move(vsnap));
  }
  snap.edges.reserve(es.size());
  for (const auto& s : es) snap.edges.push_back(EdgeSnapshot{s.deal, s.dual, s.covered, s.terminated});
  return snap;
}

bool everyone_done(const std::vector<VertexState>& vs, const std::vector<EdgeState>& es) {
  return std::all_of(vs.begin(), vs.end(), [](const VertexState& s) { return s.terminated; }) &&
         std::all_of(es.begin(), es.end(), [](const EdgeState& s) { return s.terminated; });
}

bool cover_complete(const Hypergraph& h, const std::vector<VertexState>& vs) {
  for (EdgeIndex e = 0; e < h.num_edges(); ++e) {
    const auto members = h.edge(e);
    if (std::none_of(members.begin(), members.end(), [&](VertexIndex v) { return vs[v].in_cover; })) {
      return false;
    }
  }
  return true;
}

}  // namespace

RunResult simulate(const Hypergraph& h, const ProtocolParams& params, const RunOptions& opts) {
  const std::size_t n = h.num_vertices();
  const std::size_t m = h.num_edges();
  const congest::Topology topology(h);

  std::vector<VertexState> vertices;
  vertices.reserve(n);
  for (VertexIndex v = 0; v < n; ++v) vertices.push_back(make_vertex_state(h, v));
  std::vector<EdgeState> edges;
  edges.reserve(m);
  for (EdgeIndex e = 0; e < m; ++e) edges.push_back(make_edge_state(h, e));

  RunResult result;
  result.params = params;
  RunTrace& trace = result.trace;
  trace.iteration_cap = opts.iteration_cap ? *opts.iteration_cap
                                           : default_iteration_cap(h, params, opts.cap_multiplier);

  congest::Mailboxes inbox(n, m);
  std::uint32_t round = 0;
  std::uint32_t iteration = 0;
  bool done = everyone_done(vertices, edges);

  auto execute = [&](Phase phase) {
    const StepContext ctx{params, phase, iteration, opts.fault, opts.fault_target,
                          static_cast<std::uint32_t>(m), opts.self_check};
    const auto order = congest::evaluation_order(n, m, opts.shuffle_seed, round);
    auto vstep = [&](std::uint32_t v, VertexState& s, std::span<const Incoming> in) {
      return vertex_step(v, s, in, ctx);
    };
    auto estep = [&](std::uint32_t e, EdgeState& s, std::span<const Incoming> in) {
      return edge_step(e, s, in, ctx);
    };
    congest::RoundDelivery delivery =
        congest::run_round(vertices, edges, inbox, topology, vstep, estep, order, opts.locality);
    trace.max_message_bits = std::max(trace.max_message_bits, delivery.max_bits);
    trace.message_count += delivery.log.size();
    trace.locality_violations += delivery.locality_violations;
    RoundRecord record;
    record.round = round++;
    record.iteration = iteration;
    record.phase = phase;
    record.messages = std::move(delivery.log);
    spdlog::trace("round {} iteration {} {}: {} messages", record.round, iteration, to_string(phase),
                  record.messages.size());
    trace.rounds.push_back(std::move(record));
    inbox = std::move(delivery.next);
    done = everyone_done(vertices, edges);
  };
  auto snapshot = [&](bool wanted) {
    if (!wanted && !done) return;
    const Phase phase = trace.rounds.back().phase;
    const SnapshotStage stage =
        phase == Phase::Apply || phase == Phase::InitDeal ? SnapshotStage::End : SnapshotStage::Mid;
    trace.rounds.back().snapshot = take_snapshot(stage, vertices, edges);
  };
  auto wanted = [&](std::uint32_t i) {
    return opts.snapshot_every != 0 && i % opts.snapshot_every == 0;
  };

  if (!done) {
    execute(Phase::InitReport);
    execute(Phase::InitDeal);
    snapshot(opts.snapshot_every != 0);
  }
  while (!done) {
    if (iteration >= trace.iteration_cap) {
      trace.capped = true;
      break;
    }
    ++iteration;
    for (Phase phase : {Phase::Tighten, Phase::Halve, Phase::Decide, Phase::Apply}) {
      execute(phase);
      if (phase == Phase::Decide || phase == Phase::Apply || done) snapshot(wanted(iteration));
      if (done) break;
    }
    if (!trace.cover_complete_iteration && cover_complete(h, vertices)) {
      trace.cover_complete_iteration = iteration;
    }
  }
  if (m == 0 || cover_complete(h, vertices)) {
    if (!trace.cover_complete_iteration) trace.cover_complete_iteration = iteration;
  }
  trace.termination_iteration = iteration;
  spdlog::debug("run finished after {} iterations, {} rounds, capped={}", iteration, round, trace.capped);
  trace.all_terminated = done;
  if (done) trace.local_termination_iteration = iteration;

  trace.raise_count.reserve(m);
  trace.covered_iteration.reserve(m);
  for (const auto& s : edges) {
    trace.raise_count.push_back(s.raises);
    trace.covered_iteration.push_back(s.covered_iteration);
    result.dual.push_back(s.dual);
  }
  for (VertexIndex v = 0; v < n; ++v) {
    const auto& s = vertices[v];
    if (s.in_cover) result.cover.push_back(v);
    result.levels.push_back(s.level);
    for (std::uint32_t level = 0; level < s.stuck_per_level.size(); ++level) {
      if (s.stuck_per_level[level] > 0) trace.stuck_count[{v, level}] = s.stuck_per_level[level];
    }
  }
  return result;
}

RunResult run_mwhvc(const Hypergraph& h, const Rational& epsilon, const RunOptions& opts) {
  const ProtocolParams params = params_for(h, epsilon, opts);
  RunResult result = simulate(h, params, opts);
  if (result.trace.capped) {
    throw Error(ErrorCode::CapExceeded,
                "no termination within " + std::to_string(result.trace.iteration_cap) + " iterations");
  }
  return result;
}

Rational f_approx_epsilon(const Hypergraph& h) {
  if (h.num_vertices() == 0) return 1;
  Rational eps(BigInt(1), BigInt(static_cast<unsigned long>(h.num_vertices())) * h.max_weight());
  eps.canonicalize();
  return eps;
}

RunResult f_approx(const Hypergraph& h, const RunOptions& opts) {
  return run_mwhvc(h, f_approx_epsilon(h), opts);
}

}  // namespace hypercover
