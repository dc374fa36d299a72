#include "hypercover/certify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "hypercover/congest.hpp"
#include "hypercover/errors.hpp"

namespace hypercover::certify {

using congest::MessageKind;
using congest::Side;

FeasibilityVerdict check_dual_feasibility(const Hypergraph& h, std::span<const Rational> dual) {
  if (dual.size() != h.num_edges()) {
    throw Error(ErrorCode::BadInput, "dual vector must have one entry per edge");
  }
  FeasibilityVerdict verdict;
  verdict.dual_total = 0;
  for (EdgeIndex e = 0; e < h.num_edges(); ++e) {
    if (dual[e] < 0) verdict.negative_edges.push_back(e);
    verdict.dual_total += dual[e];
  }
  for (VertexIndex v = 0; v < h.num_vertices(); ++v) {
    Rational sum = 0;
    for (EdgeIndex e : h.incident(v)) sum += dual[e];
    const Rational slack = Rational(h.weight(v)) - sum;
    if (!verdict.min_slack || slack < *verdict.min_slack) verdict.min_slack = slack;
    if (slack < 0) verdict.violating_vertices.push_back(v);
  }
  verdict.feasible = verdict.violating_vertices.empty() && verdict.negative_edges.empty();
  return verdict;
}

std::vector<VertexIndex> tight_set(const Hypergraph& h, std::span<const Rational> dual,
                                   const Rational& beta) {
  std::vector<VertexIndex> tight;
  for (VertexIndex v = 0; v < h.num_vertices(); ++v) {
    Rational sum = 0;
    for (EdgeIndex e : h.incident(v)) sum += dual[e];
    if (sum >= (1 - beta) * h.weight(v)) tight.push_back(v);
  }
  return tight;
}

Rational certificate_ratio(const Hypergraph& h, std::span<const VertexIndex> cover,
                           std::span<const Rational> dual) {
  Rational total = 0;
  for (const auto& d : dual) total += d;
  const BigInt weight = h.total_weight(cover);
  if (total == 0) {
    if (weight == 0) return 0;
    throw Error(ErrorCode::ZeroDual, "dual total is zero, the cover cannot be certified");
  }
  Rational ratio = Rational(weight) / total;
  ratio.canonicalize();
  return ratio;
}

Certificate make_certificate(const Hypergraph& h, std::span<const VertexIndex> cover,
                             std::span<const Rational> dual, std::uint32_t f,
                             const Rational& epsilon) {
  Certificate c;
  c.cover.assign(cover.begin(), cover.end());
  c.dual.assign(dual.begin(), dual.end());
  c.cover_weight = h.total_weight(cover);
  c.feasibility = check_dual_feasibility(h, dual);
  c.dual_total = c.feasibility.dual_total;
  c.ratio_bound = Rational(f) + epsilon;
  const Rational beta = epsilon / (Rational(f) + epsilon);
  c.tight = tight_set(h, dual, beta);
  c.is_cover = is_cover_indices(h, cover);
  c.cover_within_tight = std::all_of(cover.begin(), cover.end(), [&](VertexIndex v) {
    return std::binary_search(c.tight.begin(), c.tight.end(), v);
  });
  if (c.dual_total != 0 || c.cover_weight == 0) c.ratio = certificate_ratio(h, cover, dual);
  c.valid = c.is_cover && c.feasibility.feasible && c.ratio && *c.ratio <= c.ratio_bound;
  return c;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Valid: return "valid";
    case Verdict::Flagged: return "flagged";
    case Verdict::Failed: return "failed";
  }
  return "failed";
}

bool AuditReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok(); });
}

const CheckResult* AuditReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<std::string> AuditReport::failed_checks() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.ok()) out.push_back(c.name);
  }
  return out;
}

namespace {

constexpr std::size_t kMaxDetails = 8;

class Check {
 public:
  explicit Check(std::string name) { result_.name = std::move(name); }

  void pass(const Rational& slack) {
    ++result_.checked;
    observe(slack);
  }
  void pass() { ++result_.checked; }

  /// Counts a comparison; `ok` false records a violation.
  void expect(bool ok, const Rational& slack, const std::string& what) {
    ++result_.checked;
    observe(slack);
    if (!ok) fail(what);
  }
  void expect(bool ok, const std::string& what) {
    ++result_.checked;
    if (!ok) fail(what);
  }
  void fail(const std::string& what) {
    ++result_.violations;
    result_.verdict = Verdict::Failed;
    note(what);
  }
  void flag(const std::string& what) {
    if (result_.verdict == Verdict::Valid) result_.verdict = Verdict::Flagged;
    note(what);
  }
  void note(const std::string& what) {
    if (result_.details.size() < kMaxDetails) result_.details.push_back(what);
  }
  CheckResult take() { return std::move(result_); }

 private:
  void observe(const Rational& slack) {
    if (!result_.min_slack || slack < *result_.min_slack) result_.min_slack = slack;
  }
  CheckResult result_;
};

std::string at(std::uint32_t iteration, Phase phase) {
  return "iteration " + std::to_string(iteration) + " (" + std::string(to_string(phase)) + ")";
}

std::string vtx(VertexIndex v) { return "vertex " + std::to_string(v); }
std::string edg(EdgeIndex e) { return "edge " + std::to_string(e); }

std::uint64_t small(const BigInt& x) { return x.fits_ulong_p() ? x.get_ui() : ~std::uint64_t{0}; }

/// Independent re-execution of the protocol semantics driven by the
/// message log. Expected behavior is derived from the auditor's own state
/// and compared with what the nodes actually sent; state then follows the
/// messages that were delivered so that one deviation does not mask later ones.
struct Replay {
  const Hypergraph& h;
  const ProtocolParams& p;
  std::vector<Rational> deal, dual, edge_alpha;
  std::vector<std::uint64_t> local_delta;
  std::vector<bool> covered;
  std::vector<std::uint32_t> covered_iteration;
  std::vector<std::uint32_t> raises;
  std::vector<Rational> vertex_alpha;
  std::vector<std::uint32_t> level;
  std::vector<bool> in_cover, terminated;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> stuck;
  std::uint32_t max_level_delta = 0;

  Replay(const Hypergraph& graph, const ProtocolParams& params)
      : h(graph),
        p(params),
        deal(graph.num_edges()),
        dual(graph.num_edges()),
        edge_alpha(graph.num_edges()),
        local_delta(graph.num_edges(), 0),
        covered(graph.num_edges(), false),
        covered_iteration(graph.num_edges(), 0),
        raises(graph.num_edges(), 0),
        vertex_alpha(graph.num_vertices()),
        level(graph.num_vertices(), 0),
        in_cover(graph.num_vertices(), false),
        terminated(graph.num_vertices(), false) {
    for (EdgeIndex e = 0; e < h.num_edges(); ++e) {
      for (VertexIndex v : h.edge(e)) local_delta[e] = std::max<std::uint64_t>(local_delta[e], h.degree(v));
      edge_alpha[e] = p.edge_alpha(local_delta[e]);
    }
    for (VertexIndex v = 0; v < h.num_vertices(); ++v) {
      vertex_alpha[v] = 0;
      for (EdgeIndex e : h.incident(v)) vertex_alpha[v] = std::max(vertex_alpha[v], edge_alpha[e]);
      terminated[v] = h.inert(v);
    }
  }

  Rational dual_sum(VertexIndex v) const {
    Rational s = 0;
    for (EdgeIndex e : h.incident(v)) s += dual[e];
    return s;
  }
  std::vector<EdgeIndex> uncovered(VertexIndex v) const {
    std::vector<EdgeIndex> out;
    for (EdgeIndex e : h.incident(v)) {
      if (!covered[e]) out.push_back(e);
    }
    return out;
  }
  bool active(VertexIndex v) const { return !in_cover[v] && !terminated[v]; }
};

struct RoundMessages {
  // Per sender: kinds sent and their payloads, delivered traffic only.
  std::map<std::uint32_t, std::vector<const congest::LoggedMessage*>> from_vertex, from_edge;
  std::map<std::uint32_t, std::vector<const congest::LoggedMessage*>> to_edge;
};

RoundMessages group(const RoundRecord& record) {
  RoundMessages g;
  for (const auto& m : record.messages) {
    if (!m.delivered) continue;
    if (m.from.side == Side::Vertex) {
      g.from_vertex[m.from.index].push_back(&m);
      g.to_edge[m.to.index].push_back(&m);
    } else {
      g.from_edge[m.from.index].push_back(&m);
    }
  }
  return g;
}

const std::vector<const congest::LoggedMessage*>& sent(
    const std::map<std::uint32_t, std::vector<const congest::LoggedMessage*>>& by, std::uint32_t id) {
  static const std::vector<const congest::LoggedMessage*> none;
  auto it = by.find(id);
  return it == by.end() ? none : it->second;
}

bool uniform_kind(const std::vector<const congest::LoggedMessage*>& msgs, MessageKind kind) {
  return !msgs.empty() && std::all_of(msgs.begin(), msgs.end(), [&](const auto* m) { return m->msg.kind == kind; });
}

std::set<std::uint32_t> targets(const std::vector<const congest::LoggedMessage*>& msgs) {
  std::set<std::uint32_t> out;
  for (const auto* m : msgs) out.insert(m->to.index);
  return out;
}

}  // namespace

AuditReport audit_trace(const Hypergraph& h, const ProtocolParams& p, const RunTrace& trace) {
  const std::size_t n = h.num_vertices();
  const std::size_t m = h.num_edges();
  const Rational one_minus_beta = 1 - p.beta;

  Check feasibility("dual_feasibility"), vault("vault"), sandwich("sandwich"),
      level_bound("level_bound"), tightness("tightness"), level_step("level_step"),
      raise_check("raise_count"), stuck_check("stuck_count"), coverage("coverage_iterations"),
      bits("bit_budget"), locality("locality"), replay_check("deal_replay"),
      consistency("vertex_consistency"), termination("termination"), cover_check("cover"),
      certificate("certificate");

  AuditReport report;
  Replay r(h, p);
  const std::uint32_t budget = congest::bit_budget(n);
  const Rational halving_room = pow2(static_cast<long>(p.f) * p.z);

  std::vector<std::uint64_t> raise_bound(m);
  for (EdgeIndex e = 0; e < m; ++e) {
    const Rational delta = p.alpha_mode == AlphaMode::Global ? Rational(p.delta)
                                                             : Rational(BigInt(std::to_string(r.local_delta[e])));
    raise_bound[e] = ceil_log(r.edge_alpha[e], delta * halving_room);
  }
  std::vector<std::uint64_t> stuck_bound(n);
  for (VertexIndex v = 0; v < n; ++v) {
    stuck_bound[v] = small(ceil(Rational(p.stuck_factor()) * r.vertex_alpha[v]));
  }

  const Snapshot* last = nullptr;
  std::uint32_t last_iteration = 0;
  // Levels and received LevelDelta sums from the current iteration's Tighten round.
  std::map<std::uint32_t, std::uint64_t> halvings_expected;
  std::map<std::uint32_t, bool> covered_expected;
  std::map<std::uint32_t, std::size_t> raise_votes;

  for (const RoundRecord& record : trace.rounds) {
    const std::uint32_t it = record.iteration;
    last_iteration = it;

    // Message-level checks: size, locality.
    for (const auto& msg : record.messages) {
      const std::uint32_t recomputed = congest::account_message(msg.msg, n);
      bits.expect(recomputed == msg.bits && recomputed <= budget,
                  Rational(static_cast<long>(budget) - static_cast<long>(recomputed)),
                  at(it, record.phase) + ": message of " + std::to_string(recomputed) + " bits");
      bool adjacent = msg.from.side != msg.to.side;
      if (adjacent) {
        const auto v = msg.from.side == Side::Vertex ? msg.from.index : msg.to.index;
        const auto e = msg.from.side == Side::Vertex ? msg.to.index : msg.from.index;
        adjacent = e < m && v < n && std::binary_search(h.edge(e).begin(), h.edge(e).end(), v);
      }
      locality.expect(adjacent && msg.delivered,
                      at(it, record.phase) + ": message between non-adjacent nodes");
      if (msg.msg.kind == MessageKind::LevelDelta && msg.delivered) {
        const std::uint64_t k = small(msg.msg.first);
        r.max_level_delta = std::max<std::uint32_t>(r.max_level_delta, static_cast<std::uint32_t>(std::min<std::uint64_t>(k, 1u << 30)));
        if (p.variant == Variant::HalfDeal) {
          level_step.expect(k <= 1, Rational(1) - Rational(BigInt(msg.msg.first)),
                            at(it, record.phase) + ": level jumped by " + msg.msg.first.get_str());
        } else {
          level_step.pass();
        }
      }
    }

    const RoundMessages g = group(record);
    switch (record.phase) {
      case Phase::InitReport:
        for (VertexIndex v = 0; v < n; ++v) {
          for (const auto* msg : sent(g.from_vertex, v)) {
            replay_check.expect(msg->msg.kind == MessageKind::WeightDegree && msg->msg.first == h.weight(v) &&
                                    msg->msg.second == h.degree(v),
                                at(it, record.phase) + ": " + vtx(v) + " reported wrong weight or degree");
          }
        }
        break;
      case Phase::InitDeal:
        for (EdgeIndex e = 0; e < m; ++e) {
          std::vector<BigInt> w;
          std::vector<std::uint64_t> d;
          for (VertexIndex v : h.edge(e)) {
            w.push_back(h.weight(v));
            d.push_back(h.degree(v));
          }
          r.deal[e] = initial_deal(w, d);
          r.dual[e] = r.deal[e];
          for (const auto* msg : sent(g.from_edge, e)) {
            if (msg->msg.kind == MessageKind::InitialDeal) {
              Rational got(msg->msg.first, msg->msg.second * 2);
              got.canonicalize();
              replay_check.expect(got == r.deal[e], at(it, record.phase) + ": " + edg(e) + " announced a wrong initial deal");
            } else if (msg->msg.kind == MessageKind::LocalDegree) {
              replay_check.expect(msg->msg.first == BigInt(std::to_string(r.local_delta[e])),
                                  at(it, record.phase) + ": " + edg(e) + " announced a wrong local degree");
            }
          }
        }
        break;
      case Phase::Tighten: {
        halvings_expected.clear();
        covered_expected.clear();
        for (VertexIndex v = 0; v < n; ++v) {
          const auto& out = sent(g.from_vertex, v);
          if (!r.active(v)) {
            replay_check.expect(out.empty(), at(it, record.phase) + ": terminated " + vtx(v) + " sent messages");
            continue;
          }
          const auto open = r.uncovered(v);
          const Rational sum = r.dual_sum(v);
          const bool expect_join = sum >= one_minus_beta * h.weight(v);
          const bool joined = uniform_kind(out, MessageKind::Covered);
          replay_check.expect(joined == expect_join,
                              at(it, record.phase) + ": " + vtx(v) +
                                  (expect_join ? " was tight but did not join" : " joined without being tight"));
          if (joined) {
            replay_check.expect(targets(out) == std::set<std::uint32_t>(open.begin(), open.end()),
                                at(it, record.phase) + ": " + vtx(v) + " notified the wrong edges");
            r.in_cover[v] = true;
            r.terminated[v] = true;
            for (const auto* msg : out) covered_expected[msg->to.index] = true;
            continue;
          }
          std::uint32_t expected_level = r.level[v];
          while (sum > Rational(h.weight(v)) * (1 - pow2(-static_cast<long>(expected_level) - 1)) &&
                 expected_level < p.z + 64) {
            ++expected_level;
          }
          std::uint64_t k = 0;
          for (const auto* msg : out) {
            if (msg->msg.kind == MessageKind::LevelDelta) k = std::max(k, small(msg->msg.first));
          }
          bool uniform = out.empty() || (uniform_kind(out, MessageKind::LevelDelta) &&
                                         targets(out) == std::set<std::uint32_t>(open.begin(), open.end()));
          for (const auto* msg : out) uniform = uniform && small(msg->msg.first) == k && k > 0;
          replay_check.expect(uniform, at(it, record.phase) + ": " + vtx(v) + " sent inconsistent level updates");
          replay_check.expect(r.level[v] + k == expected_level,
                              at(it, record.phase) + ": " + vtx(v) + " moved to level " +
                                  std::to_string(r.level[v] + k) + ", expected " + std::to_string(expected_level));
          r.level[v] += static_cast<std::uint32_t>(k);
        }
        for (EdgeIndex e = 0; e < m; ++e) {
          std::uint64_t sum = 0;
          for (const auto* msg : sent(g.to_edge, e)) {
            if (msg->msg.kind == MessageKind::LevelDelta) sum += small(msg->msg.first);
            if (msg->msg.kind == MessageKind::Covered) covered_expected[e] = true;
          }
          halvings_expected[e] = sum;
        }
        break;
      }
      case Phase::Halve:
        for (EdgeIndex e = 0; e < m; ++e) {
          if (r.covered[e]) {
            replay_check.expect(sent(g.from_edge, e).empty(), at(it, record.phase) + ": covered " + edg(e) + " sent messages");
            continue;
          }
          const auto& out = sent(g.from_edge, e);
          const bool notice = uniform_kind(out, MessageKind::Covered);
          const bool expect_notice = covered_expected.count(e) > 0;
          replay_check.expect(notice == expect_notice,
                              at(it, record.phase) + ": " + edg(e) + " covered notice mismatch");
          if (notice) {
            replay_check.expect(targets(out) == std::set<std::uint32_t>(h.edge(e).begin(), h.edge(e).end()),
                                at(it, record.phase) + ": " + edg(e) + " notified the wrong members");
            r.covered[e] = true;
            r.covered_iteration[e] = it;
            continue;
          }
          const std::uint64_t expected = halvings_expected[e];
          bool announced_ok = expected == 0 ? out.empty()
                                             : uniform_kind(out, MessageKind::DealHalvings) &&
                                                   targets(out) == std::set<std::uint32_t>(h.edge(e).begin(), h.edge(e).end());
          std::uint64_t announced = 0;
          for (const auto* msg : out) {
            announced = std::max(announced, small(msg->msg.first));
            announced_ok = announced_ok && small(msg->msg.first) == expected;
          }
          replay_check.expect(announced_ok,
                              at(it, record.phase) + ": " + edg(e) + " announced " + std::to_string(announced) +
                                  " halvings, expected " + std::to_string(expected));
          r.deal[e] *= pow2(-static_cast<long>(expected));
        }
        break;
      case Phase::Decide:
        raise_votes.clear();
        for (VertexIndex v = 0; v < n; ++v) {
          const auto& out = sent(g.from_vertex, v);
          if (!r.active(v)) {
            replay_check.expect(out.empty(), at(it, record.phase) + ": terminated " + vtx(v) + " sent messages");
            continue;
          }
          const auto open = r.uncovered(v);
          if (open.empty()) {
            r.terminated[v] = true;
            replay_check.expect(out.empty(), at(it, record.phase) + ": " + vtx(v) + " with no open edges sent messages");
            continue;
          }
          Rational pending = 0;
          for (EdgeIndex e : open) pending += r.deal[e];
          const bool expect_raise =
              r.vertex_alpha[v] * pending <= Rational(h.weight(v)) * pow2(-static_cast<long>(r.level[v]) - 1);
          const bool raised = uniform_kind(out, MessageKind::Raise);
          const bool stuck = uniform_kind(out, MessageKind::Stuck);
          replay_check.expect(raised == expect_raise && stuck == !expect_raise &&
                                  targets(out) == std::set<std::uint32_t>(open.begin(), open.end()),
                              at(it, record.phase) + ": " + vtx(v) + " sent a wrong raise/stuck decision");
          if (stuck) ++r.stuck[{v, r.level[v]}];
          if (raised) {
            for (const auto* msg : out) ++raise_votes[msg->to.index];
          }
        }
        break;
      case Phase::Apply:
        for (EdgeIndex e = 0; e < m; ++e) {
          if (r.covered[e]) continue;
          const bool multiply = raise_votes[e] == h.edge(e).size();
          const auto& out = sent(g.from_edge, e);
          bool consistent = uniform_kind(out, MessageKind::DealMultiplied) &&
                            targets(out) == std::set<std::uint32_t>(h.edge(e).begin(), h.edge(e).end());
          for (const auto* msg : out) consistent = consistent && (msg->msg.first != 0) == multiply;
          replay_check.expect(consistent,
                              at(it, record.phase) + ": " + edg(e) + " announced a wrong multiplication bit");
          if (multiply) {
            r.deal[e] *= r.edge_alpha[e];
            ++r.raises[e];
          }
          r.dual[e] += p.variant == Variant::HalfDeal ? Rational(r.deal[e] / 2) : r.deal[e];
        }
        break;
    }

    if (!record.snapshot) continue;
    const Snapshot& snap = *record.snapshot;
    last = &snap;
    ++report.snapshots_checked;
    if (snap.vertices.size() != n || snap.edges.size() != m) {
      replay_check.fail(at(it, record.phase) + ": snapshot has the wrong shape");
      continue;
    }
    const std::string where = at(it, record.phase);

    // Replay agreement.
    for (EdgeIndex e = 0; e < m; ++e) {
      const auto& es = snap.edges[e];
      replay_check.expect(es.dual == r.dual[e], where + ": " + edg(e) + " dual differs from replay");
      if (!r.covered[e]) {
        replay_check.expect(es.deal == r.deal[e], where + ": " + edg(e) + " deal differs from replay");
      }
      replay_check.expect(es.covered == r.covered[e], where + ": " + edg(e) + " covered flag differs from replay");
    }
    for (VertexIndex v = 0; v < n; ++v) {
      replay_check.expect(snap.vertices[v].level == r.level[v] && snap.vertices[v].in_cover == r.in_cover[v],
                          where + ": " + vtx(v) + " level or cover flag differs from replay");
    }

    // Raw sums from per-edge values.
    std::vector<Rational> sums(n, 0), open_deals(n, 0);
    std::vector<std::vector<std::uint32_t>> open_edges(n);
    for (VertexIndex v = 0; v < n; ++v) {
      for (EdgeIndex e : h.incident(v)) {
        sums[v] += snap.edges[e].dual;
        if (!snap.edges[e].covered) {
          open_deals[v] += snap.edges[e].deal;
          open_edges[v].push_back(e);
        }
      }
    }

    for (EdgeIndex e = 0; e < m; ++e) {
      feasibility.expect(snap.edges[e].dual >= 0, snap.edges[e].dual, where + ": " + edg(e) + " has negative dual");
    }
    for (VertexIndex v = 0; v < n; ++v) {
      const auto& vs = snap.vertices[v];
      const Rational w(h.weight(v));
      feasibility.expect(sums[v] <= w, w - sums[v], where + ": packing constraint violated at " + vtx(v));
      level_bound.expect(vs.level < p.z, Rational(static_cast<long>(p.z) - 1 - static_cast<long>(vs.level)),
                         where + ": " + vtx(v) + " reached level " + std::to_string(vs.level));
      const bool active = !vs.in_cover && !vs.terminated;

      if (snap.stage == SnapshotStage::End && active) {
        const Rational cap = w * pow2(-static_cast<long>(vs.level) - 1);
        vault.expect(open_deals[v] <= cap, cap - open_deals[v], where + ": vault violated at " + vtx(v));
      }
      if (snap.stage == SnapshotStage::Mid && record.phase == Phase::Decide && active) {
        const Rational lower = w * (1 - pow2(-static_cast<long>(vs.level)));
        const Rational upper = w * (1 - pow2(-static_cast<long>(vs.level) - 1));
        sandwich.expect(lower <= sums[v] && sums[v] <= upper, std::min(sums[v] - lower, upper - sums[v]),
                        where + ": sandwich violated at " + vtx(v));
        const Rational gap = one_minus_beta * w - sums[v];
        tightness.expect(gap > 0, gap, where + ": active " + vtx(v) + " is tight");
      }
      if (vs.in_cover) {
        const Rational over = sums[v] - one_minus_beta * w;
        tightness.expect(over >= 0, over, where + ": cover " + vtx(v) + " is not tight");
      }
      if (snap.stage == SnapshotStage::Mid && record.phase == Phase::Decide) {
        consistency.expect(vs.dual_sum == sums[v], where + ": " + vtx(v) + " dual sum differs from its edges");
        consistency.expect(vs.uncovered == open_edges[v], where + ": " + vtx(v) + " has a stale uncovered set");
      }

      termination.expect(!vs.in_cover || vs.terminated, where + ": cover " + vtx(v) + " did not terminate");
      termination.expect(!vs.terminated || vs.in_cover || open_edges[v].empty(),
                         where + ": " + vtx(v) + " terminated with uncovered edges");
    }
    for (EdgeIndex e = 0; e < m; ++e) {
      const auto& es = snap.edges[e];
      const auto members = h.edge(e);
      const bool hit = std::any_of(members.begin(), members.end(), [&](VertexIndex v) { return snap.vertices[v].in_cover; });
      termination.expect(es.covered == es.terminated, where + ": " + edg(e) + " covered and terminated flags disagree");
      termination.expect(!es.covered || hit, where + ": " + edg(e) + " covered without a cover vertex");
    }
  }

  // Counting bounds from the replayed log.
  for (EdgeIndex e = 0; e < m; ++e) {
    const std::uint64_t count = r.raises[e];
    raise_check.expect(count <= raise_bound[e], Rational(BigInt(std::to_string(raise_bound[e]))) - BigInt(std::to_string(count)),
                       edg(e) + ": " + std::to_string(count) + " raises, bound " + std::to_string(raise_bound[e]));
    if (e < trace.raise_count.size()) {
      raise_check.expect(trace.raise_count[e] == count, edg(e) + ": protocol raise counter disagrees with the log");
    }
    ++report.raise_histogram[static_cast<std::uint32_t>(count)];
  }
  for (const auto& [key, count] : r.stuck) {
    const auto [v, level] = key;
    const std::uint64_t bound = stuck_bound[v];
    stuck_check.expect(count <= bound, Rational(static_cast<long>(bound) - static_cast<long>(count)),
                       vtx(v) + " level " + std::to_string(level) + ": " + std::to_string(count) +
                           " stuck iterations, bound " + std::to_string(bound));
    if (count == bound) {
      stuck_check.flag(vtx(v) + " level " + std::to_string(level) + " hit the stuck bound exactly");
    }
    ++report.stuck_histogram[count];
  }
  {
    auto protocol_stuck = trace.stuck_count;
    stuck_check.expect(protocol_stuck == r.stuck, "protocol stuck counters disagree with the log");
  }
  for (EdgeIndex e = 0; e < m; ++e) {
    std::uint64_t stuck_max = 0;
    for (VertexIndex v : h.edge(e)) stuck_max = std::max(stuck_max, stuck_bound[v]);
    const std::uint64_t bound = raise_bound[e] + std::uint64_t{p.f} * p.z * stuck_max;
    const std::uint64_t measured = r.covered[e] ? r.covered_iteration[e] - 1 : last_iteration;
    coverage.expect(measured <= bound, Rational(static_cast<long>(bound) - static_cast<long>(measured)),
                    edg(e) + ": " + std::to_string(measured) + " iterations before coverage, bound " +
                        std::to_string(bound));
    if (e < trace.covered_iteration.size()) {
      coverage.expect(trace.covered_iteration[e] == r.covered_iteration[e],
                      edg(e) + ": protocol coverage iteration disagrees with the log");
    }
  }

  termination.expect(trace.all_terminated && !trace.capped,
                     trace.capped ? "run hit the iteration cap" : "run ended with active nodes");
  for (VertexIndex v = 0; v < n; ++v) {
    termination.expect(r.terminated[v] || r.in_cover[v], vtx(v) + " never terminated in the replay");
  }
  termination.expect(trace.max_message_bits <= budget || trace.rounds.empty(), "recorded max bits above budget");

  // Final cover and certificate from the last snapshot.
  if (m == 0) {
    cover_check.pass();
    certificate.pass();
  } else if (last == nullptr) {
    cover_check.fail("trace has no snapshot");
    certificate.fail("trace has no snapshot");
  } else {
    std::vector<VertexIndex> cover;
    std::vector<Rational> dual;
    for (VertexIndex v = 0; v < n; ++v) {
      if (last->vertices[v].in_cover) cover.push_back(v);
    }
    for (const auto& es : last->edges) dual.push_back(es.dual);
    cover_check.expect(is_cover_indices(h, cover), "final vertex set is not a cover");
    const Rational total = [&] {
      Rational t = 0;
      for (const auto& d : dual) t += d;
      return t;
    }();
    const Rational bound = (Rational(p.f) + p.epsilon) * total;
    const Rational weight(h.total_weight(cover));
    certificate.expect(weight <= bound, bound - weight, "w(C) exceeds (f + eps) times the dual total");
  }

  report.max_level_delta = r.max_level_delta;
  report.max_message_bits = trace.max_message_bits;
  for (Check* c : {&feasibility, &vault, &sandwich, &level_bound, &tightness, &level_step, &raise_check,
                   &stuck_check, &coverage, &bits, &locality, &replay_check, &consistency, &termination,
                   &cover_check, &certificate}) {
    report.checks.push_back(c->take());
  }
  return report;
}

AuditReport audit_run(const Hypergraph& h, const RunResult& result) {
  AuditReport report = audit_trace(h, result.params, result.trace);
  Check final_check("final_certificate");
  Certificate c = make_certificate(h, result.cover, result.dual, result.params.f, result.params.epsilon);
  final_check.expect(c.is_cover, "result is not a cover");
  final_check.expect(c.feasibility.feasible, "result dual is infeasible");
  final_check.expect(c.cover_within_tight, "a cover vertex is not beta-tight");
  if (c.ratio) {
    final_check.expect(*c.ratio <= c.ratio_bound, c.ratio_bound - *c.ratio, "certificate ratio above f + eps");
  } else {
    final_check.fail("zero dual with a non-empty cover");
  }
  report.checks.push_back(final_check.take());
  return report;
}

void attach_oracle(AuditReport& report, const Hypergraph& h, const RunResult& result, const BigInt& opt,
                   bool f_approx_mode) {
  const Rational total = result.dual_total();
  const Rational weight(result.cover_weight(h));
  const Rational optimum(opt);

  Check weak("weak_duality");
  weak.expect(total <= optimum, optimum - total, "dual total exceeds the optimum");
  report.checks.push_back(weak.take());

  Check approx("approximation");
  const Rational bound = (Rational(result.params.f) + result.params.epsilon) * optimum;
  approx.expect(weight <= bound, bound - weight, "w(C) exceeds (f + eps) * opt");
  report.checks.push_back(approx.take());

  if (f_approx_mode) {
    Check fcheck("f_approximation");
    const Rational fbound = Rational(result.params.f) * optimum;
    fcheck.expect(weight <= fbound, fbound - weight, "w(C) exceeds f * opt");
    report.checks.push_back(fcheck.take());
  }
}

}  // namespace hypercover::certify
