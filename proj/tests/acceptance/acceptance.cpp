// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hypercover/certify.hpp"
#include "hypercover/cli.hpp"
#include "hypercover/congest.hpp"
#include "hypercover/covering_ilp.hpp"
#include "hypercover/errors.hpp"
#include "hypercover/oracle.hpp"
#include "hypercover/protocol.hpp"
#include "support.hpp"

using namespace hypercover;
using namespace hypercover::testing;

namespace {

constexpr std::uint64_t kInstances = 500;
constexpr std::uint64_t kOverrideInstances = 100;
constexpr std::uint64_t kZeroOnePrograms = 250;
constexpr std::uint64_t kPrograms = 150;
constexpr std::uint64_t kPermutationConfigs = 60;
constexpr std::uint64_t kFaultInstances = 100;

struct Tally {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::string first;

  void expect(bool ok, const std::function<std::string()>& what) {
    ++checked;
    if (ok) return;
    if (violations++ == 0) first = what();
  }
  bool passed() const { return violations == 0 && checked > 0; }
};

struct Config {
  Variant variant;
  AlphaMode mode;
  std::optional<Rational> alpha;
  std::string name() const {
    std::string s = std::string(to_string(variant)) + "/" + std::string(to_string(mode));
    if (alpha) s += "/alpha=" + to_fraction_string(*alpha);
    return s;
  }
  RunOptions options() const {
    RunOptions o;
    o.variant = variant;
    o.alpha_mode = mode;
    o.alpha_override = alpha;
    o.snapshot_every = 1;
    return o;
  }
};

const std::vector<Config> kConfigs{{Variant::FullDeal, AlphaMode::Global, {}},
                                   {Variant::FullDeal, AlphaMode::PerEdge, {}},
                                   {Variant::HalfDeal, AlphaMode::Global, {}},
                                   {Variant::HalfDeal, AlphaMode::PerEdge, {}}};

const std::vector<Config> kOverrideConfigs{{Variant::FullDeal, AlphaMode::Global, make_rational(5, 2)},
                                           {Variant::HalfDeal, AlphaMode::Global, make_rational(5, 2)},
                                           {Variant::FullDeal, AlphaMode::Global, Rational(4)},
                                           {Variant::HalfDeal, AlphaMode::Global, Rational(4)}};

std::uint64_t local_degree(const Hypergraph& h, EdgeIndex e) {
  std::uint64_t d = 0;
  for (VertexIndex v : h.edge(e)) d = std::max<std::uint64_t>(d, h.degree(v));
  return d;
}

// Criteria 4 to 7 for one run, recomputed from the trace without the auditor.
struct RunChecks {
  Tally invariants;   // 4
  Tally counting;     // 5
  Tally level_step;   // 6
  Tally bits;         // 7
  std::size_t runs = 0;
  std::size_t variant_b_runs = 0;

  void add(const Hypergraph& h, const RunResult& r, const std::string& label) {
    ++runs;
    const ProtocolParams& p = r.params;
    const std::size_t n = h.num_vertices();
    const std::size_t m = h.num_edges();

    const certify::AuditReport report = certify::audit_run(h, r);
    for (const char* name : {"dual_feasibility", "vault", "sandwich", "level_bound"}) {
      const auto* c = report.find(name);
      invariants.expect(c != nullptr && c->ok(), [&] { return label + ": audit check " + name + " failed"; });
    }
    for (const char* name : {"raise_count", "stuck_count", "coverage_iterations"}) {
      const auto* c = report.find(name);
      counting.expect(c != nullptr && c->ok(), [&] { return label + ": audit check " + name + " failed"; });
    }

    // Invariants at every snapshot.
    std::size_t snapshots = 0;
    for (const auto& record : r.trace.rounds) {
      if (!record.snapshot) continue;
      ++snapshots;
      const Snapshot& s = *record.snapshot;
      for (VertexIndex v = 0; v < n; ++v) {
        Rational sum = 0, open = 0;
        for (EdgeIndex e : h.incident(v)) {
          sum += s.edges[e].dual;
          if (!s.edges[e].covered) open += s.edges[e].deal;
        }
        const Rational w(h.weight(v));
        const auto& vs = s.vertices[v];
        const std::string where = label + " round " + std::to_string(record.round) + " vertex " + std::to_string(v);
        invariants.expect(sum <= w, [&] { return where + ": packing constraint"; });
        invariants.expect(vs.level < p.z, [&] { return where + ": level reached z"; });
        const bool active = !vs.in_cover && !vs.terminated;
        if (active && s.stage == SnapshotStage::End) {
          invariants.expect(open <= w * pow2(-static_cast<long>(vs.level) - 1), [&] { return where + ": vault"; });
        }
        if (active && s.stage == SnapshotStage::Mid && record.phase == Phase::Decide) {
          const long l = vs.level;
          invariants.expect(w * (1 - pow2(-l)) <= sum && sum <= w * (1 - pow2(-l - 1)),
                            [&] { return where + ": sandwich"; });
        }
      }
    }
    invariants.expect(snapshots >= r.iterations(), [&] { return label + ": missing snapshots"; });

    // Raise and stuck counts from the message log.
    std::vector<std::uint32_t> raises(m, 0);
    std::uint32_t max_delta = 0;
    for (const auto& record : r.trace.rounds) {
      for (const auto& msg : record.messages) {
        bits.expect(msg.bits <= congest::bit_budget(n) && msg.bits == congest::account_message(msg.msg, n),
                    [&] { return label + ": message of " + std::to_string(msg.bits) + " bits"; });
        if (msg.msg.kind == congest::MessageKind::DealMultiplied && msg.msg.first == 1 &&
            msg.to.index == h.edge(msg.from.index)[0]) {
          ++raises[msg.from.index];
        }
        if (msg.msg.kind == congest::MessageKind::LevelDelta) {
          max_delta = std::max<std::uint32_t>(max_delta, static_cast<std::uint32_t>(msg.msg.first.get_ui()));
        }
      }
    }
    const Rational room = pow2(static_cast<long>(p.f) * p.z);
    const Rational c(p.stuck_factor());
    std::vector<BigInt> stuck_bound(n, 0);
    std::vector<Rational> alpha_v(n, 0);
    for (VertexIndex v = 0; v < n; ++v) {
      for (EdgeIndex e : h.incident(v)) alpha_v[v] = std::max(alpha_v[v], p.edge_alpha(local_degree(h, e)));
      stuck_bound[v] = ceil(c * alpha_v[v]);
    }
    for (EdgeIndex e = 0; e < m; ++e) {
      const std::uint64_t d = local_degree(h, e);
      const Rational delta = p.alpha_mode == AlphaMode::Global ? Rational(p.delta) : Rational(static_cast<long>(d));
      const std::uint64_t raise_bound = ceil_log(p.edge_alpha(d), delta * room);
      counting.expect(raises[e] <= raise_bound && raises[e] == r.trace.raise_count[e],
                      [&] { return label + ": edge " + std::to_string(e) + " raised " + std::to_string(raises[e]); });
      BigInt worst = 0;
      for (VertexIndex v : h.edge(e)) worst = std::max(worst, stuck_bound[v]);
      const BigInt coverage_bound = BigInt(std::to_string(raise_bound)) + BigInt(p.f * p.z) * worst;
      const std::uint32_t covered = r.trace.covered_iteration[e];
      counting.expect(covered >= 1 && BigInt(covered - 1) <= coverage_bound,
                      [&] { return label + ": edge " + std::to_string(e) + " covered at " + std::to_string(covered); });
    }
    for (const auto& [key, count] : r.trace.stuck_count) {
      counting.expect(BigInt(count) <= stuck_bound[key.first], [&] {
        return label + ": vertex " + std::to_string(key.first) + " stuck " + std::to_string(count) + " times";
      });
    }

    if (p.variant == Variant::HalfDeal) {
      ++variant_b_runs;
      level_step.expect(max_delta <= 1 && report.max_level_delta <= 1,
                        [&] { return label + ": level rose by " + std::to_string(max_delta); });
    }
  }
};

struct Line {
  int id;
  std::string title;
  bool pass;
  std::string detail;
};

std::vector<Line> lines;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  lines.push_back({id, title, pass, detail});
  std::cout << "criterion " << id << " [" << title << "]: " << (pass ? "PASS" : "FAIL") << " (" << detail << ")"
            << std::endl;
}

std::string summary(const Tally& t, const std::string& unit) {
  std::string s = std::to_string(t.checked) + " " + unit + ", " + std::to_string(t.violations) + " violations";
  if (t.violations) s += "; first: " + t.first;
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path out_dir =
      argc > 1 ? std::filesystem::path(argv[1]) : std::filesystem::current_path();
  const std::vector<Rational> epsilons{Rational(1), make_rational(1, 2), make_rational(1, 4)};

  // Criteria 1 to 7 share one instance suite.
  auto start = std::chrono::steady_clock::now();
  Tally approx, duality, fapprox;
  RunChecks checks;
  std::size_t approx_runs = 0;
  for (std::uint64_t seed = 1; seed <= kInstances; ++seed) {
    const Hypergraph h = suite_instance(seed);
    const Rational opt = oracle::exact_mwhvc(h).value;
    const Rational f(h.rank());
    std::vector<Config> configs = kConfigs;
    if (seed <= kOverrideInstances) configs.insert(configs.end(), kOverrideConfigs.begin(), kOverrideConfigs.end());
    for (const Config& cfg : configs) {
      for (const Rational& eps : epsilons) {
        const std::string label = "instance " + std::to_string(seed) + " " + cfg.name() + " eps=" + to_fraction_string(eps);
        RunResult r;
        try {
          r = run_mwhvc(h, eps, cfg.options());
        } catch (const Error& e) {
          approx.expect(false, [&] { return label + ": " + e.what(); });
          continue;
        }
        ++approx_runs;
        const Rational w(r.cover_weight(h));
        const Rational dual = r.dual_total();
        approx.expect(is_cover_indices(h, r.cover) && w <= (f + eps) * opt, [&] { return label + ": ratio"; });
        duality.expect(w <= (f + eps) * dual, [&] { return label + ": w(C) > (f+eps) sum(delta)"; });
        duality.expect(dual <= opt, [&] { return label + ": sum(delta) > opt"; });
        checks.add(h, r, label);
      }
    }
    for (const Config& cfg : kConfigs) {
      const std::string label = "instance " + std::to_string(seed) + " " + cfg.name() + " f-approx";
      try {
        const RunResult r = f_approx(h, cfg.options());
        fapprox.expect(r.params.epsilon == Rational(1) / (Rational(static_cast<long>(h.num_vertices())) * h.max_weight()),
                       [&] { return label + ": epsilon"; });
        fapprox.expect(is_cover_indices(h, r.cover) && Rational(r.cover_weight(h)) <= f * opt,
                       [&] { return label + ": w(C) > f opt"; });
        checks.add(h, r, label);
      } catch (const Error& e) {
        fapprox.expect(false, [&] { return label + ": " + e.what(); });
      }
    }
  }
  const double suite_seconds = seconds_since(start);
  report(1, "approximation ratio", approx.passed() && kInstances >= 500,
         std::to_string(kInstances) + " instances, " + summary(approx, "runs") + ", " +
             std::to_string(static_cast<int>(suite_seconds)) + " s for criteria 1-7");
  report(2, "dual certificate", duality.passed(), summary(duality, "comparisons"));
  report(3, "f-approximation", fapprox.passed(), summary(fapprox, "checks"));
  report(4, "invariant suite", checks.invariants.passed() && checks.runs >= 1000,
         std::to_string(checks.runs) + " audited runs, " + summary(checks.invariants, "checks"));
  report(5, "raise and stuck counts", checks.counting.passed(), summary(checks.counting, "checks"));
  report(6, "variant B level cap", checks.level_step.passed() && checks.variant_b_runs > 0,
         std::to_string(checks.variant_b_runs) + " variant B runs, " + summary(checks.level_step, "runs"));
  report(7, "bit budget", checks.bits.passed(), summary(checks.bits, "messages"));

  // Criterion 8: reduction correctness.
  {
    Tally t;
    std::size_t assignments = 0;
    for (std::uint64_t seed = 1; seed <= kZeroOnePrograms; ++seed) {
      const std::string label = "program " + std::to_string(seed);
      try {
        const ilp::CoveringILP p = ilp::normalize(random_zero_one(seed));
        const ilp::ProgramStats stats = ilp::program_stats(p);
        const ilp::HypergraphReduction red = ilp::zo_to_hypergraph(ilp::as_zero_one(p));
        const Hypergraph& g = red.hypergraph;
        const std::size_t n = p.num_vars();
        t.expect(n <= 8 && p.num_rows() <= 4 && stats.f <= 4, [&] { return label + ": outside the family"; });
        t.expect(g.num_vertices() == n, [&] { return label + ": vertex count"; });
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
          std::vector<BigInt> x(n);
          std::vector<VertexIndex> cover;
          for (std::uint32_t j = 0; j < n; ++j) {
            x[j] = (mask >> j) & 1u;
            if (x[j] == 1) cover.push_back(*g.index_of(j));
          }
          ++assignments;
          t.expect(ilp::is_feasible(p, x) == is_cover_indices(g, cover),
                   [&] { return label + ": assignment " + std::to_string(mask); });
        }
        t.expect(g.rank() <= stats.f, [&] { return label + ": rank " + std::to_string(g.rank()); });
        t.expect(BigInt(g.max_degree()) < (BigInt(1) << stats.f) * stats.delta,
                 [&] { return label + ": degree " + std::to_string(g.max_degree()); });
      } catch (const Error& e) {
        t.expect(false, [&] { return label + ": " + e.what(); });
      }
    }
    report(8, "reduction correctness", t.passed(),
           std::to_string(kZeroOnePrograms) + " programs, " + std::to_string(assignments) + " assignments, " +
               summary(t, "checks"));
  }

  // Criterion 9: ILP pipeline.
  {
    Tally t;
    for (std::uint64_t seed = 1; seed <= kPrograms; ++seed) {
      const Rational eps = epsilons[seed % epsilons.size()];
      const std::string label = "ilp " + std::to_string(seed);
      try {
        const ilp::CoveringILP raw = random_ilp(seed);
        const ilp::CoveringILP p = ilp::normalize(raw);
        const ilp::ProgramStats stats = ilp::program_stats(p);
        const Rational opt = oracle::exact_ilp(p, stats.box).value;
        const ilp::IlpSolution s = ilp::solve_ilp(raw, eps);
        t.expect(p.num_vars() <= 3 && stats.M && *stats.M <= 7, [&] { return label + ": outside the family"; });
        t.expect(ilp::is_feasible(p, s.x) && ilp::objective(p, s.x) == s.value,
                 [&] { return label + ": lifted solution infeasible"; });
        t.expect(s.value <= (Rational(s.hyper_rank) + eps) * opt, [&] {
          return label + ": value " + to_fraction_string(s.value) + " vs opt " + to_fraction_string(opt);
        });
      } catch (const Error& e) {
        t.expect(false, [&] { return label + ": " + e.what(); });
      }
    }
    report(9, "ILP pipeline", t.passed(), std::to_string(kPrograms) + " programs, " + summary(t, "checks"));
  }

  // Criterion 10: permuted evaluation order.
  {
    Tally t;
    for (std::uint64_t k = 1; k <= kPermutationConfigs; ++k) {
      const Hypergraph h = suite_instance(1000 + k);
      const Config& cfg = kConfigs[k % kConfigs.size()];
      const Rational eps = epsilons[k % epsilons.size()];
      RunOptions opts = cfg.options();
      const RunResult plain = run_mwhvc(h, eps, opts);
      const std::string result = result_text(h, plain);
      const std::string trace = trace_text(h, plain);
      for (std::uint64_t shuffle : {k * 7919 + 1, k * 104729 + 3}) {
        opts.shuffle_seed = shuffle;
        const RunResult other = run_mwhvc(h, eps, opts);
        t.expect(result_text(h, other) == result && trace_text(h, other) == trace,
                 [&] { return "configuration " + std::to_string(k) + " shuffle " + std::to_string(shuffle); });
      }
    }
    report(10, "order independence", t.passed(),
           std::to_string(kPermutationConfigs) + " configurations, " + summary(t, "comparisons"));
  }

  // Criterion 11: mutation sensitivity.
  {
    bool all = true;
    std::ostringstream detail;
    for (auto fault : {Fault::WrongHalving, Fault::SkippedTightness, Fault::OffByOneLevel, Fault::DeltaOvershoot,
                       Fault::NonAdjacentSend, Fault::PrematureTermination}) {
      std::size_t differing = 0, caught = 0;
      for (std::uint64_t seed = 1; seed <= kFaultInstances; ++seed) {
        const Hypergraph h = suite_instance(seed);
        RunOptions opts = kConfigs[seed % kConfigs.size()].options();
        opts.fault_target = static_cast<std::uint32_t>(seed % h.num_vertices());
        const ProtocolParams p = params_for(h, Rational(1), opts);
        const RunResult clean = simulate(h, p, opts);
        opts.fault = fault;
        opts.self_check = false;
        opts.locality = congest::ViolationPolicy::Record;
        const RunResult bad = simulate(h, p, opts);
        if (trace_text(h, bad) == trace_text(h, clean)) continue;
        ++differing;
        if (!certify::audit_run(h, bad).passed()) ++caught;
      }
      const bool ok = differing > 0 && caught == differing;
      all = all && ok;
      detail << to_string(fault) << " " << caught << "/" << differing << (ok ? "" : " MISSED") << "; ";
    }
    std::string d = detail.str();
    d.resize(d.size() - 2);
    report(11, "mutation sensitivity", all, d);
  }

  // Criterion 12: bench trend.
  {
    cli::GlobalOptions g;
    cli::BenchOptions o;
    o.deltas = {4, 16, 64, 256};
    o.ranks = {2};
    o.epsilons = {"1"};
    o.variants = {"A", "B"};
    o.repeats = 3;
    std::ostringstream csv;
    bool ok = true;
    std::string error;
    try {
      cli::write_bench_csv(g, o, csv);
    } catch (const Error& e) {
      ok = false;
      error = e.what();
    }
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    std::ostringstream trend;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::stringstream ss(line);
      for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
      ++rows;
      const bool dominated = cells.size() == 23 && std::stoull(cells[15]) <= std::stoull(cells[14]);
      ok = ok && dominated && cells[22] == "pass";
      if (cells[4] == "0") {
        trend << "; " << cells[3] << " delta=" << cells[0] << " iter=" << cells[15] << "/" << cells[14];
      }
    }
    ok = ok && rows == o.deltas.size() * o.variants.size() * o.repeats;
    const std::filesystem::path path = out_dir / "bench_trend.csv";
    std::ofstream(path) << csv.str();
    std::string d = std::to_string(rows) + " rows written to " + path.string() + trend.str();
    if (!error.empty()) d += " error: " + error;
    report(12, "trend measurement", ok, d);
  }

  std::size_t failed = 0;
  for (const auto& l : lines) failed += l.pass ? 0 : 1;
  std::cout << (failed == 0 ? "all 12 criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
