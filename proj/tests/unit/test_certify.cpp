#include <doctest.h>

#include "hypercover/certify.hpp"
#include "hypercover/oracle.hpp"
#include "hypercover/protocol.hpp"
#include "support.hpp"

using namespace hypercover;
using namespace hypercover::certify;
using namespace hypercover::testing;

TEST_CASE("dual feasibility") {
  const Hypergraph h = triangle();
  const std::vector<Rational> zero(3, Rational(0));
  const FeasibilityVerdict ok = check_dual_feasibility(h, zero);
  CHECK(ok.feasible);
  CHECK(ok.dual_total == 0);

  const Hypergraph s = single();
  const std::vector<Rational> two{Rational(2)};
  const FeasibilityVerdict bad = check_dual_feasibility(s, two);
  CHECK_FALSE(bad.feasible);
  CHECK(bad.violating_vertices == std::vector<VertexIndex>{0});
  CHECK(*bad.min_slack == -1);

  const std::vector<Rational> negative{Rational(-1)};
  CHECK_FALSE(check_dual_feasibility(s, negative).feasible);
}

TEST_CASE("tight set") {
  const Hypergraph h = triangle();
  const std::vector<Rational> zero(3, Rational(0));
  CHECK(tight_set(h, zero, make_rational(1, 3)).empty());
  const std::vector<Rational> one{Rational(1)};
  CHECK(tight_set(single(), one, make_rational(1, 2)) == std::vector<VertexIndex>{0});
  CHECK(tight_set(single(), one, Rational(0)) == std::vector<VertexIndex>{0});
}

TEST_CASE("certificate ratio") {
  const std::vector<VertexIndex> c{0};
  const std::vector<Rational> one{Rational(1)};
  CHECK(certificate_ratio(single(), c, one) == 1);

  const Hypergraph h = triangle();
  const RunResult r = run_mwhvc(h, Rational(1));
  CHECK(certificate_ratio(h, r.cover, r.dual) <= 3);
  const std::vector<VertexIndex> all{0, 1, 2};
  const Rational ratio = certificate_ratio(h, all, r.dual);
  CHECK(ratio >= 1);

  const Certificate cert = make_certificate(h, r.cover, r.dual, 2, Rational(1));
  CHECK(cert.valid);
  CHECK(cert.is_cover);
  CHECK(cert.cover_within_tight);
  CHECK(cert.ratio_bound == 3);
}

TEST_CASE("cover lies in the tight set on random runs") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const Hypergraph h = suite_instance(seed);
    const RunResult r = run_mwhvc(h, make_rational(1, 2));
    const auto tight = tight_set(h, r.dual, r.params.beta);
    for (VertexIndex v : r.cover) CHECK(std::binary_search(tight.begin(), tight.end(), v));
    CHECK(check_dual_feasibility(h, r.dual).feasible);
  }
}

TEST_CASE("audit of clean runs") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const Hypergraph h = suite_instance(seed);
    for (auto variant : {Variant::FullDeal, Variant::HalfDeal}) {
      for (auto mode : {AlphaMode::Global, AlphaMode::PerEdge}) {
        RunOptions opts;
        opts.variant = variant;
        opts.alpha_mode = mode;
        const RunResult r = run_mwhvc(h, Rational(1), opts);
        AuditReport report = audit_run(h, r);
        attach_oracle(report, h, r, BigInt(oracle::exact_mwhvc(h).value), false);
        CHECK(report.passed());
        for (const auto& c : report.checks) {
          INFO(c.name);
          CHECK(c.verdict != Verdict::Failed);
        }
        if (variant == Variant::HalfDeal) CHECK(report.max_level_delta <= 1);
      }
    }
  }
}

TEST_CASE("tampered snapshots fail the audit") {
  const Hypergraph h = triangle();
  RunResult r = run_mwhvc(h, Rational(1));
  REQUIRE(audit_run(h, r).passed());
  auto& snap = *r.trace.rounds.back().snapshot;
  snap.edges[0].dual += 5;
  const AuditReport report = audit_trace(h, r.params, r.trace);
  CHECK_FALSE(report.passed());
  const CheckResult* feasibility = report.find("dual_feasibility");
  REQUIRE(feasibility != nullptr);
  CHECK(feasibility->verdict == Verdict::Failed);
}

TEST_CASE("tampered messages fail the audit") {
  const Hypergraph h = triangle();
  RunResult r = run_mwhvc(h, Rational(1));
  bool changed = false;
  for (auto& round : r.trace.rounds) {
    for (auto& m : round.messages) {
      if (!changed && m.msg.kind == congest::MessageKind::DealMultiplied) {
        m.msg.first = m.msg.first == 0 ? 1 : 0;
        changed = true;
      }
    }
  }
  REQUIRE(changed);
  CHECK_FALSE(audit_trace(h, r.params, r.trace).passed());
}

TEST_CASE("oracle checks") {
  const Hypergraph h = triangle();
  const RunResult r = run_mwhvc(h, Rational(1));
  AuditReport good = audit_run(h, r);
  attach_oracle(good, h, r, BigInt(2), false);
  CHECK(good.passed());
  AuditReport wrong = audit_run(h, r);
  // An optimum below the dual total contradicts weak duality.
  attach_oracle(wrong, h, r, BigInt(0), false);
  CHECK_FALSE(wrong.passed());
}

TEST_CASE("every fault is detected") {
  for (auto fault : {Fault::WrongHalving, Fault::SkippedTightness, Fault::OffByOneLevel, Fault::DeltaOvershoot,
                     Fault::NonAdjacentSend, Fault::PrematureTermination}) {
    INFO(to_string(fault));
    std::size_t differing = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      const Hypergraph h = suite_instance(seed);
      RunOptions opts;
      opts.variant = seed % 2 ? Variant::FullDeal : Variant::HalfDeal;
      const ProtocolParams p = params_for(h, Rational(1), opts);
      const RunResult clean = simulate(h, p, opts);
      opts.fault = fault;
      opts.self_check = false;
      opts.locality = congest::ViolationPolicy::Record;
      const RunResult bad = simulate(h, p, opts);
      if (trace_text(h, bad) == trace_text(h, clean)) continue;
      ++differing;
      CHECK_FALSE(audit_run(h, bad).passed());
    }
    CHECK(differing > 0);
  }
}
