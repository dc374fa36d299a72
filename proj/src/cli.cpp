#include "hypercover/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hypercover/certify.hpp"
#include "hypercover/covering_ilp.hpp"
#include "hypercover/errors.hpp"
#include "hypercover/io.hpp"
#include "hypercover/oracle.hpp"

namespace hypercover::cli {

namespace {

constexpr int kOk = 0;
constexpr int kAuditFailed = 1;
constexpr int kBadInput = 2;
constexpr int kRunError = 3;
constexpr std::int64_t kBenchWeightMax = 8;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::CapExceeded:
    case ErrorCode::Infeasible:
    case ErrorCode::LiftInfeasible:
    case ErrorCode::InvariantViolation:
    case ErrorCode::NonAdjacentSend:
    case ErrorCode::ZeroDual:
    case ErrorCode::TooLarge:
    case ErrorCode::RankGuardExceeded:
      return kRunError;
    default:
      return kBadInput;
  }
}

std::filesystem::path out_path(const GlobalOptions& g, const std::string& name) {
  std::filesystem::create_directories(g.out_dir);
  return std::filesystem::path(g.out_dir) / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::BadInput, "cannot write '" + path.string() + "'");
  file << text;
}

void write_json(const std::filesystem::path& path, const io::json& j) { write_text(path, j.dump(2) + "\n"); }

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return exit_code_for(ex.code());
  } catch (const std::filesystem::filesystem_error& ex) {
    err << "error: " << ex.what() << '\n';
    return kBadInput;
  }
}

Rational epsilon_for(const GlobalOptions& g, const Hypergraph& h) {
  return g.f_approx ? f_approx_epsilon(h) : parse_rational(g.eps);
}

}  // namespace

const char* const kBenchHeader =
    "delta,f,eps,variant,repeat,seed,n,m,max_degree,rank,alpha,z,raise_bound,stuck_bound,bound,"
    "iterations,rounds,max_message_bits,bit_budget,cover_weight,dual_total,ratio,audit";

RunOptions run_options(const GlobalOptions& g) {
  RunOptions opts;
  opts.variant = variant_from_string(g.variant);
  opts.alpha_mode = alpha_mode_from_string(g.alpha_mode);
  opts.gamma = parse_rational(g.gamma);
  if (!(g.cap_multiplier > 0)) throw Error(ErrorCode::BadInput, "cap multiplier must be positive");
  opts.cap_multiplier = g.cap_multiplier;
  return opts;
}

int cmd_gen(const GlobalOptions& g, const GenOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.format != "json" && o.format != "text") throw Error(ErrorCode::BadInput, "format must be json or text");
    GeneratedInstance gen = generate_random(o.n, o.m, o.f, o.wmax, g.seed);
    for (const auto& w : gen.warnings) err << "warning: " << w << '\n';
    const Hypergraph& h = gen.hypergraph;
    const std::string text =
        o.format == "json" ? io::instance_to_json(h).dump(2) + "\n" : io::instance_to_text(h);
    const std::filesystem::path path =
        o.output.empty() ? out_path(g, "instance." + o.format) : std::filesystem::path(o.output);
    write_text(path, text);
    const Hypergraph check = io::load_instance(path.string());
    out << "wrote " << path.string() << " n=" << check.num_vertices() << " m=" << check.num_edges()
        << " f=" << check.rank() << " delta=" << check.max_degree() << " wmax=" << check.max_weight().get_str()
        << '\n';
    return kOk;
  });
}

int cmd_run(const GlobalOptions& g, const RunCommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Hypergraph h = io::load_instance(o.file);
    for (const auto& note : h.assumption_notes()) err << "note: " << note << '\n';
    RunOptions opts = run_options(g);
    opts.iteration_cap = o.iteration_cap;
    opts.snapshot_every = o.snapshot_every;
    opts.shuffle_seed = o.shuffle_seed;
    const Rational eps = epsilon_for(g, h);
    const RunResult r = run_mwhvc(h, eps, opts);

    certify::AuditReport report = certify::audit_run(h, r);
    std::optional<BigInt> opt;
    if (g.oracle_limit > 0 && h.num_vertices() <= g.oracle_limit) {
      const oracle::ExactSolution exact = oracle::exact_mwhvc(h, g.oracle_limit);
      opt = BigInt(exact.value);
      certify::attach_oracle(report, h, r, *opt, g.f_approx);
    }
    const certify::Certificate cert = certify::make_certificate(h, r.cover, r.dual, r.params.f, r.params.epsilon);

    io::json result = io::run_result_to_json(h, r);
    result["certificate"] = io::certificate_to_json(h, cert);
    result["opt"] = opt ? io::json(opt->get_str()) : io::json();
    result["audit"] = io::audit_to_json(report);
    write_json(out_path(g, "result.json"), result);
    write_json(out_path(g, "audit.json"), io::audit_to_json(report));
    if (o.write_trace) {
      std::ostringstream trace;
      io::write_trace(trace, h, r.params, r.trace);
      write_text(out_path(g, "trace.jsonl"), trace.str());
    }

    const bool passed = report.passed();
    out << (passed ? "ok" : "audit-failed") << " cover_weight=" << r.cover_weight(h).get_str()
        << " dual_total=" << to_fraction_string(r.dual_total()) << " iterations=" << r.iterations()
        << " rounds=" << r.trace.rounds_executed() << " max_bits=" << r.trace.max_message_bits;
    if (opt) out << " opt=" << opt->get_str();
    out << '\n';
    for (const auto& name : report.failed_checks()) err << "failed check: " << name << '\n';
    return passed ? kOk : kAuditFailed;
  });
}

void write_bench_csv(const GlobalOptions& g, const BenchOptions& o, std::ostream& out) {
  out << kBenchHeader << '\n';
  const RunOptions base = run_options(g);
  for (std::uint32_t delta : o.deltas) {
    for (std::uint32_t f : o.ranks) {
      for (const std::string& eps_text : o.epsilons) {
        const Rational eps = parse_rational(eps_text);
        for (const std::string& variant : o.variants) {
          for (std::uint32_t repeat = 0; repeat < o.repeats; ++repeat) {
            const std::uint64_t seed = g.seed + repeat;
            const Hypergraph h = generate_hubs(delta, f, o.hubs, kBenchWeightMax, seed).hypergraph;
            RunOptions opts = base;
            opts.variant = variant_from_string(variant);
            const RunResult r = run_mwhvc(h, eps, opts);
            const ProtocolParams& p = r.params;
            const std::uint64_t bound = iteration_bound(h, p);
            const std::uint64_t stuck = static_cast<std::uint64_t>(ceil(Rational(p.stuck_factor()) * p.alpha).get_ui());
            const std::uint64_t raise = bound - std::uint64_t{p.f} * p.z * stuck;
            const certify::AuditReport report = certify::audit_run(h, r);
            const BigInt weight = r.cover_weight(h);
            const Rational dual = r.dual_total();
            out << delta << ',' << f << ',' << to_fraction_string(eps) << ',' << variant << ',' << repeat << ','
                << seed << ',' << h.num_vertices() << ',' << h.num_edges() << ',' << h.max_degree() << ','
                << h.rank() << ',' << to_fraction_string(p.alpha) << ',' << p.z << ',' << raise << ',' << stuck
                << ',' << bound + 1 << ',' << r.iterations() << ',' << r.trace.rounds_executed() << ','
                << r.trace.max_message_bits << ',' << congest::bit_budget(h.num_vertices()) << ','
                << weight.get_str() << ',' << to_fraction_string(dual) << ','
                << (dual > 0 ? to_fraction_string(Rational(weight) / dual) : std::string()) << ','
                << (report.passed() ? "pass" : "fail") << '\n';
          }
        }
      }
    }
  }
}

int cmd_bench(const GlobalOptions& g, const BenchOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.output.empty()) {
      write_bench_csv(g, o, out);
    } else {
      std::ostringstream csv;
      write_bench_csv(g, o, csv);
      write_text(o.output, csv.str());
      out << "wrote " << o.output << '\n';
    }
    return kOk;
  });
}

int cmd_ilp(const GlobalOptions& g, const IlpCommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ilp::CoveringILP program = io::load_ilp(o.file);
    const Rational eps = parse_rational(g.eps);
    const ilp::IlpSolution s = ilp::solve_ilp(program, eps, run_options(g));

    io::json result = io::ilp_solution_to_json(program, s);
    const ilp::CoveringILP normalized = ilp::normalize(program);
    const bool recheck = ilp::is_feasible(normalized, s.x);
    result["feasibility_recheck"] = recheck;
    bool ok = recheck && (!s.certificate || s.certificate->valid);
    if (o.oracle && g.oracle_limit > 0 && normalized.num_vars() <= g.oracle_limit) {
      try {
        const oracle::ExactSolution exact = oracle::exact_ilp(normalized, s.original_stats.box, g.oracle_limit);
        const Rational bound = (Rational(std::max<std::uint32_t>(s.hyper_rank, 1)) + eps) * exact.value;
        const bool within = s.value <= bound && s.value >= exact.value;
        result["oracle"] = io::json{{"opt", to_fraction_string(exact.value)}, {"within_bound", within}};
        ok = ok && within;
      } catch (const Error& ex) {
        if (ex.code() != ErrorCode::TooLarge) throw;
        err << "note: oracle skipped: " << ex.what() << '\n';
      }
    }
    result["passed"] = ok;
    write_json(out_path(g, "ilp_solution.json"), result);
    out << (ok ? "ok" : "audit-failed") << " value=" << to_fraction_string(s.value) << " feasible=" << recheck
        << " hyper_rank=" << s.hyper_rank << '\n';
    return ok ? kOk : kAuditFailed;
  });
}

int cmd_audit(const GlobalOptions& g, const AuditCommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Hypergraph h = io::load_instance(o.instance);
    std::ifstream in(o.trace);
    if (!in) throw Error(ErrorCode::BadInput, "cannot open '" + o.trace + "'");
    const io::ParsedTrace parsed = io::read_trace(in);
    const certify::AuditReport report = certify::audit_trace(h, parsed.params, parsed.trace);
    write_json(out_path(g, "audit.json"), io::audit_to_json(report));
    const bool passed = report.passed();
    out << (passed ? "ok" : "audit-failed") << " checks=" << report.checks.size()
        << " snapshots=" << report.snapshots_checked << '\n';
    for (const auto& name : report.failed_checks()) err << "failed check: " << name << '\n';
    return passed ? kOk : kAuditFailed;
  });
}

}  // namespace hypercover::cli
