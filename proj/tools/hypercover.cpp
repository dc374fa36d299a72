#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "hypercover/cli.hpp"

namespace cli = hypercover::cli;

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("hypercover"));
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("HYPERCOVER_LOG")) spdlog::cfg::helpers::load_levels(level);

  CLI::App app{"Distributed weighted hypergraph vertex cover: generate, run, audit, bench, ILP"};
  app.require_subcommand(1);

  cli::GlobalOptions g;
  app.add_option("--seed", g.seed, "Generator seed");
  app.add_option("--eps", g.eps, "Approximation slack epsilon, rational (e.g. 1/2)");
  app.add_option("--gamma", g.gamma, "Exponent gamma in (0,1) of the alpha threshold");
  app.add_option("--variant", g.variant, "Protocol variant")->check(CLI::IsMember({"A", "B"}));
  app.add_option("--alpha-mode", g.alpha_mode, "Alpha mode")->check(CLI::IsMember({"global", "per-edge"}));
  app.add_option("--cap-multiplier", g.cap_multiplier, "Iteration cap as a multiple of the bound");
  app.add_option("--oracle-limit", g.oracle_limit, "Largest instance checked by the exact oracle (0 disables)");
  app.add_option("--out-dir", g.out_dir, "Directory for output files");
  app.add_flag("--f-approx", g.f_approx, "Use epsilon = 1/(n * max weight) for an f-approximation");

  cli::GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--n", gen.n, "Vertices");
  gen_cmd->add_option("--m", gen.m, "Edges");
  gen_cmd->add_option("--f", gen.f, "Maximum edge size");
  gen_cmd->add_option("--wmax", gen.wmax, "Maximum weight");
  gen_cmd->add_option("--format", gen.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  gen_cmd->add_option("--output,-o", gen.output, "Output file");

  cli::RunCommandOptions run;
  std::uint32_t cap = 0;
  auto* run_cmd = app.add_subcommand("run", "Run the protocol and audit the result");
  run_cmd->add_option("file", run.file, "Instance file (JSON or text)")->required();
  auto* cap_opt = run_cmd->add_option("--iteration-cap", cap, "Explicit iteration cap");
  run_cmd->add_option("--snapshot-every", run.snapshot_every, "Snapshot period in iterations (0: final only)");
  run_cmd->add_flag("--trace", run.write_trace, "Write trace.jsonl");
  run_cmd->add_option("--shuffle-seed", run.shuffle_seed, "Permute node evaluation order");

  cli::BenchOptions bench;
  bench.deltas = {4, 16, 64, 256};
  bench.ranks = {2};
  bench.epsilons = {"1"};
  bench.variants = {"A"};
  auto* bench_cmd = app.add_subcommand("bench", "Sweep hub instances and emit a CSV");
  bench_cmd->add_option("--deltas", bench.deltas, "Maximum degrees")->delimiter(',');
  bench_cmd->add_option("--ranks", bench.ranks, "Edge sizes f")->delimiter(',');
  bench_cmd->add_option("--epsilons", bench.epsilons, "Epsilons")->delimiter(',');
  bench_cmd->add_option("--variants", bench.variants, "Variants")->delimiter(',');
  bench_cmd->add_option("--hubs", bench.hubs, "Hub vertices per instance");
  bench_cmd->add_option("--repeats", bench.repeats, "Seeds per configuration");
  bench_cmd->add_option("--output,-o", bench.output, "CSV file (default stdout)");

  cli::IlpCommandOptions ilp;
  bool no_oracle = false;
  auto* ilp_cmd = app.add_subcommand("ilp", "Solve a covering ILP through the hypergraph reduction");
  ilp_cmd->add_option("--file,file", ilp.file, "Program file (JSON)")->required();
  ilp_cmd->add_flag("--no-oracle", no_oracle, "Skip the exact ILP check");

  cli::AuditCommandOptions audit;
  auto* audit_cmd = app.add_subcommand("audit", "Audit a recorded trace");
  audit_cmd->add_option("instance", audit.instance, "Instance file")->required();
  audit_cmd->add_option("trace", audit.trace, "Trace JSONL file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*cap_opt) run.iteration_cap = cap;
  ilp.oracle = !no_oracle;
  if (*gen_cmd) return cli::cmd_gen(g, gen, std::cout, std::cerr);
  if (*run_cmd) return cli::cmd_run(g, run, std::cout, std::cerr);
  if (*bench_cmd) return cli::cmd_bench(g, bench, std::cout, std::cerr);
  if (*ilp_cmd) return cli::cmd_ilp(g, ilp, std::cout, std::cerr);
  return cli::cmd_audit(g, audit, std::cout, std::cerr);
}
