#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hypercover/numeric.hpp"
#include "hypercover/protocol.hpp"

namespace hypercover::cli {

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::string eps = "1";
  std::string gamma = "1/1000";
  std::string variant = "A";
  std::string alpha_mode = "global";
  double cap_multiplier = 4.0;
  std::size_t oracle_limit = 16;  // 0 disables the oracle
  std::string out_dir = ".";
  bool f_approx = false;
};

struct GenOptions {
  std::int64_t n = 6;
  std::int64_t m = 10;
  std::int64_t f = 3;
  std::int64_t wmax = 5;
  std::string format = "json";
  std::string output;  // empty: <out-dir>/instance.<format>
};

struct RunCommandOptions {
  std::string file;
  std::optional<std::uint32_t> iteration_cap;
  std::uint32_t snapshot_every = 1;
  bool write_trace = false;
  std::uint64_t shuffle_seed = 0;
};

struct BenchOptions {
  std::vector<std::uint32_t> deltas;
  std::vector<std::uint32_t> ranks;
  std::vector<std::string> epsilons;
  std::vector<std::string> variants;
  std::uint32_t hubs = 2;
  std::uint32_t repeats = 1;
  std::string output;  // empty: stdout
};

struct IlpCommandOptions {
  std::string file;
  bool oracle = true;
};

struct AuditCommandOptions {
  std::string instance;
  std::string trace;
};

RunOptions run_options(const GlobalOptions& g);

// Every command prints a one-line summary to `out`, diagnostics to `err`,
// and returns the process exit code.
int cmd_gen(const GlobalOptions& g, const GenOptions& o, std::ostream& out, std::ostream& err);
int cmd_run(const GlobalOptions& g, const RunCommandOptions& o, std::ostream& out,
            std::ostream& err);
int cmd_bench(const GlobalOptions& g, const BenchOptions& o, std::ostream& out,
              std::ostream& err);
int cmd_ilp(const GlobalOptions& g, const IlpCommandOptions& o, std::ostream& out,
            std::ostream& err);
int cmd_audit(const GlobalOptions& g, const AuditCommandOptions& o, std::ostream& out,
              std::ostream& err);

/// Header of the bench CSV.
extern const char* const kBenchHeader;

/// One bench row per (delta, f, eps, variant, repeat), in sweep order.
void write_bench_csv(const GlobalOptions& g, const BenchOptions& o, std::ostream& out);

}  // namespace hypercover::cli
