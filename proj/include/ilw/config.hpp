#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include "ilw/check.hpp"
#include "ilw/experiments.hpp"
#include "ilw/resonance.hpp"

namespace ilw {

/// Thrown on schema violations; the message is path-qualified
/// ("solver.dt: expected a positive number").
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Command { symbols, resonance, evolve, converge, check };

struct SymbolsJob {
  Grid grid{256};
  std::vector<EquationSpec> equations;
};

struct ResonanceJob {
  Regime regime = Regime::deep;
  ResonanceLemma lemma = ResonanceLemma::res1;
  int k = 1;
  int cap = 64;
  std::vector<std::optional<double>> deltas;
  ComparisonConstants constants;
};

struct EvolveJob {
  SolverConfig solver;
  DataSpec data;
  bool dump_snapshots = false;
};

struct ConvergeJob {
  SweepConfig sweep;
};

struct CheckJob {
  CheckConfig check;
};

struct RunConfig {
  Command command = Command::check;
  int schema_version = 1;
  std::uint64_t seed = 2024;
  std::string out_prefix = "out/run_";
  std::variant<SymbolsJob, ResonanceJob, EvolveJob, ConvergeJob, CheckJob> job;
  std::string echo;  // canonical JSON of the validated config, defaults filled
};

inline constexpr const char* tool_version = "ilw-limits 0.1.0";

/// Strict parse: unknown keys rejected, every range precondition checked
/// here rather than mid-run. `converge_regime` is the CLI subcommand
/// qualifier; it must agree with the config when both are present.
RunConfig parse_config(const std::string& json_text, Command command,
                       const std::string& converge_regime = "");

/// Executes the command and writes its CSV/JSON artifacts under the prefix.
/// Returns the process exit status (nonzero only for failed `check`).
int run(const RunConfig& config, const std::string& out_prefix_override = "", int threads = 1);

std::string command_name(Command c);

}  // namespace ilw
