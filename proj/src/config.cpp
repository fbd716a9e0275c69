#include "ilw/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "ilw/report_io.hpp"
#include "json.hpp"

namespace ilw {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_delta(const std::optional<double>& delta) {
  return delta ? format_double(*delta) : "inf";
}

void write_text_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << contents;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(path.empty() ? "(root)" : path, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) fail(join(path, key), "unknown key");
}

double get_number(const json& obj, const std::string& path, const char* key, double dflt,
                  bool required = false) {
  if (!obj.contains(key)) {
    if (required) fail(join(path, key), "missing required value");
    return dflt;
  }
  if (!obj[key].is_number()) fail(join(path, key), "expected a number");
  return obj[key].get<double>();
}

long long get_integer(const json& obj, const std::string& path, const char* key, long long dflt,
                      bool required = false) {
  if (!obj.contains(key)) {
    if (required) fail(join(path, key), "missing required value");
    return dflt;
  }
  if (!obj[key].is_number_integer()) fail(join(path, key), "expected an integer");
  return obj[key].get<long long>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_boolean()) fail(join(path, key), "expected a boolean");
  return obj[key].get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       const std::string& dflt, bool required = false) {
  if (!obj.contains(key)) {
    if (required) fail(join(path, key), "missing required value");
    return dflt;
  }
  if (!obj[key].is_string()) fail(join(path, key), "expected a string");
  return obj[key].get<std::string>();
}

Grid parse_grid(const json& obj, const std::string& path) {
  reject_unknown(obj, path, {"modes", "period"});
  const auto modes = get_integer(obj, path, "modes", 256);
  const double period = get_number(obj, path, "period", two_pi);
  if (modes < 8 || (modes & (modes - 1)) != 0)
    fail(join(path, "modes"), "must be a power of two >= 8");
  if (!(period > 0.0)) fail(join(path, "period"), "must be positive");
  return Grid(static_cast<std::size_t>(modes), period);
}

json echo_grid(const Grid& g) {
  return json{{"modes", g.modes()}, {"period", g.period()}};
}

EquationSpec parse_equation(const json& obj, const std::string& path) {
  reject_unknown(obj, path, {"family", "k", "delta"});
  const std::string fam_name = get_string(obj, path, "family", "", true);
  const auto fam = family_from_name(fam_name);
  if (!fam) fail(join(path, "family"), "expected one of gILW-deep, gBO, scaled-gILW, gKdV");
  const int k = static_cast<int>(get_integer(obj, path, "k", 2));
  if (k < 2) fail(join(path, "k"), "nonlinearity power must be >= 2");
  const bool needs_delta = *fam == Family::gilw_deep || *fam == Family::scaled_gilw;
  if (needs_delta && !obj.contains("delta")) fail(join(path, "delta"), "missing required value");
  if (!needs_delta && obj.contains("delta"))
    fail(join(path, "delta"), "limit equations carry no depth");
  try {
    switch (*fam) {
      case Family::gilw_deep:
        return EquationSpec::deep(get_number(obj, path, "delta", 0.0, true), k);
      case Family::gbo: return EquationSpec::bo(k);
      case Family::scaled_gilw:
        return EquationSpec::shallow(get_number(obj, path, "delta", 0.0, true), k);
      case Family::gkdv: return EquationSpec::kdv(k);
    }
  } catch (const std::invalid_argument& e) {
    fail(join(path, "delta"), e.what());
  }
  fail(path, "unreachable");
}

json echo_equation(const EquationSpec& spec) {
  json j{{"family", family_name(spec.family)}, {"k", spec.k}};
  if (spec.depth.has_delta()) j["delta"] = spec.depth.delta();
  return j;
}

DataSpec parse_data(const json& obj, const std::string& path, std::uint64_t default_seed) {
  reject_unknown(obj, path,
                 {"profile", "amplitude", "tail_amplitude", "tail_s", "seed", "band_limit"});
  DataSpec d;
  d.seed = default_seed;
  const std::string profile = get_string(obj, path, "profile", "standard");
  if (profile == "standard") d.profile = DataSpec::Profile::standard;
  else if (profile == "random") d.profile = DataSpec::Profile::random;
  else fail(join(path, "profile"), "expected standard or random");
  d.amplitude = get_number(obj, path, "amplitude", 1.0);
  d.tail_amplitude = get_number(obj, path, "tail_amplitude", 0.0);
  d.tail_s = get_number(obj, path, "tail_s", 1.0);
  if (obj.contains("seed"))
    d.seed = static_cast<std::uint64_t>(get_integer(obj, path, "seed", 0));
  if (obj.contains("band_limit")) {
    const double bl = get_number(obj, path, "band_limit", 0.0);
    if (!(bl >= 0.0)) fail(join(path, "band_limit"), "must be nonnegative");
    d.band_limit = bl;
  }
  return d;
}

json echo_data(const DataSpec& d) {
  json j{{"profile", d.profile == DataSpec::Profile::standard ? "standard" : "random"},
         {"amplitude", d.amplitude},
         {"tail_amplitude", d.tail_amplitude},
         {"tail_s", d.tail_s},
         {"seed", d.seed}};
  if (d.band_limit) j["band_limit"] = *d.band_limit;
  return j;
}

SymbolsJob parse_symbols(const json& root, json& echo) {
  reject_unknown(root, "", {"schema_version", "seed", "out_prefix", "grid", "equations"});
  SymbolsJob job;
  if (root.contains("grid")) job.grid = parse_grid(root["grid"], "grid");
  if (!root.contains("equations") || !root["equations"].is_array() || root["equations"].empty())
    fail("equations", "expected a non-empty array");
  json eqs = json::array();
  for (std::size_t i = 0; i < root["equations"].size(); ++i) {
    job.equations.push_back(
        parse_equation(root["equations"][i], "equations[" + std::to_string(i) + "]"));
    eqs.push_back(echo_equation(job.equations.back()));
  }
  echo["grid"] = echo_grid(job.grid);
  echo["equations"] = eqs;
  return job;
}

ResonanceJob parse_resonance(const json& root, json& echo) {
  reject_unknown(root, "", {"schema_version", "seed", "out_prefix", "regime", "lemma", "k", "cap",
                            "deltas", "constants"});
  ResonanceJob job;
  const std::string regime = get_string(root, "", "regime", "", true);
  if (regime == "deep") job.regime = Regime::deep;
  else if (regime == "shallow") job.regime = Regime::shallow;
  else fail("regime", "expected deep or shallow");
  const std::string lemma = get_string(root, "", "lemma", "", true);
  if (lemma == "res1") job.lemma = ResonanceLemma::res1;
  else if (lemma == "res2") job.lemma = ResonanceLemma::res2;
  else fail("lemma", "expected res1 or res2");
  job.k = static_cast<int>(get_integer(root, "", "k", 0, true));
  const int kmin = job.lemma == ResonanceLemma::res1 ? 1 : 2;
  if (job.k < kmin) fail("k", "must be >= " + std::to_string(kmin) + " for this lemma");
  job.cap = static_cast<int>(get_integer(root, "", "cap", 64));
  if (job.cap < 1 || job.cap > 128) fail("cap", "must lie in [1, 128]");
  if (!root.contains("deltas") || !root["deltas"].is_array() || root["deltas"].empty())
    fail("deltas", "expected a non-empty array");
  for (std::size_t i = 0; i < root["deltas"].size(); ++i) {
    const auto& v = root["deltas"][i];
    const std::string path = "deltas[" + std::to_string(i) + "]";
    if (v.is_string()) {
      if (v.get<std::string>() != "inf") fail(path, "expected a number or \"inf\"");
      if (job.regime == Regime::shallow) fail(path, "the shallow grid has no infinite depth");
      job.deltas.push_back(std::nullopt);
    } else if (v.is_number()) {
      const double d = v.get<double>();
      if (job.regime == Regime::deep && !(d >= 2.0)) fail(path, "deep regime requires delta >= 2");
      if (job.regime == Regime::shallow && !(d > 0.0 && d < 1.0))
        fail(path, "shallow regime requires 0 < delta < 1");
      job.deltas.push_back(d);
    } else {
      fail(path, "expected a number or \"inf\"");
    }
  }
  if (root.contains("constants")) {
    const auto& cc = root["constants"];
    reject_unknown(cc, "constants", {"similar", "much_greater", "n0", "size_factor", "floor"});
    job.constants.similar = get_number(cc, "constants", "similar", job.constants.similar);
    job.constants.much_greater =
        get_number(cc, "constants", "much_greater", job.constants.much_greater);
    job.constants.n0 = static_cast<int>(get_integer(cc, "constants", "n0", job.constants.n0));
    job.constants.size_factor =
        get_number(cc, "constants", "size_factor", job.constants.size_factor);
    job.constants.floor = get_number(cc, "constants", "floor", job.constants.floor);
    if (!(job.constants.similar >= 1.0)) fail("constants.similar", "must be >= 1");
    if (!(job.constants.much_greater >= 1.0)) fail("constants.much_greater", "must be >= 1");
    if (job.constants.n0 < 0) fail("constants.n0", "must be >= 0");
    if (!(job.constants.size_factor >= 0.0)) fail("constants.size_factor", "must be >= 0");
  }
  echo["regime"] = regime;
  echo["lemma"] = lemma;
  echo["k"] = job.k;
  echo["cap"] = job.cap;
  json ds = json::array();
  for (const auto& d : job.deltas) {
    if (d) ds.push_back(*d);
    else ds.push_back("inf");
  }
  echo["deltas"] = ds;
  echo["constants"] = json{{"similar", job.constants.similar},
                           {"much_greater", job.constants.much_greater},
                           {"n0", job.constants.n0},
                           {"size_factor", job.constants.size_factor},
                           {"floor", job.constants.floor}};
  return job;
}

EvolveJob parse_evolve(const json& root, json& echo, std::uint64_t seed) {
  reject_unknown(root, "",
                 {"schema_version", "seed", "out_prefix", "equation", "grid", "solver", "data"});
  EvolveJob job;
  if (!root.contains("equation")) fail("equation", "missing required value");
  job.solver.spec = parse_equation(root["equation"], "equation");
  if (root.contains("grid")) job.solver.grid = parse_grid(root["grid"], "grid");
  if (root.contains("solver")) {
    const auto& s = root["solver"];
    reject_unknown(s, "solver",
                   {"T", "dt", "dealias_padding", "snapshot_stride", "linear_only", "hs_order",
                    "truncation", "dump_snapshots"});
    job.solver.final_time = get_number(s, "solver", "T", job.solver.final_time);
    if (!(job.solver.final_time >= 0.0)) fail("solver.T", "must be >= 0");
    job.solver.dt = get_number(s, "solver", "dt", 0.0);
    if (job.solver.dt < 0.0) fail("solver.dt", "must be positive (or omitted for the default)");
    job.solver.dealias_padding =
        static_cast<int>(get_integer(s, "solver", "dealias_padding", 0));
    if (job.solver.dealias_padding < 0) fail("solver.dealias_padding", "must be >= 1");
    job.solver.snapshot_stride =
        static_cast<std::size_t>(get_integer(s, "solver", "snapshot_stride", 0));
    job.solver.linear_only = get_bool(s, "solver", "linear_only", false);
    job.solver.hs_order = get_number(s, "solver", "hs_order", 1.0);
    if (s.contains("truncation")) {
      const double K = get_number(s, "solver", "truncation", 0.0);
      if (!(K >= 1.0) || K > static_cast<double>(job.solver.grid.modes()) / 3.0)
        fail("solver.truncation", "must satisfy 1 <= K <= modes/3");
      job.solver.truncation = K;
    }
    job.dump_snapshots = get_bool(s, "solver", "dump_snapshots", false);
  }
  job.data = root.contains("data") ? parse_data(root["data"], "data", seed) : DataSpec{.seed = seed};
  echo["equation"] = echo_equation(job.solver.spec);
  echo["grid"] = echo_grid(job.solver.grid);
  json s{{"T", job.solver.final_time},
         {"dt", job.solver.dt},
         {"dealias_padding", job.solver.dealias_padding},
         {"snapshot_stride", job.solver.snapshot_stride},
         {"linear_only", job.solver.linear_only},
         {"hs_order", job.solver.hs_order},
         {"dump_snapshots", job.dump_snapshots}};
  if (job.solver.truncation) s["truncation"] = *job.solver.truncation;
  echo["solver"] = s;
  echo["data"] = echo_data(job.data);
  return job;
}

ConvergeJob parse_converge(const json& root, json& echo, std::uint64_t seed,
                           const std::string& cli_regime) {
  reject_unknown(root, "",
                 {"schema_version", "seed", "out_prefix", "regime", "deltas", "k", "grid", "T",
                  "dt", "s", "min_snapshots", "truncation_K", "data", "perturbation",
                  "linear_only"});
  ConvergeJob job;
  std::string regime = get_string(root, "", "regime", "");
  if (regime.empty()) regime = cli_regime;
  if (!cli_regime.empty() && regime != cli_regime)
    fail("regime", "does not match the command line subcommand");
  if (regime == "deep") job.sweep.kind = SweepConfig::Kind::deep;
  else if (regime == "shallow") job.sweep.kind = SweepConfig::Kind::shallow;
  else if (regime == "shallow-truncated") job.sweep.kind = SweepConfig::Kind::shallow_truncated;
  else if (regime == "varying-data") job.sweep.kind = SweepConfig::Kind::deep_varying_data;
  else fail("regime", "expected deep, shallow, shallow-truncated, or varying-data");

  const bool deep = job.sweep.kind == SweepConfig::Kind::deep ||
                    job.sweep.kind == SweepConfig::Kind::deep_varying_data;
  if (!root.contains("deltas") || !root["deltas"].is_array())
    fail("deltas", "expected an array");
  for (std::size_t i = 0; i < root["deltas"].size(); ++i) {
    const auto& v = root["deltas"][i];
    const std::string path = "deltas[" + std::to_string(i) + "]";
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (deep && !(d >= 2.0)) fail(path, "deep regime requires delta >= 2");
    if (!deep && !(d > 0.0 && d < 1.0)) fail(path, "shallow regime requires 0 < delta < 1");
    job.sweep.deltas.push_back(d);
  }
  if (job.sweep.deltas.size() < 4) fail("deltas", "rate fitting requires at least 4 values");
  for (std::size_t i = 1; i < job.sweep.deltas.size(); ++i) {
    const bool ordered = deep ? job.sweep.deltas[i] > job.sweep.deltas[i - 1]
                              : job.sweep.deltas[i] < job.sweep.deltas[i - 1];
    if (!ordered) fail("deltas", "must be ordered toward the limit");
  }

  job.sweep.k = static_cast<int>(get_integer(root, "", "k", 2));
  if (job.sweep.k < 2) fail("k", "nonlinearity power must be >= 2");
  if (root.contains("grid")) job.sweep.grid = parse_grid(root["grid"], "grid");
  job.sweep.final_time = get_number(root, "", "T", 0.3);
  if (!(job.sweep.final_time > 0.0)) fail("T", "must be positive");
  job.sweep.dt = get_number(root, "", "dt", 0.0);
  if (job.sweep.dt < 0.0) fail("dt", "must be positive (or omitted for the default)");
  job.sweep.s = get_number(root, "", "s", 1.0);
  job.sweep.min_snapshots =
      static_cast<std::size_t>(get_integer(root, "", "min_snapshots", 50));
  job.sweep.linear_only = get_bool(root, "", "linear_only", false);
  if (root.contains("truncation_K")) {
    if (job.sweep.kind != SweepConfig::Kind::shallow_truncated)
      fail("truncation_K", "only the shallow-truncated sweep truncates");
    const double K = get_number(root, "", "truncation_K", 0.0);
    if (!(K >= 1.0) || K > static_cast<double>(job.sweep.grid.modes()) / 3.0)
      fail("truncation_K", "must satisfy 1 <= K <= modes/3");
    job.sweep.truncation_K = K;
  } else if (job.sweep.kind == SweepConfig::Kind::shallow_truncated) {
    fail("truncation_K", "missing required value");
  }
  job.sweep.data =
      root.contains("data") ? parse_data(root["data"], "data", seed) : DataSpec{.seed = seed};
  if (root.contains("perturbation")) {
    if (job.sweep.kind != SweepConfig::Kind::deep_varying_data)
      fail("perturbation", "only the varying-data sweep perturbs the data");
    const auto& p = root["perturbation"];
    reject_unknown(p, "perturbation", {"scaling", "amplitude", "mode"});
    const std::string scaling = get_string(p, "perturbation", "scaling", "inverse-delta");
    if (scaling == "inverse-delta")
      job.sweep.perturbation.scaling = PerturbationSpec::Scaling::inverse_delta;
    else if (scaling == "constant")
      job.sweep.perturbation.scaling = PerturbationSpec::Scaling::constant;
    else if (scaling == "none") job.sweep.perturbation.scaling = PerturbationSpec::Scaling::none;
    else fail("perturbation.scaling", "expected inverse-delta, constant, or none");
    job.sweep.perturbation.amplitude = get_number(p, "perturbation", "amplitude", 0.25);
    job.sweep.perturbation.mode =
        static_cast<int>(get_integer(p, "perturbation", "mode", 3));
    if (job.sweep.perturbation.mode < 1 ||
        job.sweep.perturbation.mode >= static_cast<int>(job.sweep.grid.modes()) / 2)
      fail("perturbation.mode", "must be a represented nonzero mode");
  }

  echo["regime"] = regime;
  echo["deltas"] = job.sweep.deltas;
  echo["k"] = job.sweep.k;
  echo["grid"] = echo_grid(job.sweep.grid);
  echo["T"] = job.sweep.final_time;
  echo["dt"] = job.sweep.dt;
  echo["s"] = job.sweep.s;
  echo["min_snapshots"] = job.sweep.min_snapshots;
  echo["linear_only"] = job.sweep.linear_only;
  if (job.sweep.truncation_K) echo["truncation_K"] = *job.sweep.truncation_K;
  echo["data"] = echo_data(job.sweep.data);
  if (job.sweep.kind == SweepConfig::Kind::deep_varying_data) {
    const char* scaling_name =
        job.sweep.perturbation.scaling == PerturbationSpec::Scaling::inverse_delta
            ? "inverse-delta"
            : (job.sweep.perturbation.scaling == PerturbationSpec::Scaling::constant ? "constant"
                                                                                     : "none");
    echo["perturbation"] = json{{"scaling", scaling_name},
                                {"amplitude", job.sweep.perturbation.amplitude},
                                {"mode", job.sweep.perturbation.mode}};
  }
  return job;
}

CheckJob parse_check(const json& root, json& echo, int /*threads*/) {
  reject_unknown(root, "",
                 {"schema_version", "seed", "out_prefix", "modes", "T", "resonance_cap"});
  CheckJob job;
  const auto modes = get_integer(root, "", "modes", 128);
  if (modes < 8 || (modes & (modes - 1)) != 0) fail("modes", "must be a power of two >= 8");
  job.check.modes = static_cast<std::size_t>(modes);
  job.check.final_time = get_number(root, "", "T", 0.2);
  if (!(job.check.final_time > 0.0)) fail("T", "must be positive");
  job.check.resonance_cap = static_cast<int>(get_integer(root, "", "resonance_cap", 24));
  if (job.check.resonance_cap < 1 || job.check.resonance_cap > 128)
    fail("resonance_cap", "must lie in [1, 128]");
  echo["modes"] = job.check.modes;
  echo["T"] = job.check.final_time;
  echo["resonance_cap"] = job.check.resonance_cap;
  return job;
}

}  // namespace

std::string command_name(Command c) {
  switch (c) {
    case Command::symbols: return "symbols";
    case Command::resonance: return "resonance";
    case Command::evolve: return "evolve";
    case Command::converge: return "converge";
    case Command::check: return "check";
  }
  return "?";
}

RunConfig parse_config(const std::string& json_text, Command command,
                       const std::string& converge_regime) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("(root): malformed JSON: ") + e.what());
  }
  if (!root.is_object()) fail("(root)", "expected an object");

  RunConfig cfg;
  cfg.command = command;
  cfg.schema_version = static_cast<int>(get_integer(root, "", "schema_version", 1));
  if (cfg.schema_version != 1) fail("schema_version", "this binary supports version 1");
  cfg.seed = static_cast<std::uint64_t>(get_integer(root, "", "seed", 2024));
  cfg.out_prefix = get_string(root, "", "out_prefix", cfg.out_prefix);

  json echo;
  echo["schema_version"] = cfg.schema_version;
  echo["seed"] = cfg.seed;
  echo["out_prefix"] = cfg.out_prefix;
  echo["command"] = command_name(command);

  switch (command) {
    case Command::symbols: cfg.job = parse_symbols(root, echo); break;
    case Command::resonance: cfg.job = parse_resonance(root, echo); break;
    case Command::evolve: cfg.job = parse_evolve(root, echo, cfg.seed); break;
    case Command::converge: cfg.job = parse_converge(root, echo, cfg.seed, converge_regime); break;
    case Command::check: cfg.job = parse_check(root, echo, 1); break;
  }
  cfg.echo = echo.dump(2) + "\n";
  return cfg;
}

namespace {

json echo_as_json(const RunConfig& cfg) { return json::parse(cfg.echo); }

json report_header(const RunConfig& cfg) {
  return json{{"tool", tool_version}, {"config", echo_as_json(cfg)}};
}

std::string csv_cell(double v) { return format_double(v); }

void run_symbols(const RunConfig& cfg, const SymbolsJob& job, const std::string& prefix) {
  json files = json::array();
  for (const auto& spec : job.equations) {
    const SymbolTable table = SymbolTable::build(spec, job.grid);
    std::string csv = "mode,xi,p,K,L,q,h\n";
    const int half = job.grid.max_mode();
    for (int m = -half + 1; m <= half; ++m) {
      csv += std::to_string(m);
      csv += ',' + csv_cell(job.grid.wavenumber(m));
      csv += ',' + csv_cell(table.p(m));
      csv += ',';
      if (table.has_K()) csv += csv_cell(table.K(m));
      csv += ',';
      if (table.has_L()) csv += csv_cell(table.L(m));
      csv += ',';
      if (table.has_q()) csv += csv_cell(table.q(m));
      csv += ',';
      if (table.has_h()) csv += csv_cell(table.h(m));
      csv += '\n';
    }
    std::string slug = family_name(spec.family);
    std::transform(slug.begin(), slug.end(), slug.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    slug += "_k" + std::to_string(spec.k);
    if (spec.depth.has_delta()) slug += "_delta" + format_double(spec.depth.delta());
    const std::string path = prefix + "symbols_" + slug + ".csv";
    write_text_file(path, csv);
    files.push_back(path);
  }
  json meta = report_header(cfg);
  meta["files"] = files;
  write_text_file(prefix + "symbols_run.json", meta.dump(2) + "\n");
}

json delta_to_json(const std::optional<double>& d) {
  return d ? json(*d) : json("inf");
}

void run_resonance(const RunConfig& cfg, const ResonanceJob& job, const std::string& prefix,
                   int threads) {
  const BoundReport rep =
      job.lemma == ResonanceLemma::res1
          ? check_res1(job.regime, job.deltas, job.k, job.cap, job.constants, threads)
          : check_res2(job.regime, job.deltas, job.k, job.cap, job.constants, threads);

  json j = report_header(cfg);
  j["regime"] = regime_name(rep.regime);
  j["lemma"] = lemma_name(rep.lemma);
  j["k"] = rep.k;
  j["cap"] = rep.cap;
  j["constants"] = json{{"similar", rep.constants.similar},
                        {"much_greater", rep.constants.much_greater},
                        {"n0", rep.constants.n0},
                        {"size_factor", rep.constants.size_factor},
                        {"floor", rep.constants.floor}};
  json per = json::array();
  for (const auto& df : rep.per_delta) {
    per.push_back(json{{"delta", delta_to_json(df.delta)},
                       {"tuple_count", df.tuple_count},
                       {"min_ratio", df.min_ratio},
                       {"argmin", df.argmin},
                       {"n1_threshold", df.n1_threshold}});
  }
  j["per_delta"] = per;
  j["min_ratio"] = rep.min_ratio;
  j["indeterminate"] = rep.indeterminate;
  j["pass"] = rep.pass;
  write_text_file(prefix + "resonance_report.json", j.dump(2) + "\n");

  std::string csv = "delta,ratio,omega";
  for (int i = 1; i <= rep.k + 2; ++i) csv += ",n" + std::to_string(i);
  csv += '\n';
  for (const auto& w : rep.worst) {
    csv += format_delta(w.delta) + ',' + csv_cell(w.ratio) + ',' + csv_cell(w.omega_value);
    for (int v : w.entries) csv += ',' + std::to_string(v);
    csv += '\n';
  }
  write_text_file(prefix + "resonance_worst.csv", csv);
}

void write_snapshot_file(const std::string& path, const SpectralField& field) {
  std::string bytes;
  const char magic[9] = "ILWSNAP1";
  bytes.append(magic, 8);
  const auto M = static_cast<std::uint32_t>(field.size());
  for (int b = 0; b < 4; ++b) bytes.push_back(static_cast<char>((M >> (8 * b)) & 0xFF));
  bytes.append(4, '\0');
  const auto put = [&bytes](double v) {
    const char* p = reinterpret_cast<const char*>(&v);
    bytes.append(p, 8);  // little-endian host assumed
  };
  for (const auto& c : field.coeffs()) {
    put(c.real());
    put(c.imag());
  }
  write_text_file(path, bytes);
}

void run_evolve(const RunConfig& cfg, const EvolveJob& job, const std::string& prefix) {
  const SpectralField u0 = job.data.realize(job.solver.grid);
  const Trajectory traj = evolve(u0, job.solver);

  std::string csv = "t,mean,l2,hs,i2\n";
  for (const auto& d : traj.diagnostics) {
    csv += csv_cell(d.t) + ',' + csv_cell(d.mean) + ',' + csv_cell(d.l2) + ',' + csv_cell(d.hs) +
           ',';
    if (d.i2) csv += csv_cell(*d.i2);
    csv += '\n';
  }
  write_text_file(prefix + "evolve_diagnostics.csv", csv);

  json meta = report_header(cfg);
  meta["dt"] = traj.dt;
  meta["steps"] = traj.steps;
  meta["snapshots"] = traj.snapshots.size();
  meta["blown_up"] = traj.blown_up;
  if (traj.blown_up) meta["failure_time"] = traj.failure_time;
  if (job.dump_snapshots) {
    json files = json::array();
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      char suffix[16];
      std::snprintf(suffix, sizeof(suffix), "%05zu", i);
      const std::string path = prefix + "snap_" + suffix + ".bin";
      write_snapshot_file(path, traj.snapshots[i].field);
      files.push_back(path);
    }
    meta["snapshot_files"] = files;
  }
  write_text_file(prefix + "evolve_run.json", meta.dump(2) + "\n");
}

void run_converge(const RunConfig& cfg, const ConvergeJob& job, const std::string& prefix) {
  ConvergenceReport rep;
  switch (job.sweep.kind) {
    case SweepConfig::Kind::deep: rep = deep_water_sweep(job.sweep); break;
    case SweepConfig::Kind::shallow: rep = shallow_water_sweep(job.sweep); break;
    case SweepConfig::Kind::shallow_truncated: rep = truncated_shallow_sweep(job.sweep); break;
    case SweepConfig::Kind::deep_varying_data: rep = varying_data_sweep(job.sweep); break;
  }

  const std::string kind = sweep_kind_name(rep.kind);
  std::string csv = "delta,error_hsm1,error_hs\n";
  for (std::size_t i = 0; i < rep.deltas.size(); ++i)
    csv += csv_cell(rep.deltas[i]) + ',' + csv_cell(rep.error_low[i]) + ',' +
           csv_cell(rep.error_high[i]) + '\n';
  write_text_file(prefix + "converge_" + kind + ".csv", csv);

  json j = report_header(cfg);
  j["regime"] = kind;
  j["s"] = rep.s;
  j["deltas"] = rep.deltas;
  j["error_hsm1"] = rep.error_low;
  j["error_hs"] = rep.error_high;
  j["fit"] = json{{"slope", rep.fit.slope},
                  {"intercept", rep.fit.intercept},
                  {"residual", rep.fit.residual}};
  j["monotone_decreasing"] = rep.monotone_decreasing;
  j["converged"] = rep.converged;
  if (rep.kind == SweepConfig::Kind::deep || rep.kind == SweepConfig::Kind::deep_varying_data)
    j["fitted_constant"] = rep.fitted_constant;
  if (rep.scaling_check_delta) {
    j["scaling_check"] = json{{"delta", *rep.scaling_check_delta},
                              {"relative_error", *rep.scaling_check_error}};
  }
  if (rep.truncation_gap) j["truncation_gap"] = *rep.truncation_gap;
  if (!rep.linear_bound.empty()) {
    json lb = json::array();
    for (const auto& b : rep.linear_bound)
      lb.push_back(json{{"delta", b.delta},
                        {"error_l2", b.error_l2},
                        {"bound", b.bound},
                        {"ok", b.ok}});
    j["linear_bound"] = lb;
  }
  j["runtime"] = json{{"grid_modes", rep.grid_modes},
                      {"dt", rep.dt},
                      {"steps", rep.steps},
                      {"snapshots", rep.snapshots}};
  write_text_file(prefix + "converge_" + kind + "_report.json", j.dump(2) + "\n");
}

int run_check_command(const RunConfig& cfg, const CheckJob& job, const std::string& prefix,
                      int threads) {
  CheckConfig cc = job.check;
  cc.threads = threads;
  const CheckReport rep = run_check(cc);
  json j = report_header(cfg);
  json items = json::array();
  json failures = json::array();
  for (const auto& item : rep.items) {
    json it{{"name", item.name},
            {"measured", item.measured},
            {"comparison", item.comparison},
            {"hard", item.hard},
            {"pass", item.pass}};
    if (!item.note.empty()) it["note"] = item.note;
    items.push_back(it);
    if (item.hard && !item.pass) failures.push_back(item.name);
  }
  j["items"] = items;
  j["failures"] = failures;
  j["pass"] = rep.pass;
  write_text_file(prefix + "check.json", j.dump(2) + "\n");
  return rep.pass ? 0 : 1;
}

}  // namespace

int run(const RunConfig& config, const std::string& out_prefix_override, int threads) {
  const std::string prefix =
      out_prefix_override.empty() ? config.out_prefix : out_prefix_override;
  switch (config.command) {
    case Command::symbols:
      run_symbols(config, std::get<SymbolsJob>(config.job), prefix);
      return 0;
    case Command::resonance:
      run_resonance(config, std::get<ResonanceJob>(config.job), prefix, threads);
      return 0;
    case Command::evolve:
      run_evolve(config, std::get<EvolveJob>(config.job), prefix);
      return 0;
    case Command::converge:
      run_converge(config, std::get<ConvergeJob>(config.job), prefix);
      return 0;
    case Command::check:
      return run_check_command(config, std::get<CheckJob>(config.job), prefix, threads);
  }
  return 2;
}

}  // namespace ilw
