#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ilw/config.hpp"
#include "json.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int dispatch(ilw::Command command, const std::string& config_path, const std::string& out,
             int threads, const std::string& regime) {
  const auto cfg = ilw::parse_config(slurp(config_path), command, regime);
  return ilw::run(cfg, out, threads);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral simulation and verification suite for the ILW equation family"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_prefix;
  int threads = 1;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_prefix, "output path prefix (overrides the config)");
    sub->add_option("--threads", threads, "worker threads for parallel enumeration")
        ->check(CLI::PositiveNumber);
  };

  auto* symbols = app.add_subcommand("symbols", "dump per-mode dispersion symbol tables as CSV");
  add_common(symbols);
  auto* resonance =
      app.add_subcommand("resonance", "brute-force resonance lower-bound floors");
  add_common(resonance);
  auto* evolve = app.add_subcommand("evolve", "integrate one family member and log diagnostics");
  add_common(evolve);
  auto* converge = app.add_subcommand(
      "converge", "depth sweeps against the limiting equation with rate fitting");
  std::string regime;
  converge->add_option("regime", regime,
                       "deep | shallow | shallow-truncated | varying-data")
      ->check(CLI::IsMember({"deep", "shallow", "shallow-truncated", "varying-data"}));
  add_common(converge);
  auto* check = app.add_subcommand("check", "run the full invariant suite");
  add_common(check);

  CLI11_PARSE(app, argc, argv);

  try {
    if (symbols->parsed()) return dispatch(ilw::Command::symbols, config_path, out_prefix, threads, "");
    if (resonance->parsed())
      return dispatch(ilw::Command::resonance, config_path, out_prefix, threads, "");
    if (evolve->parsed()) return dispatch(ilw::Command::evolve, config_path, out_prefix, threads, "");
    if (converge->parsed())
      return dispatch(ilw::Command::converge, config_path, out_prefix, threads, regime);
    if (check->parsed()) return dispatch(ilw::Command::check, config_path, out_prefix, threads, "");
  } catch (const ilw::ConfigError& e) {
    std::cerr << "{\"error\":\"config\",\"message\":" << nlohmann::json(e.what()).dump() << "}\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"runtime\",\"message\":" << nlohmann::json(e.what()).dump() << "}\n";
    return 2;
  }
  return 2;
}
