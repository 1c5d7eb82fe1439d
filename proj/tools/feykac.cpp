// feykac <command> [--config FILE] [--set key=value]... [--out PATH]
//        [--format csv|json] [--seed N] [--show-config]
//
// Exit status: 0 success, 1 compare found a delta outside tolerance,
// 2 usage or configuration error, 3 numerical or catalog error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "feykac/cli/commands.hpp"

namespace {

void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw feykac::cli::ConfigError("cannot open '" + path + "' for writing");
    out << text;
    if (!out.flush()) throw feykac::cli::ConfigError("failed writing '" + path + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace feykac::cli;

  CLI::App app{"Heat equation of the perturbed harmonic oscillator: Feynman-Kac Monte Carlo, splitting and "
               "Crank-Nicolson solvers"};
  std::string command;
  std::string config_file;
  std::vector<std::string> settings;
  std::string out;
  std::string format;
  std::string seed;
  bool show_config = false;

  app.add_option("command", command, "oracle | mc | split | pde | compare | converge")->required();
  app.add_option("--config", config_file, "JSON file of settings");
  app.add_option("--set", settings, "override one setting, key=value (repeatable)")->allow_extra_args(false);
  app.add_option("--out", out, "output file (default stdout)");
  app.add_option("--format", format, "csv or json");
  app.add_option("--seed", seed, "master seed");
  app.add_flag("--show-config", show_config, "print the effective configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg;
  try {
    if (!config_file.empty()) load_config_file(cfg, config_file);
    cfg.command = command;
    for (const auto& s : settings) apply_assignment(cfg, s);
    if (!out.empty()) apply_setting(cfg, "out", out);
    if (!format.empty()) apply_setting(cfg, "format", format);
    if (!seed.empty()) apply_setting(cfg, "seed", seed);
    validate(cfg);
  } catch (const std::exception& e) {
    std::cerr << "feykac: " << e.what() << "\n";
    return 2;
  }

  if (show_config) {
    std::cout << to_json(cfg).dump(2) << "\n";
    return 0;
  }

  CommandResult result;
  std::string text;
  try {
    result = run_command(cfg);
    text = render(cfg, result);
  } catch (const ConfigError& e) {
    std::cerr << "feykac: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "feykac: " << e.what() << "\n";
    return 3;
  }

  try {
    if (cfg.out.empty()) {
      std::cout << text;
      std::cout.flush();
    } else {
      write_atomically(cfg.out, text);
    }
  } catch (const std::exception& e) {
    std::cerr << "feykac: " << e.what() << "\n";
    return 2;
  }
  return result.pass ? 0 : 1;
}
