#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "holab/catalog.hpp"
#include "holab/run.hpp"

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw holab::schema_error("cannot read scenario file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holab: holonomy of Lie pairs and foliations, with machine-checked reports"};
  app.footer("Exit codes: 0 all checks pass, 1 numeric failure, 2 usage or schema error.");

  std::string command;
  std::string scenario_file;
  std::string builtin;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
  bool list_builtins = false;

  app.add_option("command", command,
                 "bott | holonomy | agree | differentiate | normality | rightinv | "
                 "foliation | pairdemo | all");
  auto* sopt = app.add_option("--scenario", scenario_file, "scenario JSON file");
  auto* bopt = app.add_option("--builtin", builtin, "built-in scenario name");
  sopt->excludes(bopt);
  bopt->excludes(sopt);
  app.add_option("--seed", seed, "seed for the randomized sweeps (default 0)");
  app.add_option("--out", out_dir, "directory for report.json and report.txt (default .)");
  app.add_option("--tol-scale", tol_scale, "multiply all pass/fail tolerances");
  app.add_flag("--list-builtins", list_builtins, "print built-in scenario names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list_builtins) {
    for (const auto& name : holab::builtin_names()) std::cout << name << "\n";
    return 0;
  }

  try {
    if (command.empty())
      throw holab::schema_error("missing command; run with --help for usage");
    if (!holab::known_commands().count(command))
      throw holab::schema_error("unknown command '" + command + "'");

    holab::Scenario scenario;
    if (!builtin.empty()) {
      scenario = holab::make_builtin(builtin);
    } else if (!scenario_file.empty()) {
      scenario = holab::parse_scenario_text(read_text_file(scenario_file));
    } else {
      throw holab::schema_error("provide --scenario FILE or --builtin NAME");
    }

    holab::RunOptions options;
    options.seed = seed;
    options.tol_scale = tol_scale;
    holab::RunResult result = holab::run_scenario(scenario, command, options);

    std::filesystem::create_directories(out_dir);
    holab::write_file(out_dir + "/report.json", holab::dump_deterministic(result.report));
    holab::write_file(out_dir + "/report.txt", result.text);
    std::cout << result.text;
    return result.pass ? 0 : 1;
  } catch (const holab::schema_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const holab::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
