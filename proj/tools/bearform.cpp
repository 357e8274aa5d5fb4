#include <iostream>

#include <CLI11.hpp>

#include "bearform/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"bearform: bearing-based formation tracking simulator for multi-quadrotor teams"};
  app.require_subcommand(1);

  std::string check_file;
  auto* check = app.add_subcommand("check", "validate a scenario (topology, gains, bearing excitation)");
  check->add_option("file", check_file, "scenario file or bundled scenario name")->required();

  std::string run_file;
  std::uint64_t seed = 0;
  double duration = 0.0;
  std::string out_dir;
  bool force = false;
  auto* run = app.add_subcommand("run", "simulate a scenario and write CSV and summary");
  run->add_option("file", run_file, "scenario file or bundled scenario name")->required();
  auto* seed_opt = run->add_option("--seed", seed, "override meta.seed");
  auto* duration_opt = run->add_option("--duration", duration, "override sim.duration [s]");
  auto* out_opt = run->add_option("--out", out_dir, "directory for the output files");
  run->add_flag("--force", force, "run even when checks fail");

  app.add_subcommand("list-scenarios", "list bundled scenarios");

  std::string export_dir;
  auto* exp = app.add_subcommand("export", "write bundled scenarios as JSON files");
  exp->add_option("dir", export_dir, "target directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bearform::kExitUsage;
  }

  if (check->parsed()) return bearform::cmd_check(check_file, std::cout, std::cerr);
  if (run->parsed()) {
    bearform::RunOverrides o;
    if (*seed_opt) o.seed = seed;
    if (*duration_opt) o.duration = duration;
    if (*out_opt) o.out_dir = out_dir;
    o.force = force;
    return bearform::cmd_run(run_file, o, std::cout, std::cerr);
  }
  if (exp->parsed()) return bearform::cmd_export(export_dir, std::cout, std::cerr);
  return bearform::cmd_list_scenarios(std::cout);
}
