#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dirac/report.hpp"

namespace {

// 0 success, 1 bad input, 2 condition check failed, 3 numerical abort.
int solve(const std::string& config_path, const std::string& out_dir, const std::string& tasks, int grid_points) {
  using namespace dirac;
  try {
    RunConfig cfg = load_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (grid_points > 0) {
      cfg.grid.n_points = grid_points;
      validate_grid(cfg.grid);
    }
    if (!tasks.empty()) {
      cfg.tasks.clear();
      std::stringstream ss(tasks);
      for (std::string name; std::getline(ss, name, ',');) {
        const auto t = parse_task(name);
        if (!t) throw SpecError("unknown task '" + name + "'");
        if (std::find(cfg.tasks.begin(), cfg.tasks.end(), *t) == cfg.tasks.end()) cfg.tasks.push_back(*t);
      }
    }
    const RunResult r = run(cfg);
    for (const std::string& f : r.files) std::cout << f << '\n';
    if (r.exit_code == 2) std::cerr << "condition check failed: " << r.report.conditions->message << '\n';
    return r.exit_code;
  } catch (const NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of 2x2 Dirac-type integro-differential systems with polynomial boundary conditions"};
  app.require_subcommand(1);

  std::string config, out_dir, tasks;
  int grid_points = 0;
  auto* cmd = app.add_subcommand("solve", "Run the tasks of a JSON config");
  cmd->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  cmd->add_option("--tasks", tasks, "Comma-separated task list (overrides tasks)");
  cmd->add_option("--grid-points", grid_points, "Grid size (odd, >= 33)");

  CLI11_PARSE(app, argc, argv);
  return solve(config, out_dir, tasks, grid_points);
}
