#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "mardot/config.hpp"
#include "mardot/sweep.hpp"

using namespace mardot;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> sweeps;
  std::string solver = "fourier";
  std::string out;
  int jobs = 1;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, Common& c, bool with_sweep) {
  cmd->add_option("--config", c.config, "key = value configuration file");
  if (with_sweep)
    cmd->add_option("--sweep", c.sweeps, "param:start:stop:count (repeatable)");
  cmd->add_option("--solver", c.solver, "evolve, fourier or both")
      ->check(CLI::IsMember({"evolve", "fourier", "both"}));
  cmd->add_option("--out", c.out, "output path (default: stdout)");
  cmd->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

std::vector<SolverKind> solvers_of(const std::string& s) {
  if (s == "both") return {SolverKind::evolve, SolverKind::fourier};
  return {parse_solver(s)};
}

RunConfig load(const Common& c) { return c.config.empty() ? RunConfig{} : load_config(c.config); }

// Writes rows as they arrive for CSV; JSON is written at the end.
int run_rows(const Common& c, SweepSpec spec) {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;
  if (!c.out.empty()) {
    file = std::make_unique<std::ofstream>(c.out);
    if (!*file) throw std::runtime_error("cannot open output '" + c.out + "'");
    os = file.get();
  }
  std::vector<PointResult> rows;
  if (c.format == "csv") {
    write_csv_header(*os);
    rows = run_sweep(spec, [&](const PointResult& r) {
      write_csv_row(*os, r);
      os->flush();
    });
  } else {
    rows = run_sweep(spec);
    *os << to_json(rows) << '\n';
  }
  int failures = 0;
  for (const PointResult& r : rows)
    if (!r.ok()) ++failures;
  if (failures) std::cerr << failures << " point(s) did not finish cleanly; see the status column\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven quantum dot between superconducting leads: steady-state currents"};
  app.require_subcommand(1);

  Common iv_opts, map_opts, point_opts;
  CLI::App* iv = app.add_subcommand("iv", "bias (or any parameter) sweep");
  add_common(iv, iv_opts, true);
  CLI::App* map = app.add_subcommand("map", "V x omega sweep with conductance dI/dV");
  add_common(map, map_opts, true);
  CLI::App* point = app.add_subcommand("point", "single point with verbose diagnostics");
  add_common(point, point_opts, false);
  std::vector<std::string> sets;
  point->add_option("--set", sets, "override a parameter, name=value (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (iv->parsed()) {
      const RunConfig cfg = load(iv_opts);
      SweepSpec spec{{}, cfg.params, cfg.settings, solvers_of(iv_opts.solver), iv_opts.jobs};
      if (iv_opts.sweeps.empty()) iv_opts.sweeps.push_back("V:0.2:8:100");
      for (const std::string& s : iv_opts.sweeps) spec.axes.push_back(parse_sweep_axis(s));
      return run_rows(iv_opts, spec);
    }
    if (map->parsed()) {
      const RunConfig cfg = load(map_opts);
      SweepSpec spec{{}, cfg.params, cfg.settings, solvers_of(map_opts.solver), map_opts.jobs};
      SweepAxis v_axis{"V", 0.2, 6.0, 60};
      SweepAxis w_axis{"omega", -3.0, 1.0, 41};
      for (const std::string& s : map_opts.sweeps) {
        SweepAxis a = parse_sweep_axis(s);
        if (a.param == "V") v_axis = a;
        else if (a.param == "omega") w_axis = a;
        else throw InvalidParameter("map sweeps V and omega only, got '" + a.param + "'");
      }
      if (spec.solvers.size() != 1) throw InvalidParameter("map needs a single solver");
      spec.axes = {v_axis, w_axis};
      const std::vector<PointResult> rows = run_sweep(spec);
      std::unique_ptr<std::ofstream> file;
      std::ostream* os = &std::cout;
      if (!map_opts.out.empty()) {
        file = std::make_unique<std::ofstream>(map_opts.out);
        os = file.get();
      }
      if (map_opts.format == "csv") {
        write_csv_header(*os);
        for (const PointResult& r : rows) write_csv_row(*os, r);
      } else {
        *os << to_json(rows) << '\n';
      }
      const ConductanceMap cm = conductance_map(v_axis.values(), w_axis.values(), rows);
      if (!map_opts.out.empty()) {
        std::string path = map_opts.out;
        if (auto dot = path.rfind('.'); dot != std::string::npos && path.find('/', dot) == std::string::npos)
          path.erase(dot);
        std::ofstream g(path + "_dIdV.csv");
        write_conductance_csv(g, cm);
      } else {
        std::cout << '\n';
        write_conductance_csv(std::cout, cm);
      }
      return 0;
    }
    if (point->parsed()) {
      RunConfig cfg = load(point_opts);
      for (const std::string& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw InvalidParameter("--set expects name=value");
        apply_config_key(cfg, s.substr(0, eq), std::stod(s.substr(eq + 1)));
      }
      const std::vector<SolverKind> solvers = solvers_of(point_opts.solver);
      std::unique_ptr<std::ofstream> file;
      std::ostream* os = &std::cout;
      if (!point_opts.out.empty()) {
        file = std::make_unique<std::ofstream>(point_opts.out);
        os = file.get();
      }
      if (point_opts.format == "json") {
        *os << point_diagnostics(cfg.params, cfg.settings, solvers) << '\n';
      } else {
        write_csv_header(*os);
        for (const PointResult& r : solve_point(cfg.params, cfg.settings, solvers)) write_csv_row(*os, r);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "mardot: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
