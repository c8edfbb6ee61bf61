#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "criteria.hpp"
#include "tsra/config.hpp"
#include "tsra/errors.hpp"
#include "tsra/metrics.hpp"
#include "tsra/orchestrator.hpp"
#include "tsra/report.hpp"

namespace tsra::cli {

namespace {

namespace fs = std::filesystem;

struct Scenario {
  std::string config_path;
  std::int64_t slots = 0;
  std::int64_t seed = -1;
};

void add_scenario(CLI::App* app, Scenario& s) {
  app->add_option("--config", s.config_path, "scenario file (defaults to the built-in parameter table)");
  app->add_option("--slots", s.slots, "horizon override, a multiple of system.slots_per_frame")
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", s.seed, "master seed override")->check(CLI::NonNegativeNumber);
}

SimConfig load(const Scenario& s) {
  SimConfig c = s.config_path.empty() ? SimConfig{} : load_config(s.config_path);
  if (s.seed >= 0) c.seed = static_cast<std::uint64_t>(s.seed);
  if (s.slots > 0) {
    if (s.slots % c.slots_per_frame != 0)
      throw ConfigError("--slots " + std::to_string(s.slots) + " is not a multiple of " +
                        std::to_string(c.slots_per_frame) + " slots per frame");
    c.frames = s.slots / c.slots_per_frame;
  }
  expand_defaults(c);
  validate(c);
  return c;
}

ControllerKind controller_or_throw(const std::string& name) {
  auto k = parse_controller(name);
  if (!k) throw ConfigError("unknown controller '" + name + "'");
  return *k;
}

void print_warnings(const SimConfig& c, std::ostream& err) {
  for (const auto& w : validate(c)) err << "warning: " << w << '\n';
}

Summary summary_at(const fs::path& p) {
  return read_summary(fs::is_directory(p) ? p / "summary.json" : p);
}

double reduction_pct(double ours, double theirs) { return theirs == 0.0 ? 0.0 : 100.0 * (1.0 - ours / theirs); }

std::string tag(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string self_path(const char* argv0) {
  std::error_code ec;
  auto p = fs::read_symlink("/proc/self/exe", ec);
  return ec ? std::string(argv0) : p.string();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-timescale resource allocation for a hybrid-energy base station"};
  app.require_subcommand(1);

  Scenario run_s;
  std::string run_controller = "proposed";
  std::string run_out;
  auto* run_cmd = app.add_subcommand("run", "simulate one controller and write slots.csv, frames.csv, summary.json");
  add_scenario(run_cmd, run_s);
  run_cmd->add_option("--controller", run_controller, "proposed | baseline1 | baseline2 | baseline3");
  run_cmd->add_option("--out", run_out, "output directory")->required();

  Scenario sweep_s;
  std::vector<double> v_grid{10, 100, 1000};
  std::vector<std::string> sweep_controllers{"proposed"};
  std::vector<std::int64_t> sweep_seeds;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "fan out over V, controllers and seeds");
  add_scenario(sweep_cmd, sweep_s);
  sweep_cmd->add_option("--v-grid", v_grid, "comma separated V values")->delimiter(',');
  sweep_cmd->add_option("--controllers", sweep_controllers, "comma separated controllers")->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep_seeds, "comma separated seeds")->delimiter(',');
  sweep_cmd->add_option("--out", sweep_out, "output directory")->required();

  std::string cmp_a, cmp_b;
  auto* compare_cmd = app.add_subcommand("compare", "relative deltas of run A against reference run B");
  compare_cmd->add_option("A", cmp_a, "summary.json or run directory")->required();
  compare_cmd->add_option("B", cmp_b, "summary.json or run directory of the reference")->required();

  std::vector<int> only;
  std::string work_dir;
  std::string cli_path;
  auto* check_cmd = app.add_subcommand("check", "run the acceptance criteria");
  check_cmd->add_option("--only", only, "comma separated criterion numbers")->delimiter(',');
  check_cmd->add_option("--work-dir", work_dir, "scratch directory for CLI outputs");
  check_cmd->add_option("--cli", cli_path, "binary used by the determinism criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (*run_cmd) {
      const auto c = load(run_s);
      print_warnings(c, err);
      const auto result = run(c, controller_or_throw(run_controller));
      write_run(run_out, result);
      const auto s = summarize(result);
      out << to_string(result.controller) << ": cost " << s.total_cost_rmb << " RMB, avg QoE "
          << s.avg_qoe << ", backlog PAR " << s.backlog_par << " -> " << run_out << '\n';
      return 0;
    }

    if (*sweep_cmd) {
      const auto base = load(sweep_s);
      print_warnings(base, err);
      if (sweep_seeds.empty()) sweep_seeds.push_back(static_cast<std::int64_t>(base.seed));
      fs::create_directories(sweep_out);
      std::ofstream csv(fs::path(sweep_out) / "sweep.csv");
      csv << "controller,seed,V_unitless,avg_backlog_mbit,avg_qoe_unitless,avg_objective_unitless,"
             "total_cost_rmb,backlog_par_ratio,arrival_par_ratio,run_dir\n";
      csv.precision(17);
      for (const auto& name : sweep_controllers) {
        const auto kind = controller_or_throw(name);
        for (auto seed : sweep_seeds) {
          for (double V : v_grid) {
            auto c = base;
            c.seed = static_cast<std::uint64_t>(seed);
            c.V = V;
            validate(c);
            const auto result = run(c, kind);
            const std::string dir = std::string(to_string(kind)) + "_V" + tag(V) + "_seed" + std::to_string(seed);
            write_run(fs::path(sweep_out) / dir, result);
            const auto s = summarize(result);
            csv << to_string(kind) << ',' << seed << ',' << V << ',' << s.avg_backlog_mbit << ','
                << s.avg_qoe << ',' << s.avg_objective << ',' << s.total_cost_rmb << ','
                << s.backlog_par << ',' << s.arrival_par << ',' << dir << '\n';
            out << dir << '\n';
          }
        }
      }
      return 0;
    }

    if (*compare_cmd) {
      const auto a = summary_at(cmp_a);
      const auto b = summary_at(cmp_b);
      out << "A: " << a.controller << " (seed " << a.seed << ")\n";
      out << "B: " << b.controller << " (seed " << b.seed << ")\n";
      out << "cost_reduction_pct " << reduction_pct(a.total_cost_rmb, b.total_cost_rmb) << '\n';
      out << "backlog_par_reduction_pct " << reduction_pct(a.backlog_par, b.backlog_par) << '\n';
      out << "arrival_par_reduction_pct " << reduction_pct(a.arrival_par, b.arrival_par) << '\n';
      out << "qoe_delta_pct " << (b.avg_qoe == 0.0 ? 0.0 : 100.0 * (a.avg_qoe / b.avg_qoe - 1.0)) << '\n';
      return 0;
    }

    if (*check_cmd) {
      acceptance::Options o;
      o.cli_path = cli_path.empty() ? self_path(argv[0]) : cli_path;
      o.work_dir = work_dir.empty() ? fs::temp_directory_path() / "tsra_check" : fs::path(work_dir);
      o.only = only;
      fs::create_directories(o.work_dir);
      const auto results = acceptance::run_all(o, [&](const acceptance::Result& r) {
        out << acceptance::format(r) << '\n' << std::flush;
      });
      int failed = 0;
      for (const auto& r : results) failed += r.pass ? 0 : 1;
      out << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " criteria passed\n";
      return failed == 0 ? 0 : 3;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const ContractViolation& e) {
    err << "contract violation: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace tsra::cli
