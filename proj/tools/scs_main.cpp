// Command-line front end: run one scheme, sweep a parameter, or render
// persisted results as SVG.

#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scs/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dual-UAV secure communication and sensing simulator"};
  app.require_subcommand(1);

  scs::harness::RunOptions run_opts;
  std::uint64_t seed = 0;
  double tau = 0.0;
  auto* run = app.add_subcommand("run", "run one scheme on a scenario");
  run->add_option("--scenario", run_opts.scenario_path,
                  "scenario JSON (built-in defaults when omitted)");
  run->add_option("--scheme", run_opts.scheme, "scs|fhf|fhf-bf|single")
      ->default_val("scs");
  run->add_option("--out", run_opts.out_dir, "output directory")->required();
  auto* seed_opt = run->add_option("--seed", seed, "seed echoed into outputs");
  auto* tau_opt = run->add_option(
      "--tau", tau, "override the sensing/communication distance weight");
  run->add_flag("--log-solver", run_opts.log_solver,
                "dump per-iteration solver logs to solver_log.csv");

  scs::harness::SweepOptions sweep_opts;
  std::uint64_t sweep_seed = 0;
  auto* sweep = app.add_subcommand("sweep", "run schemes over a value list");
  sweep->add_option("--scenario", sweep_opts.scenario_path, "scenario JSON");
  sweep->add_option("--param", sweep_opts.param, "parameter name")->required();
  sweep->add_option("--values", sweep_opts.values, "value list")
      ->required()
      ->delimiter(',');
  sweep->add_option("--schemes", sweep_opts.schemes, "scheme list")
      ->delimiter(',');
  sweep->add_option("--out", sweep_opts.out_dir, "output directory")->required();
  auto* sweep_seed_opt = sweep->add_option("--seed", sweep_seed, "seed");
  sweep->add_option("--jobs", sweep_opts.jobs, "worker pool size (0: auto)");

  scs::harness::PlotOptions plot_opts;
  auto* plot = app.add_subcommand("plot", "render persisted CSVs as SVG");
  plot->add_option("--in", plot_opts.in_dir, "directory with result files")
      ->required();
  plot->add_option("--out", plot_opts.out_dir, "output directory (default: --in)");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    if (*seed_opt) run_opts.seed = seed;
    if (*tau_opt) run_opts.tau = tau;
    return scs::harness::cmd_run(run_opts);
  }
  if (sweep->parsed()) {
    if (*sweep_seed_opt) sweep_opts.seed = sweep_seed;
    return scs::harness::cmd_sweep(sweep_opts);
  }
  return scs::harness::cmd_plot(plot_opts);
}
