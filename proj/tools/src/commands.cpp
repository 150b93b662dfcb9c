#include "fcomp/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fcomp/cli/config.hpp"
#include "fcomp/cli/io.hpp"
#include "fcomp/dictionary.hpp"
#include "fcomp/errors.hpp"
#include "fcomp/evaluation.hpp"
#include "fcomp/signal_model.hpp"

namespace fcomp::cli {
namespace {

bool same_value(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

void check_radar_match(const RadarConfig& config, const RadarConfig& file) {
  if (config.ms_count != file.ms_count || config.mc_count != file.mc_count)
    throw ValidationError("solve: measurement holds " + std::to_string(file.sample_count()) + " samples (" +
                          std::to_string(file.ms_count) + " x " + std::to_string(file.mc_count) +
                          "), config expects " + std::to_string(config.sample_count()));
  if (!same_value(config.f0, file.f0) || !same_value(config.bandwidth, file.bandwidth) ||
      !same_value(config.ts, file.ts) || !same_value(config.tc, file.tc))
    throw ValidationError("solve: radar parameters of the measurement differ from the config");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

}  // namespace

void cmd_simulate(const SimulateArgs& args, std::ostream& log) {
  const ExperimentConfig cfg = load_config(args.config);
  const DuplicateTargets duplicates = validate_scene(cfg.radar, cfg.scene);
  for (const auto& [i, j] : duplicates)
    log << "warning: targets " << i << " and " << j << " share the same (r, v)\n";

  const Measurement y = synthesize(cfg.radar, cfg.scene, cfg.model, cfg.noise_sigma, cfg.seed);
  std::ostringstream measurement, truth;
  write_measurement(measurement, cfg.radar, y);
  write_scene(truth, cfg.scene);
  const std::string truth_path = args.truth_out.value_or(args.out + ".truth");
  write_file_atomic(args.out, measurement.str());
  write_file_atomic(truth_path, truth.str());
  log << "wrote " << y.size() << " samples to " << args.out << " and " << cfg.scene.size() << " targets to "
      << truth_path << '\n';
}

void cmd_solve(const SolveArgs& args, std::ostream& out) {
  const ExperimentConfig cfg = load_config(args.config);
  const auto algorithm = parse_algorithm(args.algorithm);
  if (!algorithm) throw ValidationError("solve: unknown algorithm '" + args.algorithm + "'");

  std::ifstream input = open_input(args.input);
  const MeasurementFile file = read_measurement(input);
  check_radar_match(cfg.radar, file.radar);

  std::optional<Scene> truth;
  if (args.truth) {
    std::ifstream t = open_input(*args.truth);
    truth = read_scene(t);
  }
  SolverOptions options = cfg.solver;
  options.target_count = cfg.target_count();
  if (options.target_count < 1 && truth) options.target_count = static_cast<int>(truth->size());
  if (options.target_count < 1) throw ValidationError("solve: K must be given in the config (K = ...)");
  if (truth && truth->size() != static_cast<std::size_t>(options.target_count))
    throw ValidationError("solve: truth file holds " + std::to_string(truth->size()) + " targets, K is " +
                          std::to_string(options.target_count));

  const ParamGrid grid = build_grid(cfg.radar, cfg.range_bins, cfg.speed_bins, cfg.normalization);
  const SolverReport report = is_factorized(*algorithm)
                                  ? solve(file.measurement, FactorizedDictionary(cfg.radar, grid), options, *algorithm)
                                  : solve(file.measurement, VectorDictionary::exact(cfg.radar, grid), options, *algorithm);

  std::vector<double> errors;
  if (truth) {
    std::vector<Point2> truths, estimates;
    for (const Target& t : *truth) truths.push_back({t.r, t.v});
    for (const Estimate& e : report.estimates) estimates.push_back({e.r_hat, e.v_hat});
    const std::vector<int> perm = associate(cfg.radar, truths, estimates);
    errors.assign(estimates.size(), 0.0);
    for (std::size_t k = 0; k < truths.size(); ++k)
      errors[static_cast<std::size_t>(perm[k])] = error_ek(cfg.radar, truths[k], estimates[static_cast<std::size_t>(perm[k])]);
  }

  std::ostringstream table;
  table << "k,r_hat,v_hat,abs_alpha,phase_rad" << (truth ? ",E_k" : "") << '\n';
  for (std::size_t k = 0; k < report.estimates.size(); ++k) {
    const Estimate& e = report.estimates[k];
    table << k << ',' << format_number(e.r_hat, 9) << ',' << format_number(e.v_hat, 9) << ','
          << format_number(std::abs(e.alpha_hat), 9) << ',' << format_number(std::arg(e.alpha_hat), 9);
    if (truth) table << ',' << format_number(errors[k], 9);
    table << '\n';
  }
  if (args.out) write_file_atomic(*args.out, table.str());
  out << table.str();
}

void cmd_bench(const BenchArgs& args, std::ostream& out) {
  BenchRequest request = args.request;
  if (args.config) request.config = load_config(*args.config);
  const BenchPlan plan = make_plan(request);
  const AggregateResult result = run_sweep(plan.spec);
  const std::vector<ResultRow> rows = make_rows(plan, result);

  std::ostringstream csv;
  write_results_csv(csv, plan, rows);
  write_file_atomic(args.out, csv.str());
  if (!args.quiet) print_summary(out, plan, rows);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Off-the-grid FMCW range/speed estimation with (factorized) continuous OMP"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Synthesize a measurement from a config scene");
  simulate->add_option("--config", sim.config, "Experiment config file")->required();
  simulate->add_option("--out", sim.out, "Measurement output file")->required();
  simulate->add_option("--truth-out", sim.truth_out, "Scene output file (default <out>.truth)");

  SolveArgs sol;
  auto* solve_cmd = app.add_subcommand("solve", "Estimate targets from a measurement file");
  solve_cmd->add_option("--config", sol.config, "Experiment config file")->required();
  solve_cmd->add_option("--input", sol.input, "Measurement file")->required();
  solve_cmd->add_option("--truth", sol.truth, "Ground-truth scene file; adds an E_k column");
  solve_cmd->add_option("--algorithm", sol.algorithm, "omp | f_omp | comp | f_comp")->required();
  solve_cmd->add_option("--out", sol.out, "Also write the estimates table here");

  BenchArgs bench;
  std::optional<int> trials, threads;
  std::optional<std::uint64_t> seed;
  auto* bench_cmd = app.add_subcommand("bench", "Monte-Carlo sweeps; writes CSV and prints a summary");
  bench_cmd->add_option("--preset", bench.request.preset, "fig1 | fig2 | fig3 | custom")->required();
  bench_cmd->add_option("--trials", trials, "Trials per point (default 200)");
  bench_cmd->add_option("--seed", seed, "Base seed");
  bench_cmd->add_option("--threads", threads, "Worker threads (0: all cores)");
  bench_cmd->add_option("--nstar", bench.request.nstar, "Grid sizes N* (fig1, fig2, custom)")->delimiter(',');
  bench_cmd->add_option("--sizes", bench.request.sizes, "Ms and Mc values (fig3)")->delimiter(',');
  bench_cmd->add_option("--config", bench.config, "Config file for the custom preset");
  bench_cmd->add_option("--out", bench.out, "CSV output file")->required();
  bench_cmd->add_flag("--quiet", bench.quiet, "Do not print the summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*simulate) {
      cmd_simulate(sim, std::cerr);
    } else if (*solve_cmd) {
      cmd_solve(sol, std::cout);
    } else if (*bench_cmd) {
      bench.request.trials = trials;
      bench.request.seed = seed;
      bench.request.threads = threads;
      cmd_bench(bench, std::cout);
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace fcomp::cli
