// Command-line front end: simulate / run / tune / surface / diagnose.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmmh/config.hpp"
#include "pmmh/csv.hpp"
#include "pmmh/diagnostics.hpp"
#include "pmmh/sampler.hpp"
#include "pmmh/simulate.hpp"
#include "pmmh/surface.hpp"
#include "pmmh/trace_io.hpp"
#include "pmmh/tuning.hpp"

namespace {

namespace fs = std::filesystem;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<int> iterations;
  std::optional<int> n_importance;
  std::optional<int> burn_in;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config = true) {
  auto* config = cmd->add_option("--config", args.config_path, "model configuration file (JSON)");
  if (needs_config) config->required();
  cmd->add_option("--out-dir", args.out_dir, "directory for output artifacts");
  cmd->add_option("--seed", args.seed, "root seed (overrides the config)");
  cmd->add_option("--workers", args.workers, "worker threads for the estimator");
  cmd->add_option("--iterations", args.iterations, "chain length (overrides the config)");
  cmd->add_option("--n-importance", args.n_importance, "importance samples per estimate");
  cmd->add_option("--burn-in", args.burn_in, "burn-in prefix dropped by diagnostics");
}

pmmh::RunConfig load_with_overrides(const CommonArgs& args) {
  pmmh::RunConfig config = pmmh::load_config(args.config_path);
  if (args.seed) config.run.seed = *args.seed;
  if (args.workers) config.run.workers = *args.workers;
  if (args.iterations) config.run.iterations = *args.iterations;
  if (args.n_importance) config.run.n_importance = *args.n_importance;
  if (args.burn_in) config.run.burn_in = *args.burn_in;
  return config;
}

pmmh::ParamVector initial_state(const pmmh::RunConfig& config, const pmmh::CompiledModel& model) {
  if (model.has_full_init) return model.layout;
  // Default initialization: a prior draw, with explicit inits kept.
  pmmh::ParamVector init = pmmh::draw_init_from_priors(model.spec, model.layout, config.run.seed);
  std::size_t flat = 0;
  for (const auto* block : {&config.alpha, &config.beta, &config.phi}) {
    for (const pmmh::ParamConfig& p : *block) {
      if (p.init) init.set(flat, *p.init);
      flat += 1;
    }
  }
  return init;
}

int cmd_simulate(const CommonArgs& args) {
  const pmmh::RunConfig config = load_with_overrides(args);
  const pmmh::SimulationResult result = pmmh::simulate_dataset(config, config.run.seed);
  const fs::path data_path = fs::path(args.out_dir) / "data.csv";
  pmmh::write_dataset_csv(data_path, result.data, config.data.response);

  nlohmann::json truth = {{"seed", config.run.seed},
                          {"alpha", result.truth.alpha},
                          {"beta", result.truth.beta},
                          {"phi", result.truth.phi}};
  nlohmann::json fractions;
  const std::vector<int> miss = result.data.missing_count_by_column();
  for (int j = 0; j < result.data.n_cols(); ++j) {
    fractions[result.data.column_names()[j]] =
        static_cast<double>(miss[j]) / result.data.n_rows();
  }
  truth["missing_fraction"] = fractions;
  pmmh::write_text_file(fs::path(args.out_dir) / "truth.json", truth.dump(2) + "\n");

  std::cout << "wrote " << data_path.string() << " (" << result.data.n_rows() << " rows)\n";
  for (int j = 0; j < result.data.n_cols(); ++j) {
    if (miss[j] > 0) {
      std::cout << "  " << result.data.column_names()[j] << ": " << miss[j] << " missing\n";
    }
  }
  return 0;
}

int cmd_run(const CommonArgs& args) {
  const pmmh::RunConfig config = load_with_overrides(args);
  const pmmh::Dataset data = pmmh::load_dataset(config.data.path, config);
  const pmmh::CompiledModel model = pmmh::compile_model(config, data);
  const pmmh::ParamVector init = initial_state(config, model);

  pmmh::WorkerPool pool(config.run.workers);
  pmmh::Trace trace = pmmh::run_chain(data, model.spec, model.proposal, init,
                                      config.run.iterations, config.run.n_importance,
                                      config.run.seed, pool);
  trace.meta.burn_in = config.run.burn_in;

  const fs::path trace_path = fs::path(args.out_dir) / "trace.csv";
  pmmh::write_trace(trace_path, trace);
  pmmh::write_trace_meta(fs::path(args.out_dir) / "trace_meta.json", trace);
  std::cout << "wrote " << trace_path.string() << "\n"
            << "acceptance rate: "
            << static_cast<double>(trace.meta.accepted) / trace.meta.iterations << "\n";
  return 0;
}

int cmd_tune(const CommonArgs& args, std::vector<int>& n_grid, int replicates) {
  const pmmh::RunConfig config = load_with_overrides(args);
  const pmmh::Dataset data = pmmh::load_dataset(config.data.path, config);
  const pmmh::CompiledModel model = pmmh::compile_model(config, data);
  if (!model.has_full_init) {
    std::cerr << "tune needs an init value for every parameter (the pilot estimate)\n";
    return 1;
  }
  pmmh::WorkerPool pool(config.run.workers);
  const pmmh::TuneReport report =
      pmmh::tune(data, model.spec, model.layout, n_grid, replicates, config.run.seed, pool);
  pmmh::write_text_file(fs::path(args.out_dir) / "tune.csv", pmmh::tune_csv(report));
  std::cout << pmmh::tune_table(report);
  return 0;
}

int cmd_surface(const CommonArgs& args, const std::string& name_a, const std::string& name_b,
                std::vector<double>& range_a, std::vector<double>& range_b, int steps,
                int replicates, const std::string& seed_mode) {
  const pmmh::RunConfig config = load_with_overrides(args);
  const pmmh::Dataset data = pmmh::load_dataset(config.data.path, config);
  const pmmh::CompiledModel model = pmmh::compile_model(config, data);
  if (!model.has_full_init) {
    std::cerr << "surface needs an init value for every parameter (the fixed point)\n";
    return 1;
  }

  pmmh::SurfaceRequest request;
  request.param_a = model.layout.index_of(name_a);
  request.param_b = model.layout.index_of(name_b);
  if (request.param_a < 0 || request.param_b < 0) {
    std::cerr << "unknown grid parameter name\n";
    return 1;
  }
  request.a_min = range_a[0];
  request.a_max = range_a[1];
  request.b_min = range_b[0];
  request.b_max = range_b[1];
  request.steps_a = request.steps_b = steps;
  request.n_importance = config.run.n_importance;
  request.replicates = replicates;
  request.seed = config.run.seed;
  if (seed_mode == "common") {
    request.mode = pmmh::SeedMode::Common;
  } else if (seed_mode == "fresh") {
    request.mode = pmmh::SeedMode::Fresh;
  } else {
    std::cerr << "--seed-mode must be 'fresh' or 'common'\n";
    return 1;
  }

  pmmh::WorkerPool pool(config.run.workers);
  const auto points = pmmh::surface(data, model.spec, model.layout, request, pool);
  const fs::path out_path = fs::path(args.out_dir) / "surface.csv";
  pmmh::write_text_file(out_path, pmmh::surface_csv(points, name_a, name_b));
  std::cout << "wrote " << out_path.string() << " (" << points.size() << " points)\n";
  return 0;
}

int cmd_diagnose(const CommonArgs& args, double rhat_threshold_flag, bool threshold_given) {
  const fs::path trace_path = fs::path(args.out_dir) / "trace.csv";
  const fs::path meta_path = fs::path(args.out_dir) / "trace_meta.json";
  const pmmh::Trace trace = pmmh::read_trace(trace_path, meta_path);

  double threshold = threshold_given ? rhat_threshold_flag : 1.1;
  int burn_in = trace.meta.burn_in;
  if (!args.config_path.empty()) {
    const pmmh::RunConfig config = load_with_overrides(CommonArgs{args});
    if (!threshold_given) threshold = config.run.rhat_threshold;
    burn_in = config.run.burn_in;
  }
  if (args.burn_in) burn_in = *args.burn_in;

  const std::vector<pmmh::SummaryRow> rows = pmmh::summarize(trace, burn_in);
  pmmh::write_text_file(fs::path(args.out_dir) / "summary.csv", pmmh::summary_csv(rows));
  std::cout << pmmh::summary_table(rows);

  bool exceeded = false;
  for (const pmmh::SummaryRow& row : rows) {
    if (!(row.rhat <= threshold)) exceeded = true;
  }
  if (exceeded) {
    std::cout << "warning: R-hat above " << threshold << " for at least one parameter\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-marginal MH estimation of logistic regression with missing covariates"};
  app.require_subcommand(1);

  CommonArgs sim_args, run_args, tune_args, surf_args, diag_args;

  CLI::App* sim = app.add_subcommand("simulate", "generate a dataset from the configured model");
  add_common(sim, sim_args);

  CLI::App* run = app.add_subcommand("run", "run the pseudo-marginal chain");
  add_common(run, run_args);

  CLI::App* tune_cmd = app.add_subcommand("tune", "log-likelihood variance over an N grid");
  add_common(tune_cmd, tune_args);
  std::vector<int> n_grid = {50, 200, 800, 3200};
  int tune_replicates = 40;
  tune_cmd->add_option("--n-grid", n_grid, "N values to evaluate");
  tune_cmd->add_option("--replicates", tune_replicates, "estimates per N");

  CLI::App* surf = app.add_subcommand("surface", "negative log estimate over a parameter grid");
  add_common(surf, surf_args);
  std::string name_a, name_b, seed_mode = "fresh";
  std::vector<double> range_a = {0.0, 1.0}, range_b = {0.0, 1.0};
  int steps = 20, surf_replicates = 2;
  surf->add_option("--param-a", name_a, "first grid parameter")->required();
  surf->add_option("--param-b", name_b, "second grid parameter")->required();
  surf->add_option("--range-a", range_a, "min max for the first parameter")->expected(2);
  surf->add_option("--range-b", range_b, "min max for the second parameter")->expected(2);
  surf->add_option("--steps", steps, "grid points per side");
  surf->add_option("--replicates", surf_replicates, "independent surface replications");
  surf->add_option("--seed-mode", seed_mode, "fresh | common fills across the grid");

  CLI::App* diag = app.add_subcommand("diagnose", "summaries and convergence diagnostics");
  add_common(diag, diag_args, /*needs_config=*/false);
  double rhat_threshold = 1.1;
  auto* thr_opt = diag->add_option("--rhat-threshold", rhat_threshold,
                                   "exit nonzero when any R-hat exceeds this");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(sim_args);
    if (run->parsed()) return cmd_run(run_args);
    if (tune_cmd->parsed()) return cmd_tune(tune_args, n_grid, tune_replicates);
    if (surf->parsed()) {
      return cmd_surface(surf_args, name_a, name_b, range_a, range_b, steps, surf_replicates,
                         seed_mode);
    }
    if (diag->parsed()) return cmd_diagnose(diag_args, rhat_threshold, thr_opt->count() > 0);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
