// Acceptance suite: one line per criterion, nonzero exit when any fails.
//
// Usage: acceptance <path-to-cli-binary>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmmh/config.hpp"
#include "pmmh/csv.hpp"
#include "pmmh/diagnostics.hpp"
#include "pmmh/estimator.hpp"
#include "pmmh/sampler.hpp"
#include "pmmh/simulate.hpp"
#include "pmmh/surface.hpp"
#include "pmmh/trace_io.hpp"
#include "pmmh/tuning.hpp"
#include "test_helpers.hpp"

using namespace pmmh;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, const char* title, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] criterion %d: %s (%s; %.1f s)\n", pass ? "PASS" : "FAIL", criterion, title,
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) failures += 1;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

double inverse_logit(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

// Linear-domain eight-term enumeration of the toy's observed-data likelihood,
// written out from the model definition and independent of the engine.
double toy_exact_marginal(const pmmh::testing::BinaryToy& toy) {
  const double q = toy.theta.alpha[0];
  const double b0 = toy.theta.beta[0], b1 = toy.theta.beta[1];
  const double phi0 = toy.theta.phi[0];
  const auto& cells = toy.data.missing_cells();
  double total = 0.0;
  for (std::size_t code = 0; code < (std::size_t{1} << cells.size()); ++code) {
    std::vector<double> x(toy.data.n_rows());
    for (int i = 0; i < toy.data.n_rows(); ++i) {
      x[i] = toy.data.observed(i, 0) ? toy.data.value(i, 0) : 0.0;
    }
    double cov = 1.0;
    for (std::size_t t = 0; t < cells.size(); ++t) {
      const double v = (code >> t) & 1u ? 1.0 : 0.0;
      x[cells[t].row] = v;
      cov *= v == 1.0 ? q : 1.0 - q;
    }
    double lik = 1.0, mech = 1.0;
    for (int i = 0; i < toy.data.n_rows(); ++i) {
      const double p = inverse_logit(b0 + b1 * x[i]);
      lik *= toy.data.response(i) == 1 ? p : 1.0 - p;
      mech *= toy.data.observed(i, 0) ? inverse_logit(phi0) : 1.0 - inverse_logit(phi0);
    }
    total += mech * lik * cov;
  }
  return total;
}

// ---------------------------------------------------------------------------
// 1. Estimator unbiasedness against the 8-term enumeration oracle.
void criterion_1() {
  Timer timer;
  const auto toy = pmmh::testing::binary_toy();
  const double exact = toy_exact_marginal(toy);
  WorkerPool pool(2);
  const int replicates = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < replicates; ++r) {
    const double v =
        std::exp(estimate_loglik(toy.data, toy.spec, toy.theta, 4, r, 77001, pool).log_value);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / replicates;
  const double se = std::sqrt((sum_sq / replicates - mean * mean) / replicates);
  const double sigma = std::fabs(mean - exact) / se;
  std::ostringstream detail;
  detail << "mean exp(log p-hat) = " << mean << ", exact = " << exact << ", |diff| = " << sigma
         << " SE over " << replicates << " replicates at N = 4";
  report(1, "estimator unbiasedness (oracle equivalence)", sigma < 3.0 && timer.seconds() < 60.0,
         detail.str(), timer.seconds());
}

// ---------------------------------------------------------------------------
// 2. Pseudo-marginal exactness: exact-likelihood chain vs N = 2 and N = 64.
void criterion_2() {
  Timer timer;
  const auto toy = pmmh::testing::binary_toy();
  ProposalSpec prop;
  prop.scales.assign(toy.theta.dim(), 0.7);
  WorkerPool pool(2);
  const int iters = 200000, burn = 5000;
  const Trace exact = run_exact_chain(toy.data, toy.spec, prop, toy.theta, iters, 40100);
  bool pass = true;
  std::ostringstream detail;
  for (int n : {2, 64}) {
    const Trace pm = run_chain(toy.data, toy.spec, prop, toy.theta, iters, n, 40200 + n, pool);
    const auto cmp = pmmh::testing::compare_chains(exact, pm, burn);
    detail << "N=" << n << " worst |diff| = " << cmp.max_sigma << "x combined MCSE; ";
    pass = pass && cmp.max_sigma < 3.0;
  }
  detail << iters << " iterations each";
  report(2, "pseudo-marginal exactness", pass && timer.seconds() < 600.0, detail.str(),
         timer.seconds());
}

// ---------------------------------------------------------------------------
// 3. Simulation-study replication at desk scale.
void criterion_3(const fs::path& config_path) {
  Timer timer;
  RunConfig config = load_config(config_path);
  const SimulationResult sim = simulate_dataset(config, config.run.seed);
  const CompiledModel model = compile_model(config, sim.data);
  WorkerPool pool(static_cast<int>(std::thread::hardware_concurrency()));
  const Trace trace = run_chain(sim.data, model.spec, model.proposal, model.layout, 20000, 1000,
                                config.run.seed, pool);
  const auto rows = summarize(trace, 100);
  int covered = 0;
  double worst_rhat = 0.0;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const double truth = sim.truth.get(j);
    if (rows[j].cred_lower <= truth && truth <= rows[j].cred_upper) covered += 1;
    worst_rhat = std::max(worst_rhat, rows[j].rhat);
  }
  std::ostringstream detail;
  detail << "coverage " << covered << "/7, worst R-hat = " << worst_rhat << ", acceptance rate = "
         << static_cast<double>(trace.meta.accepted) / trace.meta.iterations
         << ", missing cells = " << sim.data.missing_cells().size() << "/100";
  report(3, "simulation-study replication (20000 iterations, N = 1000)",
         covered >= 6 && worst_rhat <= 1.3 && timer.seconds() < 7200.0, detail.str(),
         timer.seconds());
}

// ---------------------------------------------------------------------------
// 4. Variance tuning rule over N in {50, 200, 800, 3200}.
void criterion_4(const fs::path& config_path) {
  Timer timer;
  RunConfig config = load_config(config_path);
  const SimulationResult sim = simulate_dataset(config, config.run.seed);
  const CompiledModel model = compile_model(config, sim.data);
  WorkerPool pool(2);
  const std::vector<int> grid = {50, 200, 800, 3200};
  const TuneReport rep = tune(sim.data, model.spec, model.layout, grid, 100, 88100, pool);
  int inversions = 0;
  for (std::size_t g = 1; g < rep.rows.size(); ++g) {
    if (rep.rows[g].variance > rep.rows[g - 1].variance) inversions += 1;
  }
  double recommended_var = -1.0;
  for (const TuneRow& row : rep.rows) {
    if (row.n_importance == rep.recommended_n) recommended_var = row.variance;
  }
  std::ostringstream detail;
  detail << "variances";
  for (const TuneRow& row : rep.rows) detail << ' ' << row.variance;
  detail << ", inversions = " << inversions << ", recommended N = " << rep.recommended_n;
  const bool pass = inversions <= 1 && rep.recommended_n > 0 &&
                    recommended_var <= kTargetLogLikVariance && timer.seconds() < 900.0;
  report(4, "variance tuning rule", pass, detail.str(), timer.seconds());
}

// ---------------------------------------------------------------------------
// 5. Surface roughness: replication disagreement strictly decreasing in N.
void criterion_5(const fs::path& config_path) {
  Timer timer;
  RunConfig config = load_config(config_path);
  const SimulationResult sim = simulate_dataset(config, config.run.seed);
  const CompiledModel model = compile_model(config, sim.data);
  WorkerPool pool(2);
  std::vector<double> mad_by_n;
  for (int n : {2, 15, 200}) {
    SurfaceRequest req;
    req.param_a = model.layout.index_of("alpha");
    req.param_b = model.layout.index_of("beta2");
    req.a_min = 0.25;
    req.a_max = 4.0;
    req.b_min = 1.0;
    req.b_max = 5.0;
    req.steps_a = req.steps_b = 20;
    req.n_importance = n;
    req.replicates = 2;
    req.mode = SeedMode::Fresh;
    req.seed = 55000 + n;
    const auto points = surface(sim.data, model.spec, model.layout, req, pool);
    const std::size_t half = points.size() / 2;
    double mad = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      mad += std::fabs(points[i].neg_log_estimate - points[i + half].neg_log_estimate);
    }
    mad_by_n.push_back(mad / static_cast<double>(half));
  }
  std::ostringstream detail;
  detail << "mean |rep1 - rep2| at N = 2/15/200: " << mad_by_n[0] << " / " << mad_by_n[1] << " / "
         << mad_by_n[2];
  const bool pass = mad_by_n[0] > mad_by_n[1] && mad_by_n[1] > mad_by_n[2] &&
                    timer.seconds() < 1200.0;
  report(5, "surface roughness decreases in N", pass, detail.str(), timer.seconds());
}

// ---------------------------------------------------------------------------
// 6. Diagnostic closed forms.
void criterion_6() {
  Timer timer;
  bool pass = true;
  std::ostringstream detail;

  const std::vector<double> eight = {1, 2, 3, 4, 5, 6, 7, 8};
  const double rhat = split_rhat(eight);
  pass = pass && std::fabs(rhat - 2.3558437978779492) < 1e-12;
  detail << "split R-hat(1..8) = " << rhat;

  std::vector<double> grid(1000);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i + 1);
  const auto [lo, hi] = credible_interval(grid, 0.95);
  pass = pass && std::fabs(lo - 25.975) < 1e-12 && std::fabs(hi - 975.025) < 1e-12;
  detail << ", interval(1..1000) = (" << lo << ", " << hi << ")";

  const std::vector<double> flat(500, 1.25);
  pass = pass && mcse(flat) == 0.0;
  detail << ", mcse(const) = " << mcse(flat);

  report(6, "diagnostic correctness", pass, detail.str(), timer.seconds());
}

// ---------------------------------------------------------------------------
// 7. Byte-identical CLI runs across worker counts.
void criterion_7(const std::string& cli, const fs::path& config_path) {
  Timer timer;
  const fs::path dir = fs::temp_directory_path() / "pmmh_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  // Patch the shipped config onto temp paths and a quick chain.
  RunConfig config = load_config(config_path);
  config.data.path = (dir / "data.csv").string();
  config.run.iterations = 400;
  config.run.n_importance = 64;
  config.simulate->n = 60;
  const fs::path cfg = dir / "config.json";
  write_text_file(cfg, to_json(config).dump(2) + "\n");

  auto sh = [&](const std::string& cmd) { return std::system(cmd.c_str()) == 0; };
  bool pass = sh(cli + " simulate --config " + cfg.string() + " --out-dir " + dir.string() +
                 " > /dev/null");
  // simulate writes data.csv into --out-dir, which is where data.path points.
  const std::string base = cli + " run --config " + cfg.string() + " --seed 424242 ";
  pass = pass && sh(base + "--workers 1 --out-dir " + (dir / "w1").string() + " > /dev/null");
  pass = pass && sh(base + "--workers 8 --out-dir " + (dir / "w8").string() + " > /dev/null");
  pass = pass && sh(base + "--workers 1 --out-dir " + (dir / "w1b").string() + " > /dev/null");

  std::string detail = "simulate/run executions";
  if (pass) {
    const std::string w1 = read_text_file(dir / "w1" / "trace.csv");
    const std::string w8 = read_text_file(dir / "w8" / "trace.csv");
    const std::string w1b = read_text_file(dir / "w1b" / "trace.csv");
    pass = w1 == w8 && w1 == w1b && !w1.empty();
    detail = "trace bytes: workers 1 vs 8 " + std::string(w1 == w8 ? "identical" : "DIFFER") +
             ", repeat run " + std::string(w1 == w1b ? "identical" : "DIFFER");
  }
  report(7, "end-to-end determinism across worker counts", pass, detail, timer.seconds());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-cli>\n");
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path config_path = fs::path(PMMH_SOURCE_DIR) / "configs" / "sim_study.json";

  criterion_1();
  criterion_2();
  criterion_3(config_path);
  criterion_4(config_path);
  criterion_5(config_path);
  criterion_6();
  criterion_7(cli, config_path);

  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
