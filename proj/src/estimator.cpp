#include "pmmh/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace pmmh {

double logsumexp(std::span<const double> values) {
  double max = kLogZero;
  for (double v : values) {
    if (v > max) max = v;
  }
  if (max == kLogZero) return kLogZero;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

namespace {

// Fill buffer writer shared by draw_missing and the estimator hot path. The
// proposal table is resolved once per theta; values land in cell order.
bool draw_into(const Dataset& data, const ModelSpec& spec, const ConditionalTable& proposals,
               RngStream& stream, MissingFill& fill, double& log_q) {
  log_q = 0.0;
  const auto& cells = data.missing_cells();
  fill.values.resize(cells.size());
  const FilledValues x(data, fill);
  for (std::size_t t = 0; t < cells.size(); ++t) {
    const MissingCell& cell = cells[t];
    const int entry = spec.proposal_entry_for(cell.col);
    if (entry < 0) {
      throw std::invalid_argument("no importance proposal for column " +
                                  data.column_names()[cell.col]);
    }
    const int row = cell.row;
    // Cells are ordered row-major, so within a row every earlier column is
    // already filled when its value is requested here.
    const auto resolved =
        proposals.resolve(static_cast<std::size_t>(entry), [&](int j) { return x(row, j); });
    if (!resolved) return false;
    const double v = resolved->sample(stream);
    fill.values[t] = v;
    log_q += resolved->log_pdf(v);
  }
  return true;
}

}  // namespace

DrawResult draw_missing(const Dataset& data, const ModelSpec& spec, const ParamVector& theta,
                        RngStream& stream) {
  DrawResult out;
  const ConditionalTable proposals(spec.is_proposals, theta.alpha);
  out.ok = draw_into(data, spec, proposals, stream, out.fill, out.log_q);
  return out;
}

LogLikEstimate estimate_loglik(const Dataset& data, const ModelSpec& spec, const ParamVector& theta,
                               int n_samples, std::int64_t iteration, std::uint64_t root_seed,
                               WorkerPool& pool) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be at least 1");
  LogLikEstimate est;
  est.n_samples = n_samples;
  est.root_seed = root_seed;
  est.iteration = iteration;

  if (data.missing_cells().empty()) {
    // Zero-variance case: no fill needed, the estimate is exact for any N.
    const MissingFill empty;
    est.log_value = log_mechanism(data, empty, spec, theta.phi) +
                    log_cond_likelihood(data, empty, spec, theta.beta);
    return est;
  }

  const ConditionalTable proposals(spec.is_proposals, theta.alpha);
  std::vector<double> log_weights(static_cast<std::size_t>(n_samples), kLogZero);
  pool.parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t k) {
    RngStream stream(root_seed, static_cast<std::uint64_t>(iteration), k + 1);
    MissingFill fill;
    double log_q = 0.0;
    if (!draw_into(data, spec, proposals, stream, fill, log_q)) return;
    const double num = log_mechanism(data, fill, spec, theta.phi) +
                       log_cond_likelihood(data, fill, spec, theta.beta) +
                       log_covariate_model(data, fill, spec, theta.alpha);
    if (num == kLogZero) return;
    log_weights[k] = num - log_q;
  });

  est.log_value = logsumexp(log_weights) - std::log(static_cast<double>(n_samples));
  return est;
}

VarianceReport loglik_variance(const Dataset& data, const ModelSpec& spec, const ParamVector& theta,
                               int n_samples, int replicates, std::uint64_t root_seed,
                               WorkerPool& pool, std::int64_t iteration_offset) {
  if (replicates < 2) throw std::invalid_argument("variance needs at least 2 replicates");
  VarianceReport report;
  report.log_values.reserve(replicates);
  for (int r = 0; r < replicates; ++r) {
    const LogLikEstimate est =
        estimate_loglik(data, spec, theta, n_samples, iteration_offset + r, root_seed, pool);
    report.log_values.push_back(est.log_value);
    if (est.log_value == kLogZero) report.degenerate += 1;
  }
  if (report.degenerate > 0) {
    report.variance = 1.0 / 0.0;
    return report;
  }
  bool constant = true;
  for (double v : report.log_values) constant = constant && v == report.log_values[0];
  if (constant) return report;  // exactly zero variance (e.g. nothing missing)
  double mean = 0.0;
  for (double v : report.log_values) mean += v;
  mean /= replicates;
  double ss = 0.0;
  for (double v : report.log_values) ss += (v - mean) * (v - mean);
  report.variance = ss / (replicates - 1);
  return report;
}

}  // namespace pmmh
