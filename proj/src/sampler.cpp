#include "pmmh/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace pmmh {

void ProposalSpec::validate(std::size_t dim) const {
  if (scales.size() != dim) {
    throw std::invalid_argument("proposal scale count does not match the parameter dimension");
  }
  for (double s : scales) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("proposal scales must be finite and non-negative");
    }
  }
  if (scale_matrix) {
    if (scale_matrix->rows() != dim || scale_matrix->cols() != dim) {
      throw std::invalid_argument("proposal scale matrix has wrong shape");
    }
    cholesky();  // throws unless symmetric positive definite
  }
}

Matrix ProposalSpec::cholesky() const {
  const Matrix& a = *scale_matrix;
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (a(i, j) != a(j, i)) {
        throw std::invalid_argument("proposal scale matrix must be symmetric");
      }
    }
  }
  Matrix l(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0) {
          throw std::invalid_argument("proposal scale matrix must be positive definite");
        }
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

ParamVector propose(const ParamVector& theta, const ProposalSpec& prop, RngStream& stream) {
  const std::size_t dim = theta.dim();
  prop.validate(dim);
  std::vector<double> u = to_unconstrained(theta);
  std::vector<double> z(dim);
  for (std::size_t i = 0; i < dim; ++i) z[i] = stream.normal();
  if (prop.scale_matrix) {
    const Matrix l = prop.cholesky();
    for (std::size_t i = 0; i < dim; ++i) {
      double step = 0.0;
      for (std::size_t k = 0; k <= i; ++k) step += l(i, k) * z[k];
      u[i] += step;
    }
  } else {
    for (std::size_t i = 0; i < dim; ++i) u[i] += prop.scales[i] * z[i];
  }
  return to_constrained(theta, u);
}

namespace {

double log_target_parts(const ParamVector& theta, const ModelSpec& spec) {
  const double lp = log_prior(theta, spec);
  if (lp == kLogZero) return kLogZero;
  const std::vector<double> u = to_unconstrained(theta);
  return lp + log_jacobian(u, theta.transforms);
}

}  // namespace

double accept_log_ratio(const ChainState& current, const ParamVector& proposal_theta,
                        const LogLikEstimate& proposal_estimate, const ModelSpec& spec) {
  const double prop_parts = log_target_parts(proposal_theta, spec);
  if (prop_parts == kLogZero || proposal_estimate.log_value == kLogZero) return kLogZero;
  const double prop_total = proposal_estimate.log_value + prop_parts;

  const double cur_parts = log_target_parts(current.theta, spec);
  if (cur_parts == kLogZero || current.stored_log_estimate == kLogZero) {
    return 1.0 / 0.0;  // forced acceptance out of a degenerate start
  }
  return prop_total - (current.stored_log_estimate + cur_parts);
}

std::vector<double> Trace::column(std::size_t j) const {
  std::vector<double> out(draws.rows());
  for (std::size_t i = 0; i < draws.rows(); ++i) out[i] = draws(i, j);
  return out;
}

namespace {

// Shared chain driver; `loglik(theta, iteration)` supplies either the
// importance-sampling estimate or the exact enumeration value.
template <class LogLik>
Trace drive_chain(const ModelSpec& spec, const ProposalSpec& prop, const ParamVector& init,
                  int iterations, int n_importance, std::uint64_t root_seed, LogLik&& loglik) {
  if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  init.validate();
  prop.validate(init.dim());
  if (log_target_parts(init, spec) == kLogZero) {
    throw std::invalid_argument("initial state has zero prior density");
  }

  const std::size_t dim = init.dim();
  Trace trace;
  trace.names = init.names;
  trace.draws = Matrix(static_cast<std::size_t>(iterations), dim);
  trace.log_estimates.resize(iterations);
  trace.accepted.resize(iterations, 0);
  trace.meta.root_seed = root_seed;
  trace.meta.iterations = iterations;
  trace.meta.n_importance = n_importance;
  trace.meta.proposal_scales = prop.scales;

  ChainState state;
  state.theta = init;
  state.stored_log_estimate = loglik(init, 0);

  for (int i = 1; i <= iterations; ++i) {
    RngStream chain_stream(root_seed, static_cast<std::uint64_t>(i), 0);
    const ParamVector proposal_theta = propose(state.theta, prop, chain_stream);
    LogLikEstimate proposal_est;
    proposal_est.log_value = loglik(proposal_theta, i);
    proposal_est.n_samples = n_importance;
    proposal_est.root_seed = root_seed;
    proposal_est.iteration = i;

    const double log_ratio = accept_log_ratio(state, proposal_theta, proposal_est, spec);
    const double u = chain_stream.uniform();  // always drawn, keeps streams aligned
    const bool accept = std::log(u) < std::min(0.0, log_ratio);
    if (accept) {
      state.theta = proposal_theta;
      state.stored_log_estimate = proposal_est.log_value;
      state.accepted_count += 1;
    }
    state.iteration = i;

    const std::size_t r = static_cast<std::size_t>(i - 1);
    for (std::size_t j = 0; j < dim; ++j) trace.draws(r, j) = state.theta.get(j);
    trace.log_estimates[r] = state.stored_log_estimate;
    trace.accepted[r] = accept ? 1 : 0;
  }
  trace.meta.accepted = state.accepted_count;
  return trace;
}

}  // namespace

Trace run_chain(const Dataset& data, const ModelSpec& spec, const ProposalSpec& prop,
                const ParamVector& init, int iterations, int n_importance,
                std::uint64_t root_seed, WorkerPool& pool) {
  spec.validate(data, init);
  return drive_chain(spec, prop, init, iterations, n_importance, root_seed,
                     [&](const ParamVector& theta, std::int64_t iteration) {
                       return estimate_loglik(data, spec, theta, n_importance, iteration,
                                              root_seed, pool)
                           .log_value;
                     });
}

double exact_loglik(const Dataset& data, const ModelSpec& spec, const ParamVector& theta,
                    std::size_t enumeration_cap) {
  const auto& cells = data.missing_cells();
  if (cells.empty()) {
    const MissingFill empty;
    return log_mechanism(data, empty, spec, theta.phi) +
           log_cond_likelihood(data, empty, spec, theta.beta);
  }
  for (const MissingCell& cell : cells) {
    const int entry = spec.covariate_entry_for(cell.col);
    if (entry < 0 || spec.covariate_model[entry].family != Family::Bernoulli) {
      throw std::invalid_argument(
          "exact enumeration requires Bernoulli conditionals for every missing column");
    }
  }
  if (cells.size() >= 63 || (std::size_t{1} << cells.size()) > enumeration_cap) {
    throw std::invalid_argument("enumeration size exceeds the configured cap");
  }

  const std::size_t n_completions = std::size_t{1} << cells.size();
  std::vector<double> totals(n_completions);
  MissingFill fill;
  fill.values.resize(cells.size());
  for (std::size_t code = 0; code < n_completions; ++code) {
    for (std::size_t t = 0; t < cells.size(); ++t) {
      fill.values[t] = (code >> t) & 1u ? 1.0 : 0.0;
    }
    totals[code] = log_mechanism(data, fill, spec, theta.phi) +
                   log_cond_likelihood(data, fill, spec, theta.beta) +
                   log_covariate_model(data, fill, spec, theta.alpha);
  }
  return logsumexp(totals);
}

Trace run_exact_chain(const Dataset& data, const ModelSpec& spec, const ProposalSpec& prop,
                      const ParamVector& init, int iterations, std::uint64_t root_seed,
                      std::size_t enumeration_cap) {
  spec.validate(data, init);
  return drive_chain(spec, prop, init, iterations, 0, root_seed,
                     [&](const ParamVector& theta, std::int64_t) {
                       return exact_loglik(data, spec, theta, enumeration_cap);
                     });
}

ParamVector draw_init_from_priors(const ModelSpec& spec, const ParamVector& layout,
                                  std::uint64_t root_seed) {
  ParamVector out = layout;
  RngStream stream(root_seed, 0, 0);
  for (std::size_t i = 0; i < layout.dim(); ++i) {
    double v = spec.priors[i].sample(stream);
    switch (layout.transforms[i]) {
      case Transform::Identity:
        break;
      case Transform::Log:
        if (v <= 0.0) v = 1e-12;
        break;
      case Transform::Logit:
        if (v <= 0.0) v = 1e-6;
        if (v >= 1.0) v = 1.0 - 1e-6;
        break;
    }
    out.set(i, v);
  }
  return out;
}

}  // namespace pmmh
