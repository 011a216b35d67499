#ifndef PMMH_ESTIMATOR_HPP
#define PMMH_ESTIMATOR_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "pmmh/data.hpp"
#include "pmmh/model.hpp"
#include "pmmh/params.hpp"
#include "pmmh/rng.hpp"
#include "pmmh/thread_pool.hpp"

namespace pmmh {

// Log-domain unbiased importance-sampling estimate of the observed-data
// likelihood, tagged with the stream identity that produced it.
struct LogLikEstimate {
  double log_value = 0.0;
  int n_samples = 0;
  std::uint64_t root_seed = 0;
  std::int64_t iteration = 0;
};

struct DrawResult {
  MissingFill fill;
  double log_q = 0.0;
  // False when a proposal failed to resolve to valid parameters; the sample
  // then carries zero weight.
  bool ok = true;
};

// One complete fill of the missing cells drawn from the importance proposals,
// columns in index order so sequential dependencies resolve, plus its log
// proposal density.
DrawResult draw_missing(const Dataset& data, const ModelSpec& spec, const ParamVector& theta,
                        RngStream& stream);

// log( N^{-1} sum_k  p(m | fill_k) p(y | fill_k) p(fill_k) / q(fill_k) ),
// reduced with a max-shifted logsumexp in sample-index order so the result is
// bit-identical for every worker count. Sample k uses stream
// (root_seed, iteration, k + 1).
LogLikEstimate estimate_loglik(const Dataset& data, const ModelSpec& spec, const ParamVector& theta,
                               int n_samples, std::int64_t iteration, std::uint64_t root_seed,
                               WorkerPool& pool);

struct VarianceReport {
  double variance = 0.0;  // +inf when any replicate is degenerate
  int degenerate = 0;     // number of -inf replicates
  std::vector<double> log_values;
};

// Sample variance of the log estimate across independent replicates at a fixed
// theta; replicate r uses iteration index (iteration_offset + r).
VarianceReport loglik_variance(const Dataset& data, const ModelSpec& spec, const ParamVector& theta,
                               int n_samples, int replicates, std::uint64_t root_seed,
                               WorkerPool& pool, std::int64_t iteration_offset = 0);

// Max-shifted log(sum(exp(x))) accumulated in index order.
double logsumexp(std::span<const double> values);

}  // namespace pmmh

#endif
