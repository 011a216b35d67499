#ifndef PMMH_DIAGNOSTICS_HPP
#define PMMH_DIAGNOSTICS_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pmmh/sampler.hpp"

namespace pmmh {

struct SummaryRow {
  std::string name;
  double estimate = 0.0;    // posterior mean
  double mcse = 0.0;
  double cred_lower = 0.0;  // equal-tail 95% interval
  double cred_upper = 0.0;
  double rhat = 0.0;
  bool degenerate = false;  // zero within-half variance
};

// Split-half Gelman-Rubin statistic: the single chain is cut into two halves
// of length m and R = sqrt((W (m-1)/m + B/m) / W). Returns +inf when the
// within-half variance is zero. Requires at least 4 samples; an odd leading
// sample is dropped.
double split_rhat(std::span<const double> samples);

// Batch-means Monte Carlo standard error with floor(sqrt(n)) batches:
// sd of the batch means divided by sqrt(#batches). Requires n >= 100.
double mcse(std::span<const double> samples);

// Empirical quantile with linear interpolation between order statistics
// (h = (n-1) q + 1).
double empirical_quantile(std::span<const double> samples, double q);

// Equal-tail credible interval from empirical quantiles. Requires n >= 40.
std::pair<double, double> credible_interval(std::span<const double> samples, double level = 0.95);

// One row per parameter over the post-burn-in constrained-scale draws.
std::vector<SummaryRow> summarize(const Trace& trace, int burn_in);

// Aligned plain-text table: param, estimate, 95% cred, R-hat, MCSE.
std::string summary_table(const std::vector<SummaryRow>& rows);

std::string summary_csv(const std::vector<SummaryRow>& rows);

}  // namespace pmmh

#endif
