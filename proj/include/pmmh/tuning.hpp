#ifndef PMMH_TUNING_HPP
#define PMMH_TUNING_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "pmmh/estimator.hpp"

namespace pmmh {

// The guideline threshold for the log-likelihood variance when picking N.
inline constexpr double kTargetLogLikVariance = 2.0;

struct TuneRow {
  int n_importance = 0;
  double variance = 0.0;
  int degenerate = 0;
};

struct TuneReport {
  std::vector<TuneRow> rows;       // grid order
  int recommended_n = -1;          // smallest N meeting the threshold; -1 if none
};

// Log-likelihood variance at a fixed theta over a grid of N values. Throws
// when every replicate at every N is degenerate, which points at an importance
// proposal that misses the target's support.
TuneReport tune(const Dataset& data, const ModelSpec& spec, const ParamVector& theta,
                std::span<const int> n_grid, int replicates, std::uint64_t root_seed,
                WorkerPool& pool);

std::string tune_table(const TuneReport& report);
std::string tune_csv(const TuneReport& report);

}  // namespace pmmh

#endif
