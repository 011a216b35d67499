#include "pmmh/tuning.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pmmh/csv.hpp"

namespace pmmh {

TuneReport tune(const Dataset& data, const ModelSpec& spec, const ParamVector& theta,
                std::span<const int> n_grid, int replicates, std::uint64_t root_seed,
                WorkerPool& pool) {
  if (n_grid.empty()) throw std::invalid_argument("tune needs a non-empty N grid");
  TuneReport report;
  bool any_finite = false;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    // Distinct iteration block per grid row keeps the rows independent.
    const VarianceReport vr =
        loglik_variance(data, spec, theta, n_grid[g], replicates, root_seed, pool,
                        static_cast<std::int64_t>(g) * replicates);
    report.rows.push_back({n_grid[g], vr.variance, vr.degenerate});
    if (vr.degenerate < replicates) any_finite = true;
    if (vr.degenerate == 0 && vr.variance <= kTargetLogLikVariance &&
        (report.recommended_n < 0 || n_grid[g] < report.recommended_n)) {
      report.recommended_n = n_grid[g];
    }
  }
  if (!any_finite) {
    throw std::runtime_error(
        "every replicate produced a zero-likelihood estimate at every N; "
        "the importance proposals do not cover the model's support");
  }
  return report;
}

std::string tune_table(const TuneReport& report) {
  std::ostringstream out;
  out << "    N    log-lik variance    degenerate\n";
  char buf[96];
  for (const TuneRow& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%5d    %-16.4g    %d\n", row.n_importance, row.variance,
                  row.degenerate);
    out << buf;
  }
  if (report.recommended_n > 0) {
    out << "recommended N = " << report.recommended_n << " (smallest with variance <= "
        << kTargetLogLikVariance << ")\n";
  } else {
    out << "no N in the grid meets the variance <= " << kTargetLogLikVariance
        << " guideline; extend the grid or improve the importance proposals\n";
  }
  return out.str();
}

std::string tune_csv(const TuneReport& report) {
  std::ostringstream out;
  out << "n_importance,variance,degenerate\n";
  for (const TuneRow& row : report.rows) {
    out << row.n_importance << ',' << format_double(row.variance) << ',' << row.degenerate << '\n';
  }
  return out.str();
}

}  // namespace pmmh
