#include "pmmh/surface.hpp"

#include <sstream>
#include <stdexcept>

#include "pmmh/csv.hpp"

namespace pmmh {

namespace {

double grid_value(double lo, double hi, int steps, int idx) {
  if (steps <= 1) return lo;
  return lo + (hi - lo) * static_cast<double>(idx) / static_cast<double>(steps - 1);
}

}  // namespace

std::vector<SurfacePoint> surface(const Dataset& data, const ModelSpec& spec,
                                  const ParamVector& theta_fixed, const SurfaceRequest& request,
                                  WorkerPool& pool) {
  const std::size_t dim = theta_fixed.dim();
  if (request.param_a < 0 || request.param_b < 0 ||
      static_cast<std::size_t>(request.param_a) >= dim ||
      static_cast<std::size_t>(request.param_b) >= dim || request.param_a == request.param_b) {
    throw std::invalid_argument("surface needs two distinct grid parameters");
  }
  if (request.steps_a < 1 || request.steps_b < 1 || request.replicates < 1) {
    throw std::invalid_argument("surface grid sizes must be positive");
  }

  const std::int64_t n_points =
      static_cast<std::int64_t>(request.steps_a) * request.steps_b;
  std::vector<SurfacePoint> out;
  out.reserve(static_cast<std::size_t>(n_points) * request.replicates);
  ParamVector theta = theta_fixed;
  for (int rep = 0; rep < request.replicates; ++rep) {
    std::int64_t point_idx = 0;
    for (int ia = 0; ia < request.steps_a; ++ia) {
      const double a = grid_value(request.a_min, request.a_max, request.steps_a, ia);
      for (int ib = 0; ib < request.steps_b; ++ib, ++point_idx) {
        const double b = grid_value(request.b_min, request.b_max, request.steps_b, ib);
        theta.set(request.param_a, a);
        theta.set(request.param_b, b);
        const std::int64_t iteration = request.mode == SeedMode::Fresh
                                           ? rep * n_points + point_idx
                                           : static_cast<std::int64_t>(rep);
        const LogLikEstimate est = estimate_loglik(data, spec, theta, request.n_importance,
                                                   iteration, request.seed, pool);
        out.push_back({a, b, rep, -est.log_value});
      }
    }
  }
  return out;
}

std::string surface_csv(const std::vector<SurfacePoint>& points, const std::string& name_a,
                        const std::string& name_b) {
  std::ostringstream out;
  out << name_a << ',' << name_b << ",replicate,neg_log_estimate\n";
  for (const SurfacePoint& p : points) {
    out << format_double(p.a) << ',' << format_double(p.b) << ',' << p.replicate << ','
        << format_double(p.neg_log_estimate) << '\n';
  }
  return out.str();
}

}  // namespace pmmh
