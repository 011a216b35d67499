#ifndef PMMH_SURFACE_HPP
#define PMMH_SURFACE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pmmh/estimator.hpp"

namespace pmmh {

// Fresh: every grid point draws its own fills, the regime whose spikes move
// between replications. Common: all points of a replication share one stream
// family, isolating parameter dependence from fill noise.
enum class SeedMode { Fresh, Common };

struct SurfaceRequest {
  int param_a = -1;  // flat parameter indices, constrained-scale grid
  int param_b = -1;
  double a_min = 0.0, a_max = 1.0;
  double b_min = 0.0, b_max = 1.0;
  int steps_a = 10, steps_b = 10;
  int n_importance = 2;
  int replicates = 2;
  SeedMode mode = SeedMode::Fresh;
  std::uint64_t seed = 1;
};

struct SurfacePoint {
  double a = 0.0;
  double b = 0.0;
  int replicate = 0;
  double neg_log_estimate = 0.0;
};

// Negative log estimated likelihood over the (a, b) grid with every other
// coordinate held at theta_fixed.
std::vector<SurfacePoint> surface(const Dataset& data, const ModelSpec& spec,
                                  const ParamVector& theta_fixed, const SurfaceRequest& request,
                                  WorkerPool& pool);

std::string surface_csv(const std::vector<SurfacePoint>& points, const std::string& name_a,
                        const std::string& name_b);

}  // namespace pmmh

#endif
