#ifndef PMMH_SIMULATE_HPP
#define PMMH_SIMULATE_HPP

#include <cstdint>

#include "pmmh/config.hpp"
#include "pmmh/data.hpp"
#include "pmmh/params.hpp"

namespace pmmh {

struct SimulationResult {
  Dataset data;
  ParamVector truth;
};

// Draws the complete covariate matrix column by column from the configured
// generative model at the truth parameters, the responses from the logistic
// likelihood, and then the mask from the mechanism applied to the complete
// data. Row r uses stream (seed, r, 0).
SimulationResult simulate_dataset(const RunConfig& config, std::uint64_t seed);

}  // namespace pmmh

#endif
