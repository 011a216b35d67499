#ifndef PMMH_DISTRIBUTIONS_HPP
#define PMMH_DISTRIBUTIONS_HPP

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmmh/rng.hpp"

namespace pmmh {

// Log of zero mass; returned for points outside a family's support.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

enum class Family {
  Normal,            // (mean, variance)
  LogNormal,         // (log-scale mean, log-scale variance)
  SkewNormal,        // (location xi, scale omega, shape alpha)
  ScaledT,           // (degrees of freedom, location, scale); loc + scale * T(df)
  InverseGamma,      // (shape a, scale b); density ~ x^{-a-1} exp(-b/x)
  Beta,              // (a, b)
  Bernoulli,         // (p), p in [0, 1]; degenerate endpoints allowed
  NegativeBinomial,  // (n, p), real n > 0, p in (0, 1); mass G(x+n)/(G(n) x!) p^n (1-p)^x
};

std::size_t family_arity(Family family);
std::string_view family_name(Family family);
std::optional<Family> parse_family(std::string_view name);

// A fully specified distribution. Parameters are validated on construction;
// log-normalization constants are cached so repeated density evaluation stays
// cheap. Everything is evaluated in the log domain.
class DistributionSpec {
 public:
  DistributionSpec(Family family, std::vector<double> params);

  // Non-throwing variant used when parameters are resolved per data row and an
  // invalid resolution must flow back as a zero-density outcome.
  static std::optional<DistributionSpec> try_make(Family family, std::span<const double> params);

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  double param(std::size_t i) const { return params_[i]; }

  double log_pdf(double x) const;
  double sample(RngStream& stream) const;

 private:
  DistributionSpec() = default;
  static bool valid_params(Family family, std::span<const double> params);
  void cache_constants();

  Family family_ = Family::Normal;
  std::vector<double> params_;
  double c0_ = 0.0;  // cached family-specific constants
  double c1_ = 0.0;
  double c2_ = 0.0;
};

double log_pdf(const DistributionSpec& spec, double x);
double sample(const DistributionSpec& spec, RngStream& stream);

// Primitive draws shared by the family samplers. Deterministic given the
// stream state.
double sample_gamma(double shape, double scale, RngStream& stream);
double sample_poisson(double mean, RngStream& stream);

// log(1 + exp(x)) without overflow.
double softplus(double x);
// log Phi(x) accurate far into the lower tail.
double log_normal_cdf(double x);

}  // namespace pmmh

#endif
