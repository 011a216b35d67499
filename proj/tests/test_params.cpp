#include <doctest.h>

#include <cmath>
#include <vector>

#include "pmmh/distributions.hpp"
#include "pmmh/params.hpp"

using namespace pmmh;

namespace {

ParamVector mixed_vector() {
  ParamVector theta;
  theta.alpha = {1.3};
  theta.beta = {-2.0, 0.4};
  theta.phi = {0.3};
  theta.transforms = {Transform::Log, Transform::Identity, Transform::Identity, Transform::Logit};
  theta.names = {"a", "b0", "b1", "p"};
  return theta;
}

}  // namespace

TEST_CASE("constrained/unconstrained maps are mutual inverses") {
  const ParamVector theta = mixed_vector();
  const std::vector<double> u = to_unconstrained(theta);
  const ParamVector back = to_constrained(theta, u);
  for (std::size_t i = 0; i < theta.dim(); ++i) {
    CHECK(back.get(i) == doctest::Approx(theta.get(i)).epsilon(1e-12));
  }
  // And the other way around.
  const std::vector<double> u2 = to_unconstrained(back);
  for (std::size_t i = 0; i < u.size(); ++i) {
    CHECK(u2[i] == doctest::Approx(u[i]).epsilon(1e-12));
  }
}

TEST_CASE("jacobian of identity transforms is zero") {
  const std::vector<double> u = {0.3, -5.0, 17.0};
  const std::vector<Transform> t(3, Transform::Identity);
  CHECK(log_jacobian(u, t) == 0.0);
}

TEST_CASE("jacobian of a single log coordinate is the unconstrained value") {
  const std::vector<double> u = {1.7};
  const std::vector<Transform> t = {Transform::Log};
  CHECK(log_jacobian(u, t) == doctest::Approx(1.7).epsilon(1e-14));
}

TEST_CASE("mixed jacobian matches finite differences of the constrained map") {
  const ParamVector theta = mixed_vector();
  const std::vector<double> u = to_unconstrained(theta);
  const double h = 1e-6;
  double fd_total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double up = transform_to_constrained(u[i] + h, theta.transforms[i]);
    const double dn = transform_to_constrained(u[i] - h, theta.transforms[i]);
    fd_total += std::log(std::fabs(up - dn) / (2.0 * h));
  }
  CHECK(log_jacobian(u, theta.transforms) == doctest::Approx(fd_total).epsilon(1e-6));
}

TEST_CASE("prior plus jacobian is a proper density on the unconstrained scale") {
  // Log-transformed InverseGamma(1.65, 0.65) coordinate: integrate
  // exp(log prior(exp(u)) + u) over a wide u grid.
  const DistributionSpec prior(Family::InverseGamma, {1.65, 0.65});
  const double lo = -30.0, hi = 12.0;
  const int n = 200000;
  const double h = (hi - lo) / n;
  double integral = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double u = lo + i * h;
    const double f = std::exp(prior.log_pdf(std::exp(u)) + u);
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    integral += w * f;
  }
  integral *= h / 3.0;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("log transform image is strictly positive") {
  for (double u : {-40.0, -3.0, 0.0, 3.0, 40.0}) {
    CHECK(transform_to_constrained(u, Transform::Log) > 0.0);
  }
}

TEST_CASE("logit transform keeps probabilities inside the unit interval") {
  // Saturation to exactly 0 or 1 only happens beyond |u| ~ 37, where the
  // priors to be evaluated there reject the state anyway.
  for (double u : {-30.0, -3.0, 0.0, 3.0, 30.0}) {
    const double c = transform_to_constrained(u, Transform::Logit);
    CHECK(c > 0.0);
    CHECK(c < 1.0);
  }
}
