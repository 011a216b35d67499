#include "pmmh/params.hpp"

#include <cmath>
#include <stdexcept>

#include "pmmh/distributions.hpp"

namespace pmmh {

std::string_view transform_name(Transform t) {
  switch (t) {
    case Transform::Identity: return "identity";
    case Transform::Log: return "log";
    case Transform::Logit: return "logit";
  }
  return "";
}

std::optional<Transform> parse_transform(std::string_view name) {
  if (name == "identity") return Transform::Identity;
  if (name == "log") return Transform::Log;
  if (name == "logit") return Transform::Logit;
  return std::nullopt;
}

double transform_to_unconstrained(double c, Transform t) {
  switch (t) {
    case Transform::Identity: return c;
    case Transform::Log: return std::log(c);
    case Transform::Logit: return std::log(c) - std::log1p(-c);
  }
  return c;
}

double transform_to_constrained(double u, Transform t) {
  switch (t) {
    case Transform::Identity: return u;
    case Transform::Log: return std::exp(u);
    case Transform::Logit: return 1.0 / (1.0 + std::exp(-u));
  }
  return u;
}

double ParamVector::get(std::size_t i) const {
  if (i < alpha.size()) return alpha[i];
  i -= alpha.size();
  if (i < beta.size()) return beta[i];
  return phi[i - beta.size()];
}

void ParamVector::set(std::size_t i, double v) {
  if (i < alpha.size()) {
    alpha[i] = v;
    return;
  }
  i -= alpha.size();
  if (i < beta.size()) {
    beta[i] = v;
    return;
  }
  phi[i - beta.size()] = v;
}

int ParamVector::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

void ParamVector::validate() const {
  if (transforms.size() != dim() || names.size() != dim()) {
    throw std::invalid_argument("parameter vector layout sizes do not agree");
  }
}

std::vector<double> to_unconstrained(const ParamVector& theta) {
  std::vector<double> u(theta.dim());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = transform_to_unconstrained(theta.get(i), theta.transforms[i]);
  }
  return u;
}

ParamVector to_constrained(const ParamVector& layout, std::span<const double> unconstrained) {
  if (unconstrained.size() != layout.dim()) {
    throw std::invalid_argument("unconstrained point has wrong dimension");
  }
  ParamVector out = layout;
  for (std::size_t i = 0; i < unconstrained.size(); ++i) {
    out.set(i, transform_to_constrained(unconstrained[i], layout.transforms[i]));
  }
  return out;
}

double log_jacobian(std::span<const double> u, std::span<const Transform> transforms) {
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    switch (transforms[i]) {
      case Transform::Identity:
        break;
      case Transform::Log:
        total += u[i];  // d exp(u)/du = exp(u)
        break;
      case Transform::Logit:
        // log sigma(u) + log(1 - sigma(u))
        total += -softplus(-u[i]) - softplus(u[i]);
        break;
    }
  }
  return total;
}

}  // namespace pmmh
