#include "pmmh/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pmmh {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;  // log(2*pi)

bool is_nonneg_integer(double x) {
  return x >= 0.0 && x == std::floor(x) && std::isfinite(x);
}

}  // namespace

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double log_normal_cdf(double x) {
  // erfc stays accurate down to about -35; below that use the asymptotic
  // expansion Phi(x) ~ phi(x)/|x| * (1 - 1/x^2 + 3/x^4).
  if (x > -35.0) {
    return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
  }
  const double x2 = x * x;
  return -0.5 * x2 - std::log(-x) - 0.5 * kLogTwoPi + std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

std::size_t family_arity(Family family) {
  switch (family) {
    case Family::Normal: return 2;
    case Family::LogNormal: return 2;
    case Family::SkewNormal: return 3;
    case Family::ScaledT: return 3;
    case Family::InverseGamma: return 2;
    case Family::Beta: return 2;
    case Family::Bernoulli: return 1;
    case Family::NegativeBinomial: return 2;
  }
  return 0;
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Normal: return "Normal";
    case Family::LogNormal: return "LogNormal";
    case Family::SkewNormal: return "SkewNormal";
    case Family::ScaledT: return "ScaledT";
    case Family::InverseGamma: return "InverseGamma";
    case Family::Beta: return "Beta";
    case Family::Bernoulli: return "Bernoulli";
    case Family::NegativeBinomial: return "NegativeBinomial";
  }
  return "";
}

std::optional<Family> parse_family(std::string_view name) {
  for (Family f : {Family::Normal, Family::LogNormal, Family::SkewNormal, Family::ScaledT,
                   Family::InverseGamma, Family::Beta, Family::Bernoulli,
                   Family::NegativeBinomial}) {
    if (name == family_name(f)) return f;
  }
  return std::nullopt;
}

bool DistributionSpec::valid_params(Family family, std::span<const double> p) {
  if (p.size() != family_arity(family)) return false;
  for (double v : p) {
    if (!std::isfinite(v)) return false;
  }
  switch (family) {
    case Family::Normal: return p[1] > 0.0;
    case Family::LogNormal: return p[1] > 0.0;
    case Family::SkewNormal: return p[1] > 0.0;
    case Family::ScaledT: return p[0] > 0.0 && p[2] > 0.0;
    case Family::InverseGamma: return p[0] > 0.0 && p[1] > 0.0;
    case Family::Beta: return p[0] > 0.0 && p[1] > 0.0;
    // Degenerate point masses are legal Bernoulli specs (p = 0 or 1).
    case Family::Bernoulli: return p[0] >= 0.0 && p[0] <= 1.0;
    case Family::NegativeBinomial: return p[0] > 0.0 && p[1] > 0.0 && p[1] < 1.0;
  }
  return false;
}

DistributionSpec::DistributionSpec(Family family, std::vector<double> params) {
  if (!valid_params(family, params)) {
    throw std::invalid_argument("invalid parameters for distribution family " +
                                std::string(family_name(family)));
  }
  family_ = family;
  params_ = std::move(params);
  cache_constants();
}

std::optional<DistributionSpec> DistributionSpec::try_make(Family family,
                                                           std::span<const double> params) {
  if (!valid_params(family, params)) return std::nullopt;
  DistributionSpec spec;
  spec.family_ = family;
  spec.params_.assign(params.begin(), params.end());
  spec.cache_constants();
  return spec;
}

void DistributionSpec::cache_constants() {
  const auto& p = params_;
  switch (family_) {
    case Family::Normal:
      c0_ = -0.5 * (kLogTwoPi + std::log(p[1]));  // log normalizer
      c1_ = 0.5 / p[1];
      break;
    case Family::LogNormal:
      c0_ = -0.5 * (kLogTwoPi + std::log(p[1]));
      c1_ = 0.5 / p[1];
      break;
    case Family::SkewNormal:
      c0_ = std::numbers::ln2 - std::log(p[1]) - 0.5 * kLogTwoPi;
      break;
    case Family::ScaledT: {
      const double df = p[0];
      c0_ = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
            0.5 * std::log(df * std::numbers::pi) - std::log(p[2]);
      c1_ = 0.5 * (df + 1.0);
      break;
    }
    case Family::InverseGamma:
      c0_ = p[0] * std::log(p[1]) - std::lgamma(p[0]);
      break;
    case Family::Beta:
      c0_ = std::lgamma(p[0] + p[1]) - std::lgamma(p[0]) - std::lgamma(p[1]);
      break;
    case Family::Bernoulli:
      c0_ = p[0] > 0.0 ? std::log(p[0]) : kLogZero;
      c1_ = p[0] < 1.0 ? std::log1p(-p[0]) : kLogZero;
      break;
    case Family::NegativeBinomial:
      c0_ = -std::lgamma(p[0]) + p[0] * std::log(p[1]);
      c1_ = std::log1p(-p[1]);
      break;
  }
}

double DistributionSpec::log_pdf(double x) const {
  if (std::isnan(x)) return kLogZero;
  const auto& p = params_;
  switch (family_) {
    case Family::Normal: {
      const double d = x - p[0];
      return c0_ - c1_ * d * d;
    }
    case Family::LogNormal: {
      if (x <= 0.0) return kLogZero;
      const double lx = std::log(x);
      const double d = lx - p[0];
      return c0_ - lx - c1_ * d * d;
    }
    case Family::SkewNormal: {
      const double z = (x - p[0]) / p[1];
      return c0_ - 0.5 * z * z + log_normal_cdf(p[2] * z);
    }
    case Family::ScaledT: {
      const double z = (x - p[1]) / p[2];
      return c0_ - c1_ * std::log1p(z * z / p[0]);
    }
    case Family::InverseGamma: {
      if (x <= 0.0) return kLogZero;
      return c0_ - (p[0] + 1.0) * std::log(x) - p[1] / x;
    }
    case Family::Beta: {
      if (x <= 0.0 || x >= 1.0) return kLogZero;
      return c0_ + (p[0] - 1.0) * std::log(x) + (p[1] - 1.0) * std::log1p(-x);
    }
    case Family::Bernoulli: {
      if (x == 1.0) return c0_;
      if (x == 0.0) return c1_;
      return kLogZero;
    }
    case Family::NegativeBinomial: {
      if (!is_nonneg_integer(x)) return kLogZero;
      return std::lgamma(x + p[0]) - std::lgamma(x + 1.0) + c0_ + x * c1_;
    }
  }
  return kLogZero;
}

double sample_gamma(double shape, double scale, RngStream& stream) {
  // Marsaglia-Tsang squeeze; shape < 1 boosted via the U^{1/shape} identity.
  if (shape < 1.0) {
    const double u = stream.uniform();
    return sample_gamma(shape + 1.0, scale, stream) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z = stream.normal();
    double v = 1.0 + c * z;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = stream.uniform();
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) {
      return d * v * scale;
    }
  }
}

double sample_poisson(double mean, RngStream& stream) {
  if (mean <= 0.0) return 0.0;
  if (mean < 30.0) {
    // Multiplication method.
    const double limit = std::exp(-mean);
    double prod = 1.0;
    double count = -1.0;
    do {
      prod *= stream.uniform();
      count += 1.0;
    } while (prod > limit);
    return count;
  }
  // Hormann's PTRS transformed rejection, valid for mean >= 10.
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double u = stream.uniform() - 0.5;
    double v = stream.uniform();
    double us = 0.5 - std::fabs(u);
    double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return k;
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        -mean + k * std::log(mean) - std::lgamma(k + 1.0)) {
      return k;
    }
  }
}

double DistributionSpec::sample(RngStream& stream) const {
  const auto& p = params_;
  switch (family_) {
    case Family::Normal:
      return p[0] + std::sqrt(p[1]) * stream.normal();
    case Family::LogNormal:
      return std::exp(p[0] + std::sqrt(p[1]) * stream.normal());
    case Family::SkewNormal: {
      // Conditioning representation: (x0, x1) standard bivariate normal with
      // correlation delta; x1 given x0 > 0 is skew normal with shape alpha.
      const double delta = p[2] / std::sqrt(1.0 + p[2] * p[2]);
      const double x0 = stream.normal();
      const double w = stream.normal();
      const double x1 = delta * x0 + std::sqrt(1.0 - delta * delta) * w;
      const double z = x0 >= 0.0 ? x1 : -x1;
      return p[0] + p[1] * z;
    }
    case Family::ScaledT: {
      const double z = stream.normal();
      const double chi2 = sample_gamma(0.5 * p[0], 2.0, stream);
      return p[1] + p[2] * z / std::sqrt(chi2 / p[0]);
    }
    case Family::InverseGamma:
      return 1.0 / sample_gamma(p[0], 1.0 / p[1], stream);
    case Family::Beta: {
      const double ga = sample_gamma(p[0], 1.0, stream);
      const double gb = sample_gamma(p[1], 1.0, stream);
      return ga / (ga + gb);
    }
    case Family::Bernoulli:
      return stream.uniform() < p[0] ? 1.0 : 0.0;
    case Family::NegativeBinomial: {
      // Gamma-mixed Poisson, supporting real-valued n.
      const double lambda = sample_gamma(p[0], (1.0 - p[1]) / p[1], stream);
      return sample_poisson(lambda, stream);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double log_pdf(const DistributionSpec& spec, double x) { return spec.log_pdf(x); }

double sample(const DistributionSpec& spec, RngStream& stream) { return spec.sample(stream); }

}  // namespace pmmh
