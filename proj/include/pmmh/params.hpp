#ifndef PMMH_PARAMS_HPP
#define PMMH_PARAMS_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pmmh {

// Per-coordinate map between the constrained scale the model is stated on and
// the unconstrained scale the chain walks.
enum class Transform { Identity, Log, Logit };

std::string_view transform_name(Transform t);
std::optional<Transform> parse_transform(std::string_view name);

double transform_to_unconstrained(double constrained, Transform t);
double transform_to_constrained(double unconstrained, Transform t);

// Concatenated parameter blocks on the constrained scale: covariate-model
// parameters (alpha), regression coefficients (beta), mechanism parameters
// (phi). Flat indices run alpha | beta | phi.
struct ParamVector {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> phi;
  std::vector<Transform> transforms;  // one per flat coordinate
  std::vector<std::string> names;     // one per flat coordinate

  std::size_t dim() const { return alpha.size() + beta.size() + phi.size(); }
  std::size_t beta_offset() const { return alpha.size(); }
  std::size_t phi_offset() const { return alpha.size() + beta.size(); }

  double get(std::size_t i) const;
  void set(std::size_t i, double v);
  int index_of(std::string_view name) const;  // -1 when absent
  void validate() const;                      // throws on layout inconsistencies

  friend bool operator==(const ParamVector&, const ParamVector&) = default;
};

std::vector<double> to_unconstrained(const ParamVector& theta);
// Rebuilds a ParamVector with `layout`'s names/transforms/block shape and
// values mapped back from the unconstrained point.
ParamVector to_constrained(const ParamVector& layout, std::span<const double> unconstrained);

// Log absolute derivative of the unconstrained -> constrained map, summed over
// coordinates; added to the log prior so the chain targets the stated priors.
double log_jacobian(std::span<const double> unconstrained, std::span<const Transform> transforms);

}  // namespace pmmh

#endif
