#ifndef PMMH_SAMPLER_HPP
#define PMMH_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmmh/data.hpp"
#include "pmmh/estimator.hpp"
#include "pmmh/model.hpp"
#include "pmmh/params.hpp"

namespace pmmh {

// Gaussian random-walk proposal on the unconstrained scale. Symmetric by
// construction, so the q_MH ratio cancels from the acceptance probability and
// is never computed.
struct ProposalSpec {
  std::vector<double> scales;           // per coordinate; zero freezes a coordinate
  std::optional<Matrix> scale_matrix;   // optional dense SPD scale

  void validate(std::size_t dim) const;
  // Lower Cholesky factor of scale_matrix; call validate first.
  Matrix cholesky() const;
};

ParamVector propose(const ParamVector& theta, const ProposalSpec& prop, RngStream& stream);

struct ChainState {
  ParamVector theta;
  double stored_log_estimate = 0.0;
  std::int64_t iteration = 0;
  std::int64_t accepted_count = 0;
};

// Log acceptance ratio for a symmetric proposal:
//   [est' + prior(theta') + jac(theta')] - [stored + prior(theta) + jac(theta)].
// A -inf proposal side gives -inf (auto-reject); a -inf current side with a
// finite proposal gives +inf, which forces acceptance of the first finite
// state after a degenerate start.
double accept_log_ratio(const ChainState& current, const ParamVector& proposal_theta,
                        const LogLikEstimate& proposal_estimate, const ModelSpec& spec);

struct TraceMeta {
  std::uint64_t root_seed = 0;
  int iterations = 0;
  int n_importance = 0;  // 0 for the exact-likelihood chain
  int burn_in = 0;
  std::int64_t accepted = 0;
  std::vector<double> proposal_scales;
};

// Stored chain: per-iteration constrained-scale state, the stored log
// estimate, and the accept flag.
struct Trace {
  std::vector<std::string> names;
  Matrix draws;                        // iterations x dim
  std::vector<double> log_estimates;
  std::vector<std::uint8_t> accepted;
  TraceMeta meta;

  std::vector<double> column(std::size_t j) const;
};

// Algorithm: iteration i draws proposal noise and the acceptance uniform from
// stream (root_seed, i, 0) and importance samples from streams
// (root_seed, i, k), k = 1..N. The estimate stored with the current state is
// reused until the next acceptance, never refreshed.
Trace run_chain(const Dataset& data, const ModelSpec& spec, const ProposalSpec& prop,
                const ParamVector& init, int iterations, int n_importance,
                std::uint64_t root_seed, WorkerPool& pool);

inline constexpr std::size_t kDefaultEnumerationCap = 1u << 20;

// Exact observed-data log likelihood by enumerating the completions of the
// missing cells; requires every missing column's conditional to be Bernoulli.
// Throws when 2^(#missing cells) exceeds the cap.
double exact_loglik(const Dataset& data, const ModelSpec& spec, const ParamVector& theta,
                    std::size_t enumeration_cap = kDefaultEnumerationCap);

// Same chain mechanics with the exact likelihood in place of the estimate;
// the oracle the pseudo-marginal chain is tested against.
Trace run_exact_chain(const Dataset& data, const ModelSpec& spec, const ProposalSpec& prop,
                      const ParamVector& init, int iterations, std::uint64_t root_seed,
                      std::size_t enumeration_cap = kDefaultEnumerationCap);

// Prior draw used as the default chain start; coordinates are clamped into the
// image of their transform when a prior's support is wider (documented for the
// Inverse-Gamma prior on a probability in the real-data example).
ParamVector draw_init_from_priors(const ModelSpec& spec, const ParamVector& layout,
                                  std::uint64_t root_seed);

}  // namespace pmmh

#endif
