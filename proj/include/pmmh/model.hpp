#ifndef PMMH_MODEL_HPP
#define PMMH_MODEL_HPP

#include <optional>
#include <span>
#include <vector>

#include "pmmh/data.hpp"
#include "pmmh/distributions.hpp"
#include "pmmh/params.hpp"

namespace pmmh {

// One term of an affine parameter map: (literal or alpha coefficient) times an
// optional column value. This covers every conditional the engine models, e.g.
// Normal(a + b * x_dvc, s2) with a, b, s2 drawn from the alpha block.
struct ParamTerm {
  double literal = 0.0;
  int alpha_index = -1;  // >= 0: use alpha[alpha_index] instead of the literal
  int column = -1;       // >= 0: multiply by the (possibly filled) column value

  friend bool operator==(const ParamTerm&, const ParamTerm&) = default;
};

struct ParamExpr {
  std::vector<ParamTerm> terms;

  static ParamExpr constant(double v) { return {{ParamTerm{v, -1, -1}}}; }
  static ParamExpr alpha_ref(int idx) { return {{ParamTerm{0.0, idx, -1}}}; }

  bool depends_on_columns() const {
    for (const ParamTerm& t : terms) {
      if (t.column >= 0) return true;
    }
    return false;
  }
  int max_column() const {
    int m = -1;
    for (const ParamTerm& t : terms) {
      if (t.column > m) m = t.column;
    }
    return m;
  }

  template <class RowFn>
  double eval(std::span<const double> alpha, RowFn&& row_value) const {
    double v = 0.0;
    for (const ParamTerm& t : terms) {
      const double coef = t.alpha_index >= 0 ? alpha[t.alpha_index] : t.literal;
      v += t.column >= 0 ? coef * row_value(t.column) : coef;
    }
    return v;
  }

  friend bool operator==(const ParamExpr&, const ParamExpr&) = default;
};

// A distribution attached to one data column, with parameters given as affine
// maps over alpha and earlier columns. Used both for the sequential covariate
// model and for the importance proposals.
struct ConditionalSpec {
  int column = -1;
  Family family = Family::Normal;
  std::vector<ParamExpr> params;

  friend bool operator==(const ConditionalSpec&, const ConditionalSpec&) = default;
};

// Missing-data mechanism: each governed cell's inclusion indicator is
// Bernoulli with log-odds phi_0 + sum_k phi_{k+1} * x_{i, predictors[k]}.
// An empty predictor list is the data-independent (MCAR) mechanism; kind None
// drops the mechanism term entirely and carries no phi block.
struct MechanismSpec {
  enum class Kind { None, Logistic };
  Kind kind = Kind::None;
  std::vector<int> governed;
  std::vector<int> predictors;

  std::size_t phi_dim() const {
    return kind == Kind::Logistic ? 1 + predictors.size() : 0;
  }

  friend bool operator==(const MechanismSpec&, const MechanismSpec&) = default;
};

// The full generative description: design, sequential covariate model,
// mechanism, priors, and importance proposals.
struct ModelSpec {
  std::vector<int> design_columns;
  bool intercept = true;
  std::vector<ConditionalSpec> covariate_model;  // ascending column order
  MechanismSpec mechanism;
  std::vector<DistributionSpec> priors;  // one per scalar, alpha | beta | phi order
  std::vector<ConditionalSpec> is_proposals;  // ascending column order

  std::size_t beta_dim() const { return design_columns.size() + (intercept ? 1 : 0); }
  int covariate_entry_for(int column) const;  // index into covariate_model, -1 if absent
  int proposal_entry_for(int column) const;

  // Structural checks: triangular column references, one prior per scalar,
  // entries present for every column of `data` that has missing cells.
  void validate(const Dataset& data, const ParamVector& layout) const;
};

// Resolves the per-column conditionals for a fixed alpha. Entries whose
// parameters do not touch data columns resolve once; the rest resolve per row.
// Immutable after construction and safe to share across worker threads.
class ConditionalTable {
 public:
  ConditionalTable(std::span<const ConditionalSpec> entries, std::span<const double> alpha);

  std::size_t size() const { return entries_.size(); }
  int column(std::size_t i) const { return entries_[i].column; }

  // nullopt when the resolved parameters are invalid (zero density outcome).
  template <class RowFn>
  std::optional<DistributionSpec> resolve(std::size_t i, RowFn&& row_value) const {
    if (!row_dependent_[i]) return fixed_[i];
    const ConditionalSpec& e = entries_[i];
    double buf[4];
    for (std::size_t k = 0; k < e.params.size(); ++k) {
      buf[k] = e.params[k].eval(alpha_, row_value);
    }
    return DistributionSpec::try_make(e.family, {buf, e.params.size()});
  }

 private:
  std::span<const ConditionalSpec> entries_;
  std::vector<double> alpha_;
  std::vector<std::optional<DistributionSpec>> fixed_;
  std::vector<bool> row_dependent_;
};

// Sum over rows of y*eta - log(1 + exp(eta)) with eta the design inner
// product; evaluated with the softplus form so it is finite for all finite
// inputs.
double log_cond_likelihood(const Dataset& data, const MissingFill& fill, const ModelSpec& spec,
                           std::span<const double> beta);

// Sum over missing cells of the sequential conditional log densities at the
// fill values; rows without missing cells contribute zero.
double log_covariate_model(const Dataset& data, const MissingFill& fill, const ModelSpec& spec,
                           std::span<const double> alpha);

// Sum over governed cells of the inclusion-indicator Bernoulli log masses.
double log_mechanism(const Dataset& data, const MissingFill& fill, const ModelSpec& spec,
                     std::span<const double> phi);

// Independent priors on the constrained scale; -inf outside support.
double log_prior(const ParamVector& theta, const ModelSpec& spec);

}  // namespace pmmh

#endif
