#include "pmmh/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pmmh {

int ModelSpec::covariate_entry_for(int column) const {
  for (std::size_t i = 0; i < covariate_model.size(); ++i) {
    if (covariate_model[i].column == column) return static_cast<int>(i);
  }
  return -1;
}

int ModelSpec::proposal_entry_for(int column) const {
  for (std::size_t i = 0; i < is_proposals.size(); ++i) {
    if (is_proposals[i].column == column) return static_cast<int>(i);
  }
  return -1;
}

namespace {

void check_entries(const std::vector<ConditionalSpec>& entries, std::size_t alpha_dim, int n_cols,
                   const char* what) {
  int prev_col = -1;
  for (const ConditionalSpec& e : entries) {
    if (e.column < 0 || e.column >= n_cols) {
      throw std::invalid_argument(std::string(what) + " entry references an unknown column");
    }
    if (e.column <= prev_col) {
      throw std::invalid_argument(std::string(what) + " entries must be in ascending column order");
    }
    prev_col = e.column;
    if (e.params.size() != family_arity(e.family)) {
      throw std::invalid_argument(std::string(what) + " entry has wrong parameter count");
    }
    for (const ParamExpr& expr : e.params) {
      for (const ParamTerm& t : expr.terms) {
        if (t.alpha_index >= static_cast<int>(alpha_dim)) {
          throw std::invalid_argument(std::string(what) +
                                      " entry references an unknown alpha parameter");
        }
        // Sequential structure: parameters may only look at earlier columns.
        if (t.column >= e.column) {
          throw std::invalid_argument(std::string(what) +
                                      " entry for a column may only reference earlier columns");
        }
      }
    }
  }
}

}  // namespace

void ModelSpec::validate(const Dataset& data, const ParamVector& layout) const {
  layout.validate();
  const int n_cols = data.n_cols();
  for (int j : design_columns) {
    if (j < 0 || j >= n_cols) throw std::invalid_argument("design column out of range");
  }
  if (layout.beta.size() != beta_dim()) {
    throw std::invalid_argument("beta dimension does not match the design");
  }
  if (layout.phi.size() != mechanism.phi_dim()) {
    throw std::invalid_argument("phi dimension does not match the mechanism");
  }
  if (priors.size() != layout.dim()) {
    throw std::invalid_argument("every scalar parameter needs exactly one prior");
  }
  check_entries(covariate_model, layout.alpha.size(), n_cols, "covariate model");
  check_entries(is_proposals, layout.alpha.size(), n_cols, "importance proposal");
  if (mechanism.kind == MechanismSpec::Kind::Logistic) {
    if (mechanism.governed.empty()) {
      throw std::invalid_argument("logistic mechanism needs at least one governed column");
    }
    for (int j : mechanism.governed) {
      if (j < 0 || j >= n_cols) throw std::invalid_argument("governed column out of range");
    }
    for (int j : mechanism.predictors) {
      if (j < 0 || j >= n_cols) throw std::invalid_argument("mechanism predictor out of range");
    }
  }
  const std::vector<int> miss = data.missing_count_by_column();
  for (int j = 0; j < n_cols; ++j) {
    if (miss[j] == 0) continue;
    if (covariate_entry_for(j) < 0) {
      throw std::invalid_argument("column '" + data.column_names()[j] +
                                  "' has missing cells but no covariate-model entry");
    }
    if (proposal_entry_for(j) < 0) {
      throw std::invalid_argument("column '" + data.column_names()[j] +
                                  "' has missing cells but no importance proposal");
    }
  }
}

ConditionalTable::ConditionalTable(std::span<const ConditionalSpec> entries,
                                   std::span<const double> alpha)
    : entries_(entries), alpha_(alpha.begin(), alpha.end()) {
  fixed_.resize(entries.size());
  row_dependent_.resize(entries.size(), false);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const ConditionalSpec& e = entries[i];
    bool depends = false;
    for (const ParamExpr& expr : e.params) depends = depends || expr.depends_on_columns();
    row_dependent_[i] = depends;
    if (!depends) {
      double buf[4];
      for (std::size_t k = 0; k < e.params.size(); ++k) {
        buf[k] = e.params[k].eval(alpha_, [](int) { return 0.0; });
      }
      fixed_[i] = DistributionSpec::try_make(e.family, {buf, e.params.size()});
    }
  }
}

double log_cond_likelihood(const Dataset& data, const MissingFill& fill, const ModelSpec& spec,
                           std::span<const double> beta) {
  if (beta.size() != spec.beta_dim()) {
    throw std::invalid_argument("beta dimension does not match the design");
  }
  const FilledValues x(data, fill);
  const std::size_t offset = spec.intercept ? 1 : 0;
  double total = 0.0;
  for (int i = 0; i < data.n_rows(); ++i) {
    double eta = spec.intercept ? beta[0] : 0.0;
    for (std::size_t k = 0; k < spec.design_columns.size(); ++k) {
      eta += beta[offset + k] * x(i, spec.design_columns[k]);
    }
    total += data.response(i) * eta - softplus(eta);
  }
  return total;
}

double log_covariate_model(const Dataset& data, const MissingFill& fill, const ModelSpec& spec,
                           std::span<const double> alpha) {
  const FilledValues x(data, fill);
  const ConditionalTable table(spec.covariate_model, alpha);
  double total = 0.0;
  for (const MissingCell& cell : data.missing_cells()) {
    const int entry = spec.covariate_entry_for(cell.col);
    if (entry < 0) {
      throw std::invalid_argument("no covariate-model entry for column " +
                                  data.column_names()[cell.col]);
    }
    const int row = cell.row;
    const auto resolved =
        table.resolve(static_cast<std::size_t>(entry), [&](int j) { return x(row, j); });
    if (!resolved) return kLogZero;
    total += resolved->log_pdf(fill.values[data.missing_ordinal(row, cell.col)]);
    if (total == kLogZero) return kLogZero;
  }
  return total;
}

double log_mechanism(const Dataset& data, const MissingFill& fill, const ModelSpec& spec,
                     std::span<const double> phi) {
  const MechanismSpec& mech = spec.mechanism;
  if (mech.kind == MechanismSpec::Kind::None) return 0.0;
  if (phi.size() != mech.phi_dim()) {
    throw std::invalid_argument("phi dimension does not match the mechanism");
  }
  const FilledValues x(data, fill);
  double total = 0.0;
  for (int i = 0; i < data.n_rows(); ++i) {
    double eta = phi[0];
    for (std::size_t k = 0; k < mech.predictors.size(); ++k) {
      eta += phi[k + 1] * x(i, mech.predictors[k]);
    }
    // log IL(eta) = -softplus(-eta), log(1 - IL(eta)) = -softplus(eta)
    for (int j : mech.governed) {
      total += data.observed(i, j) ? -softplus(-eta) : -softplus(eta);
    }
  }
  return total;
}

double log_prior(const ParamVector& theta, const ModelSpec& spec) {
  if (spec.priors.size() != theta.dim()) {
    throw std::invalid_argument("prior count does not match the parameter vector");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < spec.priors.size(); ++i) {
    total += spec.priors[i].log_pdf(theta.get(i));
    if (total == kLogZero) return kLogZero;
  }
  return total;
}

}  // namespace pmmh
