#include "pmmh/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmmh/model.hpp"
#include "pmmh/rng.hpp"

namespace pmmh {

namespace {

// Dedicated sample-index lane so data generation never shares a stream with a
// chain run on the same root seed (chains use lanes 0..N).
constexpr std::uint64_t kSimulateLane = 0x53494D55;  // "SIMU"

}  // namespace

SimulationResult simulate_dataset(const RunConfig& config, std::uint64_t seed) {
  if (!config.simulate) throw std::runtime_error("config has no simulate section");
  const SimulateConfig& sim = *config.simulate;
  const std::vector<std::string> columns = config.column_order();
  if (sim.columns.size() != columns.size()) {
    throw std::runtime_error("simulate.columns must cover every model column");
  }
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (sim.columns[j].name != columns[j]) {
      throw std::runtime_error("simulate.columns must follow the model column order");
    }
  }

  ParamVector truth;
  truth.alpha = sim.truth_alpha;
  truth.beta = sim.truth_beta;
  truth.phi = sim.truth_phi;
  for (const auto* block : {&config.alpha, &config.beta, &config.phi}) {
    for (const ParamConfig& p : *block) {
      truth.names.push_back(p.name);
      truth.transforms.push_back(p.transform);
    }
  }
  truth.validate();

  // Resolve generative conditionals against the truth alpha block.
  std::vector<ConditionalSpec> generators;
  for (std::size_t j = 0; j < sim.columns.size(); ++j) {
    const NamedConditional named{sim.columns[j].name, sim.columns[j].family, sim.columns[j].params};
    ConditionalSpec spec;
    spec.column = static_cast<int>(j);
    spec.family = named.family;
    for (const NamedExpr& e : named.params) {
      ParamExpr expr;
      for (const NamedTerm& t : e.terms) {
        ParamTerm term;
        if (t.literal) {
          term.literal = *t.literal;
        } else {
          bool found = false;
          for (std::size_t a = 0; a < config.alpha.size(); ++a) {
            if (config.alpha[a].name == t.alpha) {
              term.alpha_index = static_cast<int>(a);
              found = true;
              break;
            }
          }
          if (!found) throw std::runtime_error("simulate references unknown alpha '" + t.alpha + "'");
        }
        if (!t.column.empty()) {
          const auto it = std::find(columns.begin(), columns.end(), t.column);
          if (it == columns.end() || static_cast<std::size_t>(it - columns.begin()) >= j) {
            throw std::runtime_error("simulate column '" + named.column +
                                     "' may only reference earlier columns");
          }
          term.column = static_cast<int>(it - columns.begin());
        }
        expr.terms.push_back(term);
      }
      spec.params.push_back(std::move(expr));
    }
    generators.push_back(std::move(spec));
  }
  const ConditionalTable table(generators, truth.alpha);

  const std::size_t n = static_cast<std::size_t>(sim.n);
  const std::size_t p = columns.size();
  std::vector<int> y(n);
  Matrix x(n, p);
  std::vector<std::uint8_t> mask(n * p, 1);

  std::vector<int> design_idx;
  for (const std::string& name : config.data.design) {
    const auto it = std::find(columns.begin(), columns.end(), name);
    design_idx.push_back(static_cast<int>(it - columns.begin()));
  }
  std::vector<int> governed_idx;
  std::vector<int> predictor_idx;
  if (config.mechanism.kind == MechanismSpec::Kind::Logistic) {
    for (const std::string& name : config.mechanism.governed) {
      const auto it = std::find(columns.begin(), columns.end(), name);
      if (it == columns.end()) throw std::runtime_error("mechanism governs unknown column");
      governed_idx.push_back(static_cast<int>(it - columns.begin()));
    }
    for (const std::string& name : config.mechanism.predictors) {
      const auto it = std::find(columns.begin(), columns.end(), name);
      if (it == columns.end()) throw std::runtime_error("mechanism predictor unknown");
      predictor_idx.push_back(static_cast<int>(it - columns.begin()));
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    RngStream stream(seed, i, kSimulateLane);
    for (std::size_t j = 0; j < p; ++j) {
      const auto resolved = table.resolve(j, [&](int col) { return x(i, col); });
      if (!resolved) {
        throw std::runtime_error("simulate resolved invalid parameters for column " + columns[j]);
      }
      x(i, j) = resolved->sample(stream);
    }
    double eta = config.data.intercept ? truth.beta[0] : 0.0;
    const std::size_t offset = config.data.intercept ? 1 : 0;
    for (std::size_t k = 0; k < design_idx.size(); ++k) {
      eta += truth.beta[offset + k] * x(i, design_idx[k]);
    }
    y[i] = stream.uniform() < 1.0 / (1.0 + std::exp(-eta)) ? 1 : 0;

    if (!governed_idx.empty()) {
      double mech_eta = truth.phi[0];
      for (std::size_t k = 0; k < predictor_idx.size(); ++k) {
        mech_eta += truth.phi[k + 1] * x(i, predictor_idx[k]);
      }
      const double p_observed = 1.0 / (1.0 + std::exp(-mech_eta));
      for (int j : governed_idx) {
        mask[i * p + j] = stream.uniform() < p_observed ? 1 : 0;
      }
    }
  }

  return {Dataset(std::move(y), std::move(x), std::move(mask), columns), std::move(truth)};
}

}  // namespace pmmh
