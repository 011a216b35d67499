#ifndef PMMH_CONFIG_HPP
#define PMMH_CONFIG_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmmh/data.hpp"
#include "pmmh/model.hpp"
#include "pmmh/params.hpp"
#include "pmmh/sampler.hpp"

namespace pmmh {

// Name-based counterpart of ParamTerm/ParamExpr, as written in config files;
// resolved to indices once the dataset's column order is known.
struct NamedTerm {
  std::optional<double> literal;
  std::string alpha;   // set when the coefficient is an alpha parameter
  std::string column;  // set when the term multiplies a column value

  friend bool operator==(const NamedTerm&, const NamedTerm&) = default;
};

struct NamedExpr {
  std::vector<NamedTerm> terms;
  friend bool operator==(const NamedExpr&, const NamedExpr&) = default;
};

struct NamedConditional {
  std::string column;
  Family family = Family::Normal;
  std::vector<NamedExpr> params;
  friend bool operator==(const NamedConditional&, const NamedConditional&) = default;
};

struct ParamConfig {
  std::string name;
  Transform transform = Transform::Identity;
  Family prior_family = Family::Normal;
  std::vector<double> prior_params;
  std::optional<double> init;
  friend bool operator==(const ParamConfig&, const ParamConfig&) = default;
};

struct MechanismConfig {
  MechanismSpec::Kind kind = MechanismSpec::Kind::None;
  std::vector<std::string> governed;
  std::vector<std::string> predictors;
  friend bool operator==(const MechanismConfig&, const MechanismConfig&) = default;
};

struct DataConfig {
  std::string path;
  std::string response;
  bool intercept = true;
  std::vector<std::string> design;
  std::vector<std::string> auxiliary;
  // Optional explicit model-column ordering (a permutation of design plus
  // auxiliary); the sequential covariate model reads "earlier" along it.
  std::vector<std::string> order;
  friend bool operator==(const DataConfig&, const DataConfig&) = default;
};

struct ProposalConfig {
  double default_scale = 0.25;
  std::map<std::string, double> scales;  // per-parameter overrides
  std::optional<std::vector<std::vector<double>>> matrix;
  friend bool operator==(const ProposalConfig&, const ProposalConfig&) = default;
};

struct RunSettings {
  int iterations = 10000;
  int n_importance = 1000;
  int burn_in = 100;
  std::uint64_t seed = 1;
  int workers = 1;
  double rhat_threshold = 1.1;
  friend bool operator==(const RunSettings&, const RunSettings&) = default;
};

struct SimulateColumn {
  std::string name;
  Family family = Family::Normal;
  std::vector<NamedExpr> params;
  friend bool operator==(const SimulateColumn&, const SimulateColumn&) = default;
};

struct SimulateConfig {
  int n = 0;
  std::vector<SimulateColumn> columns;  // generative model, in model-column order
  std::vector<double> truth_alpha;
  std::vector<double> truth_beta;
  std::vector<double> truth_phi;
  friend bool operator==(const SimulateConfig&, const SimulateConfig&) = default;
};

struct RunConfig {
  DataConfig data;
  std::vector<ParamConfig> alpha;
  std::vector<ParamConfig> beta;
  std::vector<ParamConfig> phi;
  std::vector<NamedConditional> covariate_model;
  std::vector<NamedConditional> is_proposals;
  MechanismConfig mechanism;
  ProposalConfig proposal;
  RunSettings run;
  std::optional<SimulateConfig> simulate;

  // Model-column order: data.order when given, else design then auxiliary.
  std::vector<std::string> column_order() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

// Dataset compiled against the config's column order. Missing cells are the
// empty string or "NA"; any other non-numeric token is an error, as is a
// response outside {0, 1}.
Dataset load_dataset(const std::filesystem::path& path, const RunConfig& config);
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data,
                       const std::string& response_name);

// Index-resolved model plus the parameter layout (inits filled where given).
struct CompiledModel {
  ModelSpec spec;
  ParamVector layout;
  ProposalSpec proposal;
  bool has_full_init = false;
};

CompiledModel compile_model(const RunConfig& config, const Dataset& data);

}  // namespace pmmh

#endif
