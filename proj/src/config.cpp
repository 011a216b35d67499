#include "pmmh/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pmmh/csv.hpp"

namespace pmmh {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("config: " + msg); }

Family family_from_json(const json& j) {
  if (!j.is_string()) fail("expected a family name");
  const auto f = parse_family(j.get<std::string>());
  if (!f) fail("unknown distribution family '" + j.get<std::string>() + "'");
  return *f;
}

NamedExpr expr_from_json(const json& j) {
  NamedExpr expr;
  if (j.is_number()) {
    expr.terms.push_back({j.get<double>(), "", ""});
    return expr;
  }
  if (j.is_string()) {
    expr.terms.push_back({std::nullopt, j.get<std::string>(), ""});
    return expr;
  }
  if (j.is_object() && j.contains("terms")) {
    for (const json& t : j.at("terms")) {
      NamedTerm term;
      const bool has_const = t.contains("const");
      const bool has_alpha = t.contains("alpha");
      if (has_const == has_alpha) fail("a term needs exactly one of 'const' or 'alpha'");
      if (has_const) term.literal = t.at("const").get<double>();
      if (has_alpha) term.alpha = t.at("alpha").get<std::string>();
      if (t.contains("column")) term.column = t.at("column").get<std::string>();
      expr.terms.push_back(std::move(term));
    }
    return expr;
  }
  fail("parameter expressions are a number, an alpha name, or {\"terms\": [...]}");
}

json expr_to_json(const NamedExpr& expr) {
  if (expr.terms.size() == 1) {
    const NamedTerm& t = expr.terms[0];
    if (t.column.empty()) {
      if (t.literal) return json(*t.literal);
      return json(t.alpha);
    }
  }
  json terms = json::array();
  for (const NamedTerm& t : expr.terms) {
    json obj = json::object();
    if (t.literal) obj["const"] = *t.literal;
    if (!t.alpha.empty()) obj["alpha"] = t.alpha;
    if (!t.column.empty()) obj["column"] = t.column;
    terms.push_back(std::move(obj));
  }
  return json{{"terms", std::move(terms)}};
}

std::vector<NamedConditional> conditionals_from_json(const json& j) {
  std::vector<NamedConditional> out;
  for (const json& e : j) {
    NamedConditional c;
    c.column = e.at("column").get<std::string>();
    c.family = family_from_json(e.at("family"));
    for (const json& p : e.at("params")) c.params.push_back(expr_from_json(p));
    if (c.params.size() != family_arity(c.family)) {
      fail("conditional for '" + c.column + "' has wrong parameter count");
    }
    out.push_back(std::move(c));
  }
  return out;
}

json conditionals_to_json(const std::vector<NamedConditional>& entries) {
  json out = json::array();
  for (const NamedConditional& c : entries) {
    json params = json::array();
    for (const NamedExpr& e : c.params) params.push_back(expr_to_json(e));
    out.push_back(json{{"column", c.column},
                       {"family", std::string(family_name(c.family))},
                       {"params", std::move(params)}});
  }
  return out;
}

std::vector<ParamConfig> params_from_json(const json& j) {
  std::vector<ParamConfig> out;
  for (const json& e : j) {
    ParamConfig p;
    p.name = e.at("name").get<std::string>();
    const auto t = parse_transform(e.value("transform", "identity"));
    if (!t) fail("unknown transform for parameter '" + p.name + "'");
    p.transform = *t;
    const json& prior = e.at("prior");
    if (!prior.is_array() || prior.empty()) fail("prior must be [\"Family\", params...]");
    p.prior_family = family_from_json(prior.at(0));
    for (std::size_t i = 1; i < prior.size(); ++i) p.prior_params.push_back(prior[i].get<double>());
    if (e.contains("init")) p.init = e.at("init").get<double>();
    out.push_back(std::move(p));
  }
  return out;
}

json params_to_json(const std::vector<ParamConfig>& params) {
  json out = json::array();
  for (const ParamConfig& p : params) {
    json prior = json::array();
    prior.push_back(std::string(family_name(p.prior_family)));
    for (double v : p.prior_params) prior.push_back(v);
    json e = {{"name", p.name},
              {"transform", std::string(transform_name(p.transform))},
              {"prior", std::move(prior)}};
    if (p.init) e["init"] = *p.init;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<std::string> strings_from_json(const json& j) {
  std::vector<std::string> out;
  for (const json& e : j) out.push_back(e.get<std::string>());
  return out;
}

}  // namespace

std::vector<std::string> RunConfig::column_order() const {
  if (!data.order.empty()) return data.order;
  std::vector<std::string> order = data.design;
  order.insert(order.end(), data.auxiliary.begin(), data.auxiliary.end());
  return order;
}

RunConfig parse_config(const json& j) {
  RunConfig c;
  const json& d = j.at("data");
  c.data.path = d.value("path", "");
  c.data.response = d.at("response").get<std::string>();
  c.data.intercept = d.value("intercept", true);
  c.data.design = strings_from_json(d.at("design"));
  if (d.contains("auxiliary")) c.data.auxiliary = strings_from_json(d.at("auxiliary"));
  if (d.contains("order")) c.data.order = strings_from_json(d.at("order"));

  const json& params = j.at("parameters");
  if (params.contains("alpha")) c.alpha = params_from_json(params.at("alpha"));
  c.beta = params_from_json(params.at("beta"));
  if (params.contains("phi")) c.phi = params_from_json(params.at("phi"));

  if (j.contains("covariate_model")) c.covariate_model = conditionals_from_json(j.at("covariate_model"));
  if (j.contains("is_proposals")) c.is_proposals = conditionals_from_json(j.at("is_proposals"));

  if (j.contains("mechanism")) {
    const json& m = j.at("mechanism");
    const std::string kind = m.value("kind", "none");
    if (kind == "logistic") {
      c.mechanism.kind = MechanismSpec::Kind::Logistic;
      c.mechanism.governed = strings_from_json(m.at("governed"));
      if (m.contains("predictors")) c.mechanism.predictors = strings_from_json(m.at("predictors"));
    } else if (kind == "none") {
      c.mechanism.kind = MechanismSpec::Kind::None;
    } else {
      fail("mechanism kind must be 'logistic' or 'none'");
    }
  }

  if (j.contains("proposal")) {
    const json& p = j.at("proposal");
    c.proposal.default_scale = p.value("default_scale", 0.25);
    if (p.contains("scales")) {
      for (const auto& [name, value] : p.at("scales").items()) {
        c.proposal.scales[name] = value.get<double>();
      }
    }
    if (p.contains("matrix")) {
      std::vector<std::vector<double>> m;
      for (const json& row : p.at("matrix")) m.push_back(row.get<std::vector<double>>());
      c.proposal.matrix = std::move(m);
    }
  }

  if (j.contains("run")) {
    const json& r = j.at("run");
    c.run.iterations = r.value("iterations", c.run.iterations);
    c.run.n_importance = r.value("n_importance", c.run.n_importance);
    c.run.burn_in = r.value("burn_in", c.run.burn_in);
    c.run.seed = r.value("seed", c.run.seed);
    c.run.workers = r.value("workers", c.run.workers);
    c.run.rhat_threshold = r.value("rhat_threshold", c.run.rhat_threshold);
  }

  if (j.contains("simulate")) {
    const json& s = j.at("simulate");
    SimulateConfig sim;
    sim.n = s.at("n").get<int>();
    for (const json& col : s.at("columns")) {
      SimulateColumn sc;
      sc.name = col.at("name").get<std::string>();
      sc.family = family_from_json(col.at("family"));
      for (const json& p : col.at("params")) sc.params.push_back(expr_from_json(p));
      if (sc.params.size() != family_arity(sc.family)) {
        fail("simulate column '" + sc.name + "' has wrong parameter count");
      }
      sim.columns.push_back(std::move(sc));
    }
    const json& truth = s.at("truth");
    if (truth.contains("alpha")) sim.truth_alpha = truth.at("alpha").get<std::vector<double>>();
    sim.truth_beta = truth.at("beta").get<std::vector<double>>();
    if (truth.contains("phi")) sim.truth_phi = truth.at("phi").get<std::vector<double>>();
    c.simulate = std::move(sim);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(json::parse(read_text_file(path)));
}

json to_json(const RunConfig& c) {
  json j;
  json d = {{"path", c.data.path},
            {"response", c.data.response},
            {"intercept", c.data.intercept},
            {"design", c.data.design}};
  if (!c.data.auxiliary.empty()) d["auxiliary"] = c.data.auxiliary;
  if (!c.data.order.empty()) d["order"] = c.data.order;
  j["data"] = std::move(d);

  json params;
  if (!c.alpha.empty()) params["alpha"] = params_to_json(c.alpha);
  params["beta"] = params_to_json(c.beta);
  if (!c.phi.empty()) params["phi"] = params_to_json(c.phi);
  j["parameters"] = std::move(params);

  if (!c.covariate_model.empty()) j["covariate_model"] = conditionals_to_json(c.covariate_model);
  if (!c.is_proposals.empty()) j["is_proposals"] = conditionals_to_json(c.is_proposals);

  json m;
  if (c.mechanism.kind == MechanismSpec::Kind::Logistic) {
    m["kind"] = "logistic";
    m["governed"] = c.mechanism.governed;
    if (!c.mechanism.predictors.empty()) m["predictors"] = c.mechanism.predictors;
  } else {
    m["kind"] = "none";
  }
  j["mechanism"] = std::move(m);

  json p = {{"default_scale", c.proposal.default_scale}};
  if (!c.proposal.scales.empty()) {
    json scales;
    for (const auto& [name, value] : c.proposal.scales) scales[name] = value;
    p["scales"] = std::move(scales);
  }
  if (c.proposal.matrix) p["matrix"] = *c.proposal.matrix;
  j["proposal"] = std::move(p);

  j["run"] = {{"iterations", c.run.iterations},     {"n_importance", c.run.n_importance},
              {"burn_in", c.run.burn_in},           {"seed", c.run.seed},
              {"workers", c.run.workers},           {"rhat_threshold", c.run.rhat_threshold}};

  if (c.simulate) {
    json cols = json::array();
    for (const SimulateColumn& sc : c.simulate->columns) {
      json ps = json::array();
      for (const NamedExpr& e : sc.params) ps.push_back(expr_to_json(e));
      cols.push_back(json{{"name", sc.name},
                          {"family", std::string(family_name(sc.family))},
                          {"params", std::move(ps)}});
    }
    json truth;
    if (!c.simulate->truth_alpha.empty()) truth["alpha"] = c.simulate->truth_alpha;
    truth["beta"] = c.simulate->truth_beta;
    if (!c.simulate->truth_phi.empty()) truth["phi"] = c.simulate->truth_phi;
    j["simulate"] = {{"n", c.simulate->n}, {"columns", std::move(cols)}, {"truth", std::move(truth)}};
  }
  return j;
}

namespace {

bool parse_cell(const std::string& raw, double& out, bool& missing) {
  if (raw.empty() || raw == "NA") {
    missing = true;
    return true;
  }
  missing = false;
  const char* begin = raw.data();
  const char* end = raw.data() + raw.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path, const RunConfig& config) {
  const CsvTable table = read_csv(path);
  auto col_of = [&](const std::string& name) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) {
      throw std::runtime_error("column '" + name + "' not found in " + path.string());
    }
    return static_cast<std::size_t>(it - table.header.begin());
  };

  const std::vector<std::string> order = config.column_order();
  const std::size_t n = table.rows.size();
  const std::size_t p = order.size();
  const std::size_t y_col = col_of(config.data.response);
  std::vector<std::size_t> cols(p);
  for (std::size_t j = 0; j < p; ++j) cols[j] = col_of(order[j]);

  std::vector<int> y(n);
  Matrix x(n, p);
  std::vector<std::uint8_t> mask(n * p, 1);
  for (std::size_t i = 0; i < n; ++i) {
    double value = 0.0;
    bool missing = false;
    if (!parse_cell(table.rows[i][y_col], value, missing) || missing) {
      throw std::runtime_error("response must be fully observed and numeric");
    }
    if (value != 0.0 && value != 1.0) throw std::runtime_error("response must be 0 or 1");
    y[i] = static_cast<int>(value);
    for (std::size_t j = 0; j < p; ++j) {
      if (!parse_cell(table.rows[i][cols[j]], value, missing)) {
        throw std::runtime_error("non-numeric cell '" + table.rows[i][cols[j]] + "' in column '" +
                                 order[j] + "'");
      }
      if (missing) {
        mask[i * p + j] = 0;
      } else {
        x(i, j) = value;
      }
    }
  }
  return Dataset(std::move(y), std::move(x), std::move(mask), order);
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data,
                       const std::string& response_name) {
  std::ostringstream out;
  out << response_name;
  for (const std::string& name : data.column_names()) out << ',' << name;
  out << '\n';
  for (int i = 0; i < data.n_rows(); ++i) {
    out << data.response(i);
    for (int j = 0; j < data.n_cols(); ++j) {
      out << ',';
      if (data.observed(i, j)) out << format_double(data.value(i, j));
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

namespace {

ParamExpr resolve_expr(const NamedExpr& expr, const std::vector<ParamConfig>& alpha,
                       const std::vector<std::string>& columns) {
  ParamExpr out;
  for (const NamedTerm& t : expr.terms) {
    ParamTerm term;
    if (t.literal) {
      term.literal = *t.literal;
    } else {
      const auto it = std::find_if(alpha.begin(), alpha.end(),
                                   [&](const ParamConfig& p) { return p.name == t.alpha; });
      if (it == alpha.end()) fail("unknown alpha parameter '" + t.alpha + "'");
      term.alpha_index = static_cast<int>(it - alpha.begin());
    }
    if (!t.column.empty()) {
      const auto it = std::find(columns.begin(), columns.end(), t.column);
      if (it == columns.end()) fail("unknown column '" + t.column + "' in a parameter expression");
      term.column = static_cast<int>(it - columns.begin());
    }
    out.terms.push_back(term);
  }
  return out;
}

std::vector<ConditionalSpec> resolve_conditionals(const std::vector<NamedConditional>& entries,
                                                  const std::vector<ParamConfig>& alpha,
                                                  const std::vector<std::string>& columns) {
  std::vector<ConditionalSpec> out;
  for (const NamedConditional& e : entries) {
    ConditionalSpec spec;
    const auto it = std::find(columns.begin(), columns.end(), e.column);
    if (it == columns.end()) fail("conditional references unknown column '" + e.column + "'");
    spec.column = static_cast<int>(it - columns.begin());
    spec.family = e.family;
    for (const NamedExpr& p : e.params) spec.params.push_back(resolve_expr(p, alpha, columns));
    out.push_back(std::move(spec));
  }
  std::sort(out.begin(), out.end(),
            [](const ConditionalSpec& a, const ConditionalSpec& b) { return a.column < b.column; });
  return out;
}

}  // namespace

CompiledModel compile_model(const RunConfig& config, const Dataset& data) {
  CompiledModel out;
  const std::vector<std::string> columns = config.column_order();
  if (data.column_names() != columns) {
    fail("dataset column order does not match the config");
  }
  {
    std::set<std::string> seen;
    for (const std::string& c : columns) {
      if (!seen.insert(c).second) fail("duplicate column '" + c + "'");
    }
  }

  // Layout: names, transforms, priors in alpha | beta | phi order.
  auto append_block = [&](const std::vector<ParamConfig>& block, std::vector<double>& values) {
    for (const ParamConfig& p : block) {
      out.layout.names.push_back(p.name);
      out.layout.transforms.push_back(p.transform);
      out.spec.priors.emplace_back(p.prior_family, p.prior_params);
      values.push_back(p.init.value_or(0.0));
      if (!p.init) out.has_full_init = false;
    }
  };
  out.has_full_init = true;
  append_block(config.alpha, out.layout.alpha);
  append_block(config.beta, out.layout.beta);
  append_block(config.phi, out.layout.phi);
  {
    std::set<std::string> seen;
    for (const std::string& n : out.layout.names) {
      if (!seen.insert(n).second) fail("duplicate parameter name '" + n + "'");
    }
  }

  out.spec.intercept = config.data.intercept;
  for (const std::string& name : config.data.design) {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) fail("design column '" + name + "' missing from the column order");
    out.spec.design_columns.push_back(static_cast<int>(it - columns.begin()));
  }
  if (out.layout.beta.size() != out.spec.beta_dim()) {
    fail("beta parameter count must be " + std::to_string(out.spec.beta_dim()) +
         " (intercept plus design columns)");
  }

  out.spec.covariate_model = resolve_conditionals(config.covariate_model, config.alpha, columns);
  out.spec.is_proposals = resolve_conditionals(config.is_proposals, config.alpha, columns);

  out.spec.mechanism.kind = config.mechanism.kind;
  auto to_index = [&](const std::string& name) {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) fail("mechanism references unknown column '" + name + "'");
    return static_cast<int>(it - columns.begin());
  };
  for (const std::string& name : config.mechanism.governed) {
    out.spec.mechanism.governed.push_back(to_index(name));
  }
  for (const std::string& name : config.mechanism.predictors) {
    out.spec.mechanism.predictors.push_back(to_index(name));
  }
  if (out.layout.phi.size() != out.spec.mechanism.phi_dim()) {
    fail("phi parameter count must be " + std::to_string(out.spec.mechanism.phi_dim()));
  }

  out.proposal.scales.assign(out.layout.dim(), config.proposal.default_scale);
  for (const auto& [name, scale] : config.proposal.scales) {
    const int idx = out.layout.index_of(name);
    if (idx < 0) fail("proposal scale for unknown parameter '" + name + "'");
    out.proposal.scales[idx] = scale;
  }
  if (config.proposal.matrix) {
    const auto& m = *config.proposal.matrix;
    Matrix dense(m.size(), m.empty() ? 0 : m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i].size() != dense.cols()) fail("proposal matrix rows have unequal lengths");
      for (std::size_t j = 0; j < m[i].size(); ++j) dense(i, j) = m[i][j];
    }
    out.proposal.scale_matrix = std::move(dense);
  }

  out.spec.validate(data, out.layout);
  out.proposal.validate(out.layout.dim());
  return out;
}

}  // namespace pmmh
