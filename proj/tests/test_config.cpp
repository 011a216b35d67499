#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "pmmh/config.hpp"
#include "pmmh/csv.hpp"
#include "pmmh/simulate.hpp"
#include "pmmh/trace_io.hpp"
#include "test_helpers.hpp"

using namespace pmmh;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pmmh_tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path config_dir() { return fs::path(PMMH_SOURCE_DIR) / "configs"; }

RunConfig sim_config() { return load_config(config_dir() / "sim_study.json"); }

}  // namespace

TEST_CASE("config parse -> serialize -> parse is the identity") {
  for (const char* name : {"sim_study.json", "nass_cds.json"}) {
    const RunConfig a = load_config(config_dir() / name);
    const RunConfig b = parse_config(to_json(a));
    INFO("config ", name);
    CHECK(a == b);
    // And the serialized form is stable.
    CHECK(to_json(a) == to_json(b));
  }
}

TEST_CASE("dataset loading derives the mask and validates the response") {
  const fs::path path = temp_file("load.csv");
  write_text_file(path,
                  "y,x1,x2\n"
                  "1,0.5,2.25\n"
                  "0,1.5,NA\n"
                  "1,-0.25,\n"
                  "0,2.0,0.125\n");
  const RunConfig config = sim_config();
  const Dataset data = load_dataset(path, config);
  CHECK(data.n_rows() == 4);
  CHECK(data.n_cols() == 2);
  CHECK(data.column_names() == std::vector<std::string>{"x1", "x2"});
  // "NA" and "" mask identically.
  CHECK(!data.observed(1, 1));
  CHECK(!data.observed(2, 1));
  CHECK(data.observed(0, 1));
  CHECK(data.missing_cells().size() == 2);
  CHECK(data.value(0, 1) == 2.25);
}

TEST_CASE("dataset loading rejects malformed input") {
  const RunConfig config = sim_config();
  const fs::path bad_response = temp_file("bad_response.csv");
  write_text_file(bad_response, "y,x1,x2\n2,0.5,1.0\n");
  CHECK_THROWS(load_dataset(bad_response, config));

  const fs::path missing_col = temp_file("missing_col.csv");
  write_text_file(missing_col, "y,x1\n1,0.5\n");
  CHECK_THROWS(load_dataset(missing_col, config));

  const fs::path ragged = temp_file("ragged.csv");
  write_text_file(ragged, "y,x1,x2\n1,0.5\n");
  CHECK_THROWS(load_dataset(ragged, config));

  const fs::path token = temp_file("token.csv");
  write_text_file(token, "y,x1,x2\n1,0.5,unknown\n");
  CHECK_THROWS(load_dataset(token, config));

  const fs::path missing_y = temp_file("missing_y.csv");
  write_text_file(missing_y, "y,x1,x2\n,0.5,1.0\n");
  CHECK_THROWS(load_dataset(missing_y, config));
}

TEST_CASE("dataset write -> load round trip preserves everything") {
  const RunConfig config = sim_config();
  const SimulationResult sim = simulate_dataset(config, 77);
  const fs::path path = temp_file("roundtrip.csv");
  write_dataset_csv(path, sim.data, config.data.response);
  const Dataset back = load_dataset(path, config);
  CHECK(back.responses() == sim.data.responses());
  CHECK(back.mask() == sim.data.mask());
  CHECK(back.column_names() == sim.data.column_names());
  for (int i = 0; i < back.n_rows(); ++i) {
    for (int j = 0; j < back.n_cols(); ++j) {
      if (back.observed(i, j)) CHECK(back.value(i, j) == sim.data.value(i, j));
    }
  }
}

TEST_CASE("simulation is seed-deterministic") {
  const RunConfig config = sim_config();
  const SimulationResult a = simulate_dataset(config, 5);
  const SimulationResult b = simulate_dataset(config, 5);
  CHECK(a.data.responses() == b.data.responses());
  CHECK(a.data.mask() == b.data.mask());
  // Masked cells hold NaN, so compare observed cells only.
  for (int i = 0; i < a.data.n_rows(); ++i) {
    for (int j = 0; j < a.data.n_cols(); ++j) {
      if (a.data.observed(i, j)) CHECK(a.data.value(i, j) == b.data.value(i, j));
    }
  }
  const SimulationResult c = simulate_dataset(config, 6);
  CHECK(a.data.mask() != c.data.mask());
}

TEST_CASE("simulated missingness fraction matches a direct Monte Carlo of the mechanism") {
  RunConfig config = sim_config();
  config.simulate->n = 20000;
  const SimulationResult sim = simulate_dataset(config, 99);
  const double frac = static_cast<double>(sim.data.missing_cells().size()) / config.simulate->n;

  // Direct Monte Carlo of E[1 - IL(1 + x1 + x2)] with its own stream.
  RngStream stream(123456, 0, 0);
  const int n = 400000;
  double expected = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x1 = stream.normal();
    const double x2 = stream.normal();
    expected += 1.0 - 1.0 / (1.0 + std::exp(-(1.0 + x1 + x2)));
  }
  expected /= n;
  const double se = std::sqrt(expected * (1.0 - expected) / config.simulate->n);
  CHECK(std::fabs(frac - expected) < 3.0 * se);
}

TEST_CASE("a saturated mechanism intercept leaves nothing missing") {
  RunConfig config = sim_config();
  config.simulate->truth_phi = {20.0, 1.0, 1.0};
  config.simulate->n = 2000;
  const SimulationResult sim = simulate_dataset(config, 3);
  CHECK(sim.data.missing_cells().size() < 5);
}

TEST_CASE("compile rejects structurally broken configs") {
  const RunConfig good = sim_config();
  const SimulationResult sim = simulate_dataset(good, 42);

  {
    RunConfig bad = good;
    bad.beta.pop_back();  // beta count no longer matches intercept + design
    CHECK_THROWS(compile_model(bad, sim.data));
  }
  {
    RunConfig bad = good;
    bad.covariate_model.clear();  // x2 has missing cells but no entry
    CHECK_THROWS(compile_model(bad, sim.data));
  }
  {
    RunConfig bad = good;
    bad.is_proposals.clear();
    CHECK_THROWS(compile_model(bad, sim.data));
  }
  {
    RunConfig bad = good;
    bad.covariate_model[0].params[1] = NamedExpr{{NamedTerm{std::nullopt, "nope", ""}}};
    CHECK_THROWS(compile_model(bad, sim.data));
  }
  {
    RunConfig bad = good;
    bad.proposal.scales["ghost"] = 0.1;
    CHECK_THROWS(compile_model(bad, sim.data));
  }
  {
    RunConfig bad = good;
    bad.phi.pop_back();  // mechanism needs 1 + |predictors|
    CHECK_THROWS(compile_model(bad, sim.data));
  }
}

TEST_CASE("compiled simulation-study model matches the hand-built spec") {
  const RunConfig config = sim_config();
  const SimulationResult sim = simulate_dataset(config, 4242);
  const CompiledModel model = compile_model(config, sim.data);
  CHECK(model.has_full_init);
  CHECK(model.layout.names ==
        std::vector<std::string>{"alpha", "beta0", "beta1", "beta2", "phi0", "phi1", "phi2"});
  CHECK(model.layout.alpha == std::vector<double>{1.0});
  CHECK(model.layout.beta == std::vector<double>{1.0, -2.0, 3.0});
  CHECK(model.spec.mechanism.governed == std::vector<int>{1});
  CHECK(model.spec.mechanism.predictors == std::vector<int>{0, 1});
  CHECK(model.proposal.scales[0] == 0.6);

  // The compiled spec evaluates identically to the directly built one.
  const auto hand = pmmh::testing::sim_study_model();
  MissingFill fill;
  fill.values.assign(sim.data.missing_cells().size(), 0.25);
  CHECK(log_covariate_model(sim.data, fill, model.spec, model.layout.alpha) ==
        log_covariate_model(sim.data, fill, hand.spec, hand.theta.alpha));
  CHECK(log_mechanism(sim.data, fill, model.spec, model.layout.phi) ==
        log_mechanism(sim.data, fill, hand.spec, hand.theta.phi));
  CHECK(log_prior(model.layout, model.spec) == log_prior(hand.theta, hand.spec));
}

TEST_CASE("real-data example config compiles and matches the published lists") {
  const RunConfig config = load_config(config_dir() / "nass_cds.json");
  CHECK(config.alpha.size() == 11);
  CHECK(config.beta.size() == 12);
  CHECK(config.phi.size() == 1);

  // Synthetic rows shaped like the study data, with missing cells in exactly
  // the columns the config models as incomplete.
  const std::vector<std::string> order = config.column_order();
  std::ostringstream csv;
  csv << config.data.response;
  for (const std::string& c : order) csv << ',' << c;
  csv << '\n';
  RngStream stream(8, 0, 0);
  for (int i = 0; i < 40; ++i) {
    csv << (i % 3 == 0 ? 1 : 0);
    for (const std::string& c : order) {
      const bool missing =
          (c == "sex" || c == "bmi" || c == "dvtotal" || c == "modelyr" || c == "dvc") &&
          stream.uniform() < 0.25;
      if (missing) {
        csv << ',';
      } else if (c == "sex" || c == "kabdeply" || c == "suv" || c == "truck" || c == "van" ||
                 c == "pdofgrFar" || c == "pdofgrNear") {
        csv << ',' << (stream.uniform() < 0.5 ? 1 : 0);
      } else if (c == "dvc") {
        csv << ',' << static_cast<int>(10.0 * stream.uniform());
      } else {
        csv << ',' << format_double(20.0 + stream.normal());
      }
    }
    csv << '\n';
  }
  const fs::path path = temp_file("nass_synthetic.csv");
  write_text_file(path, csv.str());
  const Dataset data = load_dataset(path, config);
  const CompiledModel model = compile_model(config, data);
  CHECK(model.layout.dim() == 24);
  CHECK(model.spec.mechanism.phi_dim() == 1);

  // Prior density spot checks against the listed families.
  const int p_sex = model.layout.index_of("p_sex");
  const double beta_5050_at_half =
      std::lgamma(100.0) - 2.0 * std::lgamma(50.0) + 49.0 * std::log(0.25);
  CHECK(model.spec.priors[p_sex].log_pdf(0.5) ==
        doctest::Approx(beta_5050_at_half).epsilon(1e-12));

  const int xi = model.layout.index_of("xi_bmi");
  CHECK(model.spec.priors[xi].log_pdf(25.0) ==
        doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi * 0.5)).epsilon(1e-12));

  // Log-Normal(3.5, .1) at its median exp(3.5): -log(x) - 0.5 log(2 pi 0.1).
  const int omega = model.layout.index_of("omega_bmi");
  const double at = std::exp(3.5);
  CHECK(model.spec.priors[omega].log_pdf(at) ==
        doctest::Approx(-std::log(at) - 0.5 * std::log(2.0 * std::numbers::pi * 0.1))
            .epsilon(1e-12));

  // Importance proposal spot checks: t2(20, 1) for BMI, NB(1.23, .015) for DVC.
  const int bmi_entry = model.spec.proposal_entry_for(data.column_index("bmi"));
  REQUIRE(bmi_entry >= 0);
  const ConditionalTable table(model.spec.is_proposals, model.layout.alpha);
  const auto bmi_prop = table.resolve(bmi_entry, [](int) { return 0.0; });
  REQUIRE(bmi_prop.has_value());
  const double t2_at_center = std::lgamma(1.5) - std::lgamma(1.0) -
                              0.5 * std::log(2.0 * std::numbers::pi);
  CHECK(bmi_prop->log_pdf(20.0) == doctest::Approx(t2_at_center).epsilon(1e-12));

  const int dvc_entry = model.spec.proposal_entry_for(data.column_index("dvc"));
  const auto dvc_prop = table.resolve(dvc_entry, [](int) { return 0.0; });
  REQUIRE(dvc_prop.has_value());
  CHECK(dvc_prop->log_pdf(0.0) == doctest::Approx(1.23 * std::log(0.015)).epsilon(1e-12));

  // The dvtotal conditional reads dvc through the affine mean.
  const int dvt_entry = model.spec.covariate_entry_for(data.column_index("dvtotal"));
  REQUIRE(dvt_entry >= 0);
  const ConditionalTable cov(model.spec.covariate_model, model.layout.alpha);
  ParamVector probe = model.layout;
  probe.set(model.layout.index_of("alpha_dvtotal"), 2.0);
  probe.set(model.layout.index_of("beta_dvtotal"), 0.5);
  probe.set(model.layout.index_of("sigma2_dvtotal"), 4.0);
  const ConditionalTable cov2(model.spec.covariate_model, probe.alpha);
  const auto dvt = cov2.resolve(dvt_entry, [](int) { return 10.0; });
  REQUIRE(dvt.has_value());
  CHECK(dvt->param(0) == doctest::Approx(2.0 + 0.5 * 10.0));
  CHECK(dvt->param(1) == doctest::Approx(4.0));
}

TEST_CASE("trace files round trip") {
  const auto toy = pmmh::testing::binary_toy();
  ProposalSpec prop;
  prop.scales.assign(toy.theta.dim(), 0.5);
  WorkerPool pool(1);
  Trace trace = run_chain(toy.data, toy.spec, prop, toy.theta, 250, 4, 88, pool);
  trace.meta.burn_in = 25;

  const fs::path csv = temp_file("trace.csv");
  const fs::path meta = temp_file("trace_meta.json");
  write_trace(csv, trace);
  write_trace_meta(meta, trace);
  const Trace back = read_trace(csv, meta);
  CHECK(back.names == trace.names);
  CHECK(back.draws == trace.draws);
  CHECK(back.log_estimates == trace.log_estimates);
  CHECK(back.accepted == trace.accepted);
  CHECK(back.meta.burn_in == 25);
  CHECK(back.meta.n_importance == 4);
  CHECK(back.meta.root_seed == 88);

  // Byte determinism of the serialization itself.
  const fs::path csv2 = temp_file("trace2.csv");
  write_trace(csv2, trace);
  CHECK(read_text_file(csv) == read_text_file(csv2));
}
