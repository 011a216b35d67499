#include "pmmh/trace_io.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pmmh/csv.hpp"

namespace pmmh {

void write_trace(const std::filesystem::path& csv_path, const Trace& trace) {
  std::ostringstream out;
  for (const std::string& name : trace.names) out << name << ',';
  out << "log_estimate,accepted\n";
  const std::size_t dim = trace.names.size();
  for (std::size_t i = 0; i < trace.draws.rows(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) out << format_double(trace.draws(i, j)) << ',';
    out << format_double(trace.log_estimates[i]) << ',' << int(trace.accepted[i]) << '\n';
  }
  write_text_file(csv_path, out.str());
}

void write_trace_meta(const std::filesystem::path& meta_path, const Trace& trace) {
  nlohmann::json j = {{"iterations", trace.meta.iterations},
                      {"n_importance", trace.meta.n_importance},
                      {"seed", trace.meta.root_seed},
                      {"burn_in", trace.meta.burn_in},
                      {"accepted", trace.meta.accepted},
                      {"proposal_scales", trace.meta.proposal_scales},
                      {"parameters", trace.names}};
  write_text_file(meta_path, j.dump(2) + "\n");
}

Trace read_trace(const std::filesystem::path& csv_path, const std::filesystem::path& meta_path) {
  const CsvTable table = read_csv(csv_path);
  if (table.header.size() < 3 || table.header[table.header.size() - 2] != "log_estimate" ||
      table.header.back() != "accepted") {
    throw std::runtime_error("not a trace file: " + csv_path.string());
  }
  Trace trace;
  const std::size_t dim = table.header.size() - 2;
  trace.names.assign(table.header.begin(), table.header.begin() + dim);
  trace.draws = Matrix(table.rows.size(), dim);
  trace.log_estimates.resize(table.rows.size());
  trace.accepted.resize(table.rows.size());
  auto parse = [&](const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      if (s == "inf") return 1.0 / 0.0;
      if (s == "-inf") return -1.0 / 0.0;
      throw std::runtime_error("bad numeric cell in trace: '" + s + "'");
    }
    return v;
  };
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) trace.draws(i, j) = parse(table.rows[i][j]);
    trace.log_estimates[i] = parse(table.rows[i][dim]);
    trace.accepted[i] = table.rows[i][dim + 1] == "1" ? 1 : 0;
  }
  trace.meta.iterations = static_cast<int>(table.rows.size());
  for (std::uint8_t a : trace.accepted) trace.meta.accepted += a;

  if (!meta_path.empty() && std::filesystem::exists(meta_path)) {
    const nlohmann::json j = nlohmann::json::parse(read_text_file(meta_path));
    trace.meta.n_importance = j.value("n_importance", 0);
    trace.meta.root_seed = j.value("seed", std::uint64_t{0});
    trace.meta.burn_in = j.value("burn_in", 0);
    if (j.contains("proposal_scales")) {
      trace.meta.proposal_scales = j.at("proposal_scales").get<std::vector<double>>();
    }
  }
  return trace;
}

}  // namespace pmmh
