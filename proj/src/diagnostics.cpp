#include "pmmh/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace pmmh {

namespace {

double mean_of(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m += x;
  return m / static_cast<double>(v.size());
}

// Unbiased sample variance.
double variance_of(std::span<const double> v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

double split_rhat(std::span<const double> samples) {
  if (samples.size() < 4) throw std::invalid_argument("split R-hat needs at least 4 samples");
  const std::size_t usable = samples.size() - (samples.size() % 2);
  const std::size_t m = usable / 2;
  const auto first = samples.subspan(samples.size() - usable, m);
  const auto second = samples.subspan(samples.size() - usable + m, m);

  const double w = 0.5 * (variance_of(first) + variance_of(second));
  const double mean1 = mean_of(first);
  const double mean2 = mean_of(second);
  const double grand = 0.5 * (mean1 + mean2);
  // Between-half variance times m, with the usual (chains - 1) = 1 divisor.
  const double b = static_cast<double>(m) *
                   ((mean1 - grand) * (mean1 - grand) + (mean2 - grand) * (mean2 - grand));
  if (w <= 0.0) return 1.0 / 0.0;
  const double md = static_cast<double>(m);
  const double var_plus = w * (md - 1.0) / md + b / md;
  return std::sqrt(var_plus / w);
}

double mcse(std::span<const double> samples) {
  if (samples.size() < 100) throw std::invalid_argument("mcse needs at least 100 samples");
  bool constant = true;
  for (double v : samples) constant = constant && v == samples[0];
  if (constant) return 0.0;
  const std::size_t n_batches =
      static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(samples.size()))));
  const std::size_t batch_size = samples.size() / n_batches;
  std::vector<double> batch_means(n_batches);
  for (std::size_t b = 0; b < n_batches; ++b) {
    batch_means[b] = mean_of(samples.subspan(b * batch_size, batch_size));
  }
  const double sd = std::sqrt(variance_of(batch_means));
  return sd / std::sqrt(static_cast<double>(n_batches));
}

double empirical_quantile(std::span<const double> samples, double q) {
  if (samples.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::pair<double, double> credible_interval(std::span<const double> samples, double level) {
  if (samples.size() < 40) throw std::invalid_argument("credible interval needs >= 40 samples");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must be in (0, 1)");
  const double tail = 0.5 * (1.0 - level);
  return {empirical_quantile(samples, tail), empirical_quantile(samples, 1.0 - tail)};
}

std::vector<SummaryRow> summarize(const Trace& trace, int burn_in) {
  const int iterations = static_cast<int>(trace.draws.rows());
  if (burn_in < 0 || burn_in >= iterations) {
    throw std::invalid_argument("burn-in must be smaller than the iteration count");
  }
  std::vector<SummaryRow> rows;
  rows.reserve(trace.names.size());
  for (std::size_t j = 0; j < trace.names.size(); ++j) {
    const std::vector<double> full = trace.column(j);
    const std::span<const double> kept(full.data() + burn_in, full.size() - burn_in);
    SummaryRow row;
    row.name = trace.names[j];
    row.estimate = mean_of(kept);
    const auto [min_it, max_it] = std::minmax_element(kept.begin(), kept.end());
    if (*min_it == *max_it) {
      row.mcse = 0.0;
      row.cred_lower = row.cred_upper = row.estimate;
      row.rhat = 1.0 / 0.0;
      row.degenerate = true;
    } else {
      row.mcse = mcse(kept);
      const auto [lo, hi] = credible_interval(kept, 0.95);
      row.cred_lower = lo;
      row.cred_upper = hi;
      row.rhat = split_rhat(kept);
      row.degenerate = !std::isfinite(row.rhat);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string summary_table(const std::vector<SummaryRow>& rows) {
  std::size_t name_w = 5;
  for (const SummaryRow& r : rows) name_w = std::max(name_w, r.name.size());
  std::ostringstream out;
  auto pad = [&](const std::string& s, std::size_t w) {
    out << s;
    for (std::size_t i = s.size(); i < w + 2; ++i) out << ' ';
  };
  pad("param", name_w);
  pad("estimate", 10);
  pad("95% cred.", 20);
  pad("R-hat", 8);
  out << "MCSE\n";
  for (const SummaryRow& r : rows) {
    pad(r.name, name_w);
    pad(fixed3(r.estimate), 10);
    pad("(" + fixed3(r.cred_lower) + ", " + fixed3(r.cred_upper) + ")", 20);
    pad(r.degenerate ? "inf" : fixed3(r.rhat), 8);
    out << fixed3(r.mcse);
    if (r.degenerate) out << "  [degenerate chain]";
    out << '\n';
  }
  return out.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "param,estimate,mcse,cred_lower,cred_upper,rhat,degenerate\n";
  char buf[64];
  for (const SummaryRow& r : rows) {
    out << r.name;
    for (double v : {r.estimate, r.mcse, r.cred_lower, r.cred_upper, r.rhat}) {
      std::snprintf(buf, sizeof(buf), ",%.17g", v);
      out << buf;
    }
    out << ',' << (r.degenerate ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace pmmh
