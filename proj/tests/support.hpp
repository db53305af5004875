#pragma once

// Shared test utilities: chi-square goodness-of-fit against a log-pmf and
// batch-means Monte Carlo standard errors. Oracle-side code only; nothing
// here is used by the library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace testsupport {

// Regularized incomplete gamma P(a, x) by series expansion (x < a + 1).
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 2000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper gamma Q(a, x) by Lentz continued fraction (x >= a + 1).
inline double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 2000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Upper tail of the chi-square distribution with dof degrees of freedom.
inline double chi_square_sf(double x, int dof) {
  if (x <= 0.0) return 1.0;
  const double a = 0.5 * dof;
  const double half = 0.5 * x;
  if (half < a + 1.0) return 1.0 - gamma_p_series(a, half);
  return gamma_q_contfrac(a, half);
}

struct ChiSquareResult {
  double stat = 0.0;
  int dof = 0;
  double p_value = 0.0;
};

// Goodness-of-fit of integer draws against log_pmf over {0, 1, ...}. Cells
// are merged left to right until each carries expected mass >= 10; the tail
// beyond the largest draw forms the final cell.
inline ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& draws,
                                      const std::function<double(std::int64_t)>& log_pmf) {
  std::int64_t max_draw = 0;
  for (auto d : draws) {
    if (d < 0) throw std::invalid_argument("chi_square_gof: negative draw");
    max_draw = std::max(max_draw, d);
  }
  const double n = static_cast<double>(draws.size());
  std::vector<double> observed(static_cast<std::size_t>(max_draw) + 1, 0.0);
  for (auto d : draws) observed[static_cast<std::size_t>(d)] += 1.0;
  std::vector<double> expected(observed.size());
  double mass = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    const double pk = std::exp(log_pmf(static_cast<std::int64_t>(k)));
    expected[k] = n * pk;
    mass += pk;
  }
  const double tail_expected = n * std::max(0.0, 1.0 - mass);

  std::vector<double> obs_bins;
  std::vector<double> exp_bins;
  double acc_obs = 0.0;
  double acc_exp = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    acc_obs += observed[k];
    acc_exp += expected[k];
    if (acc_exp >= 10.0) {
      obs_bins.push_back(acc_obs);
      exp_bins.push_back(acc_exp);
      acc_obs = acc_exp = 0.0;
    }
  }
  // fold the remainder and the analytic tail into the last cell
  acc_exp += tail_expected;
  if (obs_bins.empty() || acc_exp >= 10.0) {
    obs_bins.push_back(acc_obs);
    exp_bins.push_back(acc_exp);
  } else {
    obs_bins.back() += acc_obs;
    exp_bins.back() += acc_exp;
  }

  ChiSquareResult result;
  for (std::size_t b = 0; b < obs_bins.size(); ++b) {
    const double diff = obs_bins[b] - exp_bins[b];
    result.stat += diff * diff / exp_bins[b];
  }
  result.dof = static_cast<int>(obs_bins.size()) - 1;
  if (result.dof < 1) result.dof = 1;
  result.p_value = chi_square_sf(result.stat, result.dof);
  return result;
}

struct BatchStat {
  double estimate = 0.0;
  double mc_stderr = 0.0;
  bool within(double theoretical, double n_se = 4.0) const {
    return std::fabs(estimate - theoretical) <= n_se * mc_stderr;
  }
};

namespace detail {
inline BatchStat combine(const std::vector<double>& batch_values) {
  const double b = static_cast<double>(batch_values.size());
  double mean = 0.0;
  for (double v : batch_values) mean += v;
  mean /= b;
  double ss = 0.0;
  for (double v : batch_values) ss += (v - mean) * (v - mean);
  return BatchStat{mean, std::sqrt(ss / (b - 1.0) / b)};
}
}  // namespace detail

inline BatchStat batch_mean(std::span<const double> v, std::size_t batches = 50) {
  std::vector<double> vals(batches);
  const std::size_t m = v.size() / batches;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * m; i < (b + 1) * m; ++i) s += v[i];
    vals[b] = s / static_cast<double>(m);
  }
  return detail::combine(vals);
}

inline BatchStat batch_var(std::span<const double> v, std::size_t batches = 50) {
  std::vector<double> vals(batches);
  const std::size_t m = v.size() / batches;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * m; i < (b + 1) * m; ++i) s += v[i];
    const double mean = s / static_cast<double>(m);
    double ss = 0.0;
    for (std::size_t i = b * m; i < (b + 1) * m; ++i) ss += (v[i] - mean) * (v[i] - mean);
    vals[b] = ss / static_cast<double>(m - 1);
  }
  return detail::combine(vals);
}

inline BatchStat batch_cov(std::span<const double> x, std::span<const double> y,
                           std::size_t batches = 50) {
  std::vector<double> vals(batches);
  const std::size_t m = x.size() / batches;
  for (std::size_t b = 0; b < batches; ++b) {
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = b * m; i < (b + 1) * m; ++i) {
      sx += x[i];
      sy += y[i];
    }
    const double mx = sx / static_cast<double>(m);
    const double my = sy / static_cast<double>(m);
    double ss = 0.0;
    for (std::size_t i = b * m; i < (b + 1) * m; ++i) ss += (x[i] - mx) * (y[i] - my);
    vals[b] = ss / static_cast<double>(m - 1);
  }
  return detail::combine(vals);
}

}  // namespace testsupport
