#include "ingarch/covariance_check.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ingarch/parallel.hpp"

namespace ingarch {

namespace {

constexpr std::size_t kBatches = 50;

// Generic engine: pair_fn(i) simulates path i and returns the two path values
// whose covariance is being checked.
CovReport run_check(std::size_t t, std::size_t lag, double theoretical, std::size_t n_paths,
                    const std::function<std::pair<double, double>(std::size_t)>& pair_fn) {
  if (n_paths < kBatches * 2) throw std::invalid_argument("covariance check: too few replications");
  std::vector<double> x(n_paths);
  std::vector<double> y(n_paths);
  parallel_for(n_paths, [&](std::size_t i) {
    const auto [xi, yi] = pair_fn(i);
    x[i] = xi;
    y[i] = yi;
  });

  const std::size_t m = n_paths / kBatches;
  std::vector<double> batch(kBatches);
  for (std::size_t b = 0; b < kBatches; ++b) {
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
    batch[b] = ss / static_cast<double>(m - 1);
  }
  double mean = 0.0;
  for (double v : batch) mean += v;
  mean /= static_cast<double>(kBatches);
  double ss = 0.0;
  for (double v : batch) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / static_cast<double>(kBatches - 1) / static_cast<double>(kBatches));

  CovReport report;
  report.t = t;
  report.lag = lag;
  report.empirical_cov = mean;
  report.theoretical_cov = theoretical;
  report.mc_stderr = se;
  report.pass = std::fabs(mean - theoretical) <= 4.0 * se;
  return report;
}

void check_range(std::size_t t, std::size_t lag, std::size_t periods) {
  if (lag == 0) throw std::invalid_argument("covariance check: lag must be >= 1");
  if (t + lag >= periods) throw std::invalid_argument("covariance check: t + lag beyond horizon");
}

}  // namespace

CovReport verify_latent_cov(const poisson::Params& params, std::size_t t, std::size_t lag,
                            std::size_t n_paths, RngStream rng) {
  check_range(t, lag, params.periods());
  const MomentTable table = poisson::moments(params, params.periods());
  const std::size_t horizon = t + lag + 1;
  return run_check(t, lag, table.latent_cov(t, lag), n_paths, [&](std::size_t i) {
    RngStream r = rng.split(i);
    const auto path = poisson::simulate_lifted(params, horizon, r);
    return std::pair<double, double>(static_cast<double>(path.theta[t]),
                                     static_cast<double>(path.theta[t + lag]));
  });
}

CovReport verify_obs_cov(const poisson::Params& params, std::size_t t, std::size_t lag,
                         std::size_t n_paths, RngStream rng) {
  check_range(t, lag, params.periods());
  const MomentTable table = poisson::moments(params, params.periods());
  const std::size_t horizon = t + lag + 1;
  return run_check(t, lag, table.obs_cov(t, lag), n_paths, [&](std::size_t i) {
    RngStream r = rng.split(i);
    const auto path = poisson::simulate_lifted(params, horizon, r);
    return std::pair<double, double>(static_cast<double>(path.z[t]),
                                     static_cast<double>(path.z[t + lag]));
  });
}

CovReport verify_latent_cov(const negbin::Params& params, std::size_t t, std::size_t lag,
                            std::size_t n_paths, RngStream rng) {
  check_range(t, lag, params.periods());
  const MomentTable table = negbin::moments(params, params.periods());
  const std::size_t horizon = t + lag + 1;
  return run_check(t, lag, table.latent_cov(t, lag), n_paths, [&](std::size_t i) {
    RngStream r = rng.split(i);
    const auto path = negbin::simulate_lifted(params, horizon, r);
    return std::pair<double, double>(path.theta[t], path.theta[t + lag]);
  });
}

CovReport verify_obs_cov(const negbin::Params& params, std::size_t t, std::size_t lag,
                         std::size_t n_paths, RngStream rng) {
  check_range(t, lag, params.periods());
  const MomentTable table = negbin::moments(params, params.periods());
  const std::size_t horizon = t + lag + 1;
  return run_check(t, lag, table.obs_cov(t, lag), n_paths, [&](std::size_t i) {
    RngStream r = rng.split(i);
    const auto path = negbin::simulate_lifted(params, horizon, r);
    return std::pair<double, double>(static_cast<double>(path.z[t]),
                                     static_cast<double>(path.z[t + lag]));
  });
}

}  // namespace ingarch
