#pragma once

#include <cstddef>

#include "ingarch/negbin.hpp"
#include "ingarch/poisson.hpp"
#include "ingarch/rng.hpp"

// Monte Carlo verification of the serial covariance laws shared by both
// models: Cov(Theta_t, Theta_{t+k}) = (prod delta) Var(Theta_t) on the latent
// layer and Cov(Z_t, Z_{t+k}) = lambda_t lambda_{t+k} Cov(Theta_t, Theta_{t+k})
// on the observation layer, with lambda the per-period conditional-mean scale.
namespace ingarch {

struct CovReport {
  std::size_t t = 0;
  std::size_t lag = 0;
  double empirical_cov = 0.0;
  double theoretical_cov = 0.0;
  double mc_stderr = 0.0;
  bool pass = false;  // |empirical - theoretical| <= 4 stderr
};

// Empirical covariances come from lifted-path replications; the point
// estimate and its standard error use batch means over 50 batches, so the
// aggregation is order-insensitive across batches.
CovReport verify_latent_cov(const poisson::Params& params, std::size_t t, std::size_t lag,
                            std::size_t n_paths, RngStream rng);
CovReport verify_obs_cov(const poisson::Params& params, std::size_t t, std::size_t lag,
                         std::size_t n_paths, RngStream rng);
CovReport verify_latent_cov(const negbin::Params& params, std::size_t t, std::size_t lag,
                            std::size_t n_paths, RngStream rng);
CovReport verify_obs_cov(const negbin::Params& params, std::size_t t, std::size_t lag,
                         std::size_t n_paths, RngStream rng);

}  // namespace ingarch
