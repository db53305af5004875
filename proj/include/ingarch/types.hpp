#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ingarch {

// One-step conditional-mean recursion coefficients:
// M_{t+1|t} = beta0 + beta1 * Z_t + beta2 * M_{t|t-1}.
struct IngarchCoeffs {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
};

// Closed-form first and second moments of a latent path and its observations.
// obs_scale[t] is the conditional-mean factor in E[Z_t | Theta_t] =
// obs_scale[t] * Theta_t (w_t p_t for the binomial layer, w_t lambda_t for
// the Poisson layer); delta[t] drives the evolution out of period t.
struct MomentTable {
  std::vector<double> mean_theta;
  std::vector<double> var_theta;
  std::vector<double> mean_z;
  std::vector<double> var_z;
  std::vector<double> obs_scale;
  std::vector<double> delta;

  std::size_t periods() const { return mean_theta.size(); }

  /// Cov(Theta_t, Theta_{t+k}) = (prod of deltas over [t, t+k)) * Var(Theta_t).
  double latent_cov(std::size_t t, std::size_t k) const {
    if (k == 0) return var_theta.at(t);
    if (t + k >= periods()) throw std::out_of_range("latent_cov: t + k beyond horizon");
    double prod = 1.0;
    for (std::size_t j = t; j < t + k; ++j) prod *= delta[j];
    return prod * var_theta[t];
  }

  /// Cov(Z_t, Z_{t+k}) for k >= 1.
  double obs_cov(std::size_t t, std::size_t k) const {
    if (k == 0) return var_z.at(t);
    return obs_scale.at(t) * obs_scale.at(t + k) * latent_cov(t, k);
  }
};

// Result of scanning the log-mgf gap D(s) between the one-step-evolved state
// and the affine map of the current state.
struct GapScan {
  double min_gap = 0.0;
  double argmin_s = 0.0;
  bool violated = false;   // some s with D(s) < -1e-6 was found
  double witness_s = 0.0;  // meaningful only when violated
  double witness_gap = 0.0;
};

}  // namespace ingarch
