#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ingarch/rng.hpp"
#include "ingarch/types.hpp"

// NB-INGARCH(1,1) through its marginalized state-space form: a Poisson
// observation layer over a Gamma latent state, conjugate filtering, the
// variance-stationary shrink recursion, and the Gamma/Beta-thinning coupling
// that realizes the observation-driven lift.
namespace ingarch::negbin {

/// Gamma law of the latent state, Theta ~ Gamma(shape, rate); holds either
/// the predictive pair (a_{t|t-1}, b_{t|t-1}) or the filtered pair (a_t, b_t).
struct State {
  double shape = 0.0;
  double rate = 0.0;
  double mean() const { return shape / rate; }
};

// Panel-form parameters, anchored at the first period with shape == rate ==
// a_anchor so the latent mean is 1; scale heterogeneity lives in lambda.
// delta[t] drives the evolution out of period t (0-based index for period
// t+1 of the one-based panel convention).
struct Params {
  double a_anchor = 1.0;
  std::vector<double> delta;
  std::vector<double> lambda;
  std::vector<std::uint8_t> w;

  std::size_t periods() const { return delta.size(); }
  double wlambda(std::size_t t) const { return w[t] ? lambda[t] : 0.0; }
  void validate() const;
};

/// Conjugate update: (shape + z, rate + w_lambda). w_lambda == 0 skips the
/// update; a positive count is then inconsistent.
State filter(State pred, double z, double w_lambda);

/// Variance-stationary evolution of Example-13 panel form: the shrink factor
/// q = 1 / (delta^2 + (1 - delta^2) rate_f / a_anchor) keeps the
/// unconditional latent variance at 1/a_anchor; drift is c = 1 - delta.
struct Evolved {
  State state;
  double q = 1.0;
};
Evolved evolve(State filtered, double delta, double a_anchor);

// Generic schedules with explicit drift c; the free parameter is pinned by
// the mean identity shape'/rate' = delta * filtered.mean() + c.
State evolve_fixed_rate(State filtered, double delta, double c, double rate_target);
State evolve_fixed_shape(State filtered, double delta, double c, double shape_target);

/// One-step-ahead law of the count: NB(kappa, pi) with kappa = shape and
/// pi = w_lambda / (rate + w_lambda); degenerate at 0 when w_lambda == 0
/// (pi reported as 0).
struct Predictive {
  double kappa = 0.0;
  double pi = 0.0;
  double mean() const { return pi >= 1.0 ? 0.0 : kappa * pi / (1.0 - pi); }
};
Predictive predictive(State pred, double w_lambda_next);
double predictive_logpmf(State pred, double w_lambda_next, std::int64_t z);

/// Unit-exposure coefficient map (lambda == 1): beta0 = c,
/// beta1 = delta / (rate_pred + 1), beta2 = delta rate_pred / (rate_pred + 1).
IngarchCoeffs to_ingarch_unit(double rate_pred, double delta, double c);

/// Inverse of the unit-exposure map: rate_pred = beta2/beta1,
/// delta = beta1 + beta2, c = beta0. delta > 1 is accepted but flagged as
/// outside the lift region.
struct UnitInverse {
  double rate_pred = 0.0;
  double delta = 0.0;
  double c = 0.0;
  bool outside_lift_region = false;
};
UnitInverse from_ingarch(const IngarchCoeffs& coeffs);

/// Exposure-weighted coefficient map for the observation means
/// M_{t+1|t} = wl_next * mu_{t+1|t}. With zero current exposure the map is
/// undefined and the direct mean form M_{t+1|t} = wl_next (c + delta mu_{t|t-1})
/// is returned instead (coeffs empty, direct_mean populated).
struct PanelMap {
  std::optional<IngarchCoeffs> coeffs;
  double direct_mean = 0.0;
};
PanelMap to_ingarch(State pred, double delta, double c, double wl_t, double wl_next);

struct PanelInverse {
  double rate_pred = 0.0;
  double delta = 0.0;
  double c = 0.0;
};
PanelInverse from_ingarch(const IngarchCoeffs& coeffs, double wl_t, double wl_next);

/// Closed-form moments: E[Theta] = 1, Var(Theta) = 1/a_anchor,
/// E[Z_t] = w_t lambda_t, Var(Z_t) = w_t lambda_t + (w_t lambda_t)^2 / a_anchor.
MomentTable moments(const Params& params, std::size_t horizon);

std::vector<std::int64_t> simulate_marginal(const Params& params, std::size_t horizon,
                                            RngStream& rng);

struct Path {
  std::vector<double> theta;
  std::vector<std::int64_t> z;
  std::vector<State> pred;  // predictive state entering each period
};

/// Joint path from the Beta-thinning lift coupling.
Path simulate_lifted(const Params& params, std::size_t horizon, RngStream& rng);

/// One coupling transition given the filtered state and the evolution target:
/// X' = delta Theta_t + V with V ~ Gamma(c rate_f/delta, rate_f/delta),
/// Q ~ Beta(shape', shape_f + c rate_f/delta - shape'), and
/// Theta_{t+1} = (rate_f/delta) Q X' / rate'. Requires
/// delta * rate'/rate_f <= 1; delta == 0 redraws independently.
double lift_step(double theta_t, State filtered, double delta, double c, State target,
                 RngStream& rng);

// Inputs of the log-mgf gap for one transition: the filtered pair, the
// affine-map coefficients and the rate ratio q = rate'/rate_f.
struct MgfContext {
  double shape_f = 0.0;
  double rate_f = 0.0;
  double delta = 0.0;
  double c = 0.0;
  double q = 1.0;
};

/// D(s) = shape_f log(1 - delta s/rate_f) - c s
///        - q (delta shape_f + c rate_f) log(1 - s/(q rate_f)),
/// defined for s < rate_f/delta and s < q rate_f; nonnegative on its domain
/// iff delta * q <= 1.
double mgf_gap(double s, const MgfContext& ctx);

/// Scans 200 log-spaced fractions of the domain's upper end.
GapScan scan_mgf_gap(const MgfContext& ctx);

enum class Parameterization { fixed_rate, fixed_shape };

/// Simulates unit-exposure paths under the fixed-rate or fixed-shape schedule
/// and certifies the convex-order ratio delta * rate'/rate_f <= 1 along them.
struct OrderCertificate {
  double max_ratio = 0.0;
  bool holds = false;
  std::size_t transitions = 0;
};
OrderCertificate parameterization_check(Parameterization mode, double fixed_value,
                                        double anchor_other, std::span<const double> delta,
                                        std::span<const double> c, std::size_t n_paths,
                                        RngStream& rng);

}  // namespace ingarch::negbin
