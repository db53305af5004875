#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ingarch/rng.hpp"
#include "ingarch/types.hpp"

// Poisson-INGARCH(1,1) through its marginalized state-space form: a binomial
// observation layer thinning a Poisson latent count, a closed-form filtering
// update, the affine latent-mean evolution, and the binomial-survival /
// Poisson-recruitment coupling that realizes the observation-driven lift.
namespace ingarch::poisson {

/// Predictive latent law: Theta_t | Z_{<t} ~ Poi(mean).
struct State {
  double mean = 0.0;
};

// Panel-form parameter block. Period 0 is the anchor period; delta[t] and
// drift(t) drive the evolution out of period t. When c is empty the drift
// defaults to (1 - delta[t]) * mu, which keeps the latent mean anchored at mu.
struct Params {
  double mu = 1.0;
  std::vector<double> delta;
  std::vector<double> p;
  std::vector<std::uint8_t> w;
  std::vector<double> c;  // optional explicit drifts

  std::size_t periods() const { return delta.size(); }
  double pstar(std::size_t t) const { return w[t] ? p[t] : 0.0; }
  double drift(std::size_t t) const { return c.empty() ? (1.0 - delta[t]) * mu : c[t]; }
  void validate() const;
};

/// Mean of Theta_t | Z_{<=t}, i.e. of z + K with K ~ Poi((1-p_star) * mean).
/// p_star == 0 skips the update (no-exposure period) and returns the
/// predictive mean unchanged; a positive count is then inconsistent.
double filter(State state, double z, double p_star);

/// Advances the predictive mean: mean' = delta * filtered_mean + c.
State evolve(double filtered_mean, double delta, double c);

/// log P(Z_t = z | Z_{<t}) where Z_t | Z_{<t} ~ Poi(p_star * mean);
/// degenerate at 0 when p_star == 0.
double predictive_logpmf(State state, double p_star, std::int64_t z);

/// Coefficients of the induced INGARCH recursion for the observation means:
/// beta0 = p_next c, beta1 = p_next delta, beta2 = p_next delta (1/p_t - 1).
IngarchCoeffs to_ingarch(double delta, double c, double p_t, double p_next);

struct MssmPeriod {
  double p = 0.0;
  double delta = 0.0;
  double c = 0.0;
};

/// p_t = beta1 / (beta1 + beta2), recoverable from one period alone.
double thinning_prob(const IngarchCoeffs& coeffs);

/// Unique state-space parameters behind a coefficient pair; the successor
/// period supplies p_{t+1}.
MssmPeriod from_ingarch(const IngarchCoeffs& current, const IngarchCoeffs& successor);

// Sequence inversion: p has one entry per period, delta and c one entry per
// period except the last (its successor coefficients are not available).
struct MssmSequence {
  std::vector<double> p;
  std::vector<double> delta;
  std::vector<double> c;
};
MssmSequence from_ingarch(std::span<const IngarchCoeffs> coeffs);

/// Per-period delta making Var(Theta_t) constant for t >= 1:
/// delta_t^2 = delta0^2 pstar0 / (delta0^2 pstar0 + pstar_t).
/// A vanishing denominator returns 1 by continuity; *convention_used flags it.
double stationary_delta(double delta0, double pstar0, double pstar_t,
                        bool* convention_used = nullptr);

/// Closed-form moments for periods 0..horizon-1, anchored at
/// Var(Theta_0) = mu with the variance recursion
/// Var(Theta_{t+1}) = delta_t^2 Var(Theta_t) + mu (1 - delta_t^2 (1 - w_t p_t)).
MomentTable moments(const Params& params, std::size_t horizon);

std::vector<std::int64_t> simulate_marginal(const Params& params, std::size_t horizon,
                                            RngStream& rng);

struct Path {
  std::vector<std::int64_t> theta;
  std::vector<std::int64_t> z;
  std::vector<double> mu_pred;  // predictive mean entering each period
};

/// Joint path from the lift coupling; requires delta in [0, 1] per period.
Path simulate_lifted(const Params& params, std::size_t horizon, RngStream& rng);

/// One coupling transition: Theta_{t+1} = Binom(Theta_t - Z_t, delta) +
/// Poi(delta * Z_t + c), so E[Theta_{t+1} | Theta_t, Z_{<=t}] =
/// delta * Theta_t + c while Theta_{t+1} | Z_{<=t} keeps its Poisson law.
std::int64_t lift_step(std::int64_t theta_t, std::int64_t z_t, double delta, double c,
                       RngStream& rng);

// Inputs of the log-mgf gap D(s) for one transition given the history:
// mu_prev is the predictive mean entering the period and z the count seen.
struct MgfContext {
  double delta = 0.0;
  double c = 0.0;
  double p = 0.0;
  double mu_prev = 0.0;
  double z = 0.0;
};

/// D(s) = mu_next (e^s - 1) - (1-p) mu_prev (e^{delta s} - 1)
///        - s (delta z + c); nonnegative for all s iff delta <= 1.
/// Values beyond double range are clamped to +/-1e300.
double mgf_gap(double s, const MgfContext& ctx);

/// Scans a 200-point log-spaced grid over s in [1e-3, 50]; when delta > 1 and
/// the base grid shows no violation the search extends to larger s until the
/// gap turns negative.
GapScan scan_mgf_gap(const MgfContext& ctx);

}  // namespace ingarch::poisson
