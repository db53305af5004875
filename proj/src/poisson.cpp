#include "ingarch/poisson.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "ingarch/kernels.hpp"

namespace ingarch::poisson {

namespace {

[[noreturn]] void fail(const char* fmt, double a = 0, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  throw std::domain_error(buf);
}

void check_pstar(double p_star) {
  if (!(p_star >= 0.0 && p_star < 1.0)) fail("thinning probability p* = %g outside [0, 1)", p_star);
}

}  // namespace

void Params::validate() const {
  const std::size_t n = periods();
  if (n == 0) fail("poisson params: no periods");
  if (!(mu > 0.0) || !std::isfinite(mu)) fail("poisson params: mu = %g outside (0, inf)", mu);
  if (p.size() != n || w.size() != n || (!c.empty() && c.size() != n))
    fail("poisson params: per-period vectors disagree on length");
  for (std::size_t t = 0; t < n; ++t) {
    if (!(delta[t] >= 0.0 && delta[t] <= 1.0)) fail("poisson params: delta[%g] = %g outside [0, 1]", double(t), delta[t]);
    if (!(p[t] > 0.0 && p[t] < 1.0)) fail("poisson params: p[%g] = %g outside (0, 1)", double(t), p[t]);
    if (w[t] > 1) fail("poisson params: w[%g] not in {0, 1}", double(t));
    const double ct = drift(t);
    if (!(ct >= 0.0)) fail("poisson params: c[%g] = %g negative", double(t), ct);
    if (delta[t] == 0.0 && ct == 0.0) fail("poisson params: (delta, c) = (0, 0) at t = %g", double(t));
  }
}

double filter(State state, double z, double p_star) {
  check_pstar(p_star);
  if (!(state.mean > 0.0)) fail("filter: predictive mean %g not positive", state.mean);
  if (p_star == 0.0) {
    if (z != 0.0) throw std::runtime_error("filter: positive count under zero exposure");
    return state.mean;
  }
  if (!(z >= 0.0) || !std::isfinite(z)) fail("filter: count %g invalid", z);
  return z + (1.0 - p_star) * state.mean;
}

State evolve(double filtered_mean, double delta, double c) {
  if (!(delta >= 0.0 && delta <= 1.0)) fail("evolve: delta = %g outside [0, 1]", delta);
  if (!(c >= 0.0)) fail("evolve: c = %g negative", c);
  if (!(filtered_mean >= 0.0)) fail("evolve: filtered mean %g negative", filtered_mean);
  const double next = delta * filtered_mean + c;
  if (!(next > 0.0)) fail("evolve: degenerate predictive mean %g", next);
  return State{next};
}

double predictive_logpmf(State state, double p_star, std::int64_t z) {
  check_pstar(p_star);
  if (p_star == 0.0) {
    if (z != 0) throw std::runtime_error("predictive_logpmf: positive count under zero exposure");
    return 0.0;
  }
  return poisson_logpmf(z, p_star * state.mean);
}

IngarchCoeffs to_ingarch(double delta, double c, double p_t, double p_next) {
  if (!(p_t > 0.0 && p_t < 1.0) || !(p_next > 0.0 && p_next < 1.0))
    fail("to_ingarch: probabilities (%g, %g) outside (0, 1)", p_t, p_next);
  if (!(delta > 0.0)) fail("to_ingarch: coefficient map undefined at delta = %g", delta);
  if (!(c >= 0.0)) fail("to_ingarch: c = %g negative", c);
  return IngarchCoeffs{p_next * c, p_next * delta, p_next * delta * (1.0 / p_t - 1.0)};
}

double thinning_prob(const IngarchCoeffs& coeffs) {
  if (!(coeffs.beta1 > 0.0) || !(coeffs.beta2 > 0.0))
    fail("thinning_prob: beta1 = %g, beta2 = %g must be positive", coeffs.beta1, coeffs.beta2);
  return coeffs.beta1 / (coeffs.beta1 + coeffs.beta2);
}

MssmPeriod from_ingarch(const IngarchCoeffs& current, const IngarchCoeffs& successor) {
  if (!(current.beta0 >= 0.0)) fail("from_ingarch: beta0 = %g negative", current.beta0);
  const double p_t = thinning_prob(current);
  const double p_next = thinning_prob(successor);
  return MssmPeriod{p_t, current.beta1 / p_next, current.beta0 / p_next};
}

MssmSequence from_ingarch(std::span<const IngarchCoeffs> coeffs) {
  if (coeffs.size() < 2)
    throw std::invalid_argument("from_ingarch: needs successor coefficients for each inverted period");
  MssmSequence out;
  out.p.reserve(coeffs.size());
  for (const auto& cf : coeffs) out.p.push_back(thinning_prob(cf));
  out.delta.reserve(coeffs.size() - 1);
  out.c.reserve(coeffs.size() - 1);
  for (std::size_t t = 0; t + 1 < coeffs.size(); ++t) {
    out.delta.push_back(coeffs[t].beta1 / out.p[t + 1]);
    out.c.push_back(coeffs[t].beta0 / out.p[t + 1]);
  }
  return out;
}

double stationary_delta(double delta0, double pstar0, double pstar_t, bool* convention_used) {
  if (!(delta0 >= 0.0 && delta0 <= 1.0)) fail("stationary_delta: delta0 = %g outside [0, 1]", delta0);
  if (!(pstar0 >= 0.0 && pstar0 < 1.0) || !(pstar_t >= 0.0 && pstar_t < 1.0))
    fail("stationary_delta: p* values (%g, %g) outside [0, 1)", pstar0, pstar_t);
  if (convention_used) *convention_used = false;
  const double num = delta0 * delta0 * pstar0;
  const double den = num + pstar_t;
  if (den == 0.0) {
    if (convention_used) *convention_used = true;
    return 1.0;
  }
  return std::sqrt(num / den);
}

MomentTable moments(const Params& params, std::size_t horizon) {
  params.validate();
  if (horizon == 0 || horizon > params.periods()) fail("moments: horizon %g beyond parameter range", double(horizon));
  MomentTable table;
  table.mean_theta.assign(horizon, params.mu);
  table.var_theta.resize(horizon);
  table.mean_z.resize(horizon);
  table.var_z.resize(horizon);
  table.obs_scale.resize(horizon);
  table.delta.assign(params.delta.begin(), params.delta.begin() + static_cast<std::ptrdiff_t>(horizon));
  double var = params.mu;  // anchor Var(Theta_0) = mu
  for (std::size_t t = 0; t < horizon; ++t) {
    const double scale = params.pstar(t);
    table.var_theta[t] = var;
    table.obs_scale[t] = scale;
    table.mean_z[t] = scale * params.mu;
    table.var_z[t] = scale * params.mu + scale * scale * (var - params.mu);
    const double d2 = params.delta[t] * params.delta[t];
    var = d2 * var + params.mu * (1.0 - d2 * (1.0 - scale));
  }
  return table;
}

std::vector<std::int64_t> simulate_marginal(const Params& params, std::size_t horizon, RngStream& rng) {
  params.validate();
  if (horizon == 0 || horizon > params.periods()) fail("simulate_marginal: horizon %g beyond parameter range", double(horizon));
  std::vector<std::int64_t> z(horizon);
  State state{params.mu};
  for (std::size_t t = 0; t < horizon; ++t) {
    const std::int64_t theta = sample_poisson(state.mean, rng);
    const double ps = params.pstar(t);
    z[t] = sample_binomial(theta, ps, rng);
    const double filtered = filter(state, static_cast<double>(z[t]), ps);
    if (t + 1 < horizon) state = evolve(filtered, params.delta[t], params.drift(t));
  }
  return z;
}

std::int64_t lift_step(std::int64_t theta_t, std::int64_t z_t, double delta, double c, RngStream& rng) {
  if (!(delta >= 0.0 && delta <= 1.0))
    fail("lift_step: delta = %g outside [0, 1]; the observation-driven lift exists iff delta <= 1", delta);
  if (z_t > theta_t || z_t < 0) fail("lift_step: count %g exceeds latent state %g", double(z_t), double(theta_t));
  const std::int64_t survivors = sample_binomial(theta_t - z_t, delta, rng);
  const std::int64_t recruits = sample_poisson(delta * static_cast<double>(z_t) + c, rng);
  return survivors + recruits;
}

Path simulate_lifted(const Params& params, std::size_t horizon, RngStream& rng) {
  params.validate();
  if (horizon == 0 || horizon > params.periods()) fail("simulate_lifted: horizon %g beyond parameter range", double(horizon));
  Path path;
  path.theta.resize(horizon);
  path.z.resize(horizon);
  path.mu_pred.resize(horizon);
  State state{params.mu};
  path.theta[0] = sample_poisson(params.mu, rng);
  for (std::size_t t = 0; t < horizon; ++t) {
    const double ps = params.pstar(t);
    path.mu_pred[t] = state.mean;
    path.z[t] = sample_binomial(path.theta[t], ps, rng);
    if (t + 1 == horizon) break;
    path.theta[t + 1] = lift_step(path.theta[t], path.z[t], params.delta[t], params.drift(t), rng);
    const double filtered = filter(state, static_cast<double>(path.z[t]), ps);
    state = evolve(filtered, params.delta[t], params.drift(t));
  }
  return path;
}

double mgf_gap(double s, const MgfContext& ctx) {
  if (!std::isfinite(s)) fail("mgf_gap: s = %g not finite", s);
  if (!(ctx.mu_prev > 0.0)) fail("mgf_gap: mu_prev = %g not positive", ctx.mu_prev);
  if (!(ctx.p >= 0.0 && ctx.p < 1.0)) fail("mgf_gap: p = %g outside [0, 1)", ctx.p);
  if (!(ctx.delta >= 0.0) || !(ctx.c >= 0.0) || !(ctx.z >= 0.0)) fail("mgf_gap: negative context value");
  const double residual = (1.0 - ctx.p) * ctx.mu_prev;  // mean of Theta_t - Z_t | history
  const double drift_line = ctx.delta * ctx.z + ctx.c;
  // Grouped so that both terms are nonnegative in exact arithmetic whenever
  // delta <= 1 and s >= 0:
  // D(s) = (delta z + c)(e^s - 1 - s) + (1-p) mu_prev (delta (e^s-1) - (e^{delta s}-1)).
  if (s < 700.0 && ctx.delta * s < 700.0) {
    const double e1 = std::expm1(s);
    const double ed = std::expm1(ctx.delta * s);
    const double gap = drift_line * (e1 - s) + residual * (ctx.delta * e1 - ed);
    if (gap > 1e300) return 1e300;
    if (gap < -1e300) return -1e300;
    return gap;
  }
  // Exponent beyond double range: the sign is decided by
  // mu_next - residual * e^{(delta-1) s} with mu_next = delta(z + residual) + c.
  if (ctx.delta <= 1.0) return 1e300;
  const double mu_next = ctx.delta * (ctx.z + residual) + ctx.c;
  const double bracket = mu_next * std::exp((1.0 - ctx.delta) * s) - residual;
  return bracket < 0.0 ? -1e300 : 1e300;
}

GapScan scan_mgf_gap(const MgfContext& ctx) {
  constexpr int kPoints = 200;
  constexpr double kLo = 1e-3;
  constexpr double kHi = 50.0;
  GapScan scan;
  scan.min_gap = std::numeric_limits<double>::infinity();
  const double step = std::log(kHi / kLo) / (kPoints - 1);
  auto consider = [&](double s) {
    const double gap = mgf_gap(s, ctx);
    if (gap < scan.min_gap) {
      scan.min_gap = gap;
      scan.argmin_s = s;
    }
    if (gap < -1e-6 && (!scan.violated || gap < scan.witness_gap)) {
      scan.violated = true;
      scan.witness_s = s;
      scan.witness_gap = gap;
    }
  };
  for (int i = 0; i < kPoints; ++i) consider(kLo * std::exp(step * i));
  if (ctx.delta > 1.0 && !scan.violated) {
    // The gap eventually turns negative for delta > 1; extend the search.
    for (double s = kHi * 2.0; s <= 1e9 && !scan.violated; s *= 2.0) consider(s);
  }
  return scan;
}

}  // namespace ingarch::poisson
