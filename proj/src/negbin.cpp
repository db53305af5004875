#include "ingarch/negbin.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "ingarch/kernels.hpp"

namespace ingarch::negbin {

namespace {

[[noreturn]] void fail(const char* fmt, double a = 0, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  throw std::domain_error(buf);
}

void check_state(const State& s) {
  if (!(s.shape > 0.0) || !(s.rate > 0.0)) fail("gamma state (%g, %g) must be positive", s.shape, s.rate);
}

}  // namespace

void Params::validate() const {
  const std::size_t n = periods();
  if (n == 0) fail("nb params: no periods");
  if (!(a_anchor > 0.0) || !std::isfinite(a_anchor)) fail("nb params: a_anchor = %g outside (0, inf)", a_anchor);
  if (lambda.size() != n || w.size() != n) fail("nb params: per-period vectors disagree on length");
  for (std::size_t t = 0; t < n; ++t) {
    if (!(delta[t] >= 0.0 && delta[t] <= 1.0)) fail("nb params: delta[%g] = %g outside [0, 1]", double(t), delta[t]);
    if (!(lambda[t] > 0.0)) fail("nb params: lambda[%g] = %g not positive", double(t), lambda[t]);
    if (w[t] > 1) fail("nb params: w[%g] not in {0, 1}", double(t));
  }
}

State filter(State pred, double z, double w_lambda) {
  check_state(pred);
  if (!(w_lambda >= 0.0)) fail("filter: w*lambda = %g negative", w_lambda);
  if (w_lambda == 0.0) {
    if (z != 0.0) throw std::runtime_error("filter: positive count under zero exposure");
    return pred;
  }
  if (!(z >= 0.0) || !std::isfinite(z)) fail("filter: count %g invalid", z);
  return State{pred.shape + z, pred.rate + w_lambda};
}

Evolved evolve(State filtered, double delta, double a_anchor) {
  check_state(filtered);
  if (!(delta >= 0.0 && delta <= 1.0)) fail("evolve: delta = %g outside [0, 1]", delta);
  if (!(a_anchor > 0.0)) fail("evolve: a_anchor = %g not positive", a_anchor);
  const double d2 = delta * delta;
  const double q = 1.0 / (d2 + (1.0 - d2) * filtered.rate / a_anchor);
  const double rate_next = q * filtered.rate;
  const double shape_next = delta * q * filtered.shape + (1.0 - delta) * rate_next;
  return Evolved{State{shape_next, rate_next}, q};
}

State evolve_fixed_rate(State filtered, double delta, double c, double rate_target) {
  check_state(filtered);
  if (!(delta >= 0.0) || !(c >= 0.0)) fail("evolve_fixed_rate: delta = %g, c = %g", delta, c);
  if (!(rate_target > 0.0)) fail("evolve_fixed_rate: rate = %g not positive", rate_target);
  const double mean_next = delta * filtered.mean() + c;
  if (!(mean_next > 0.0)) fail("evolve_fixed_rate: degenerate latent mean %g", mean_next);
  return State{rate_target * mean_next, rate_target};
}

State evolve_fixed_shape(State filtered, double delta, double c, double shape_target) {
  check_state(filtered);
  if (!(delta >= 0.0) || !(c >= 0.0)) fail("evolve_fixed_shape: delta = %g, c = %g", delta, c);
  if (!(shape_target > 0.0)) fail("evolve_fixed_shape: shape = %g not positive", shape_target);
  const double mean_next = delta * filtered.mean() + c;
  if (!(mean_next > 0.0)) fail("evolve_fixed_shape: degenerate latent mean %g", mean_next);
  return State{shape_target, shape_target / mean_next};
}

Predictive predictive(State pred, double w_lambda_next) {
  check_state(pred);
  if (!(w_lambda_next >= 0.0)) fail("predictive: w*lambda = %g negative", w_lambda_next);
  if (w_lambda_next == 0.0) return Predictive{pred.shape, 0.0};
  return Predictive{pred.shape, w_lambda_next / (pred.rate + w_lambda_next)};
}

double predictive_logpmf(State pred, double w_lambda_next, std::int64_t z) {
  check_state(pred);
  if (!(w_lambda_next >= 0.0)) fail("predictive_logpmf: w*lambda = %g negative", w_lambda_next);
  if (w_lambda_next == 0.0) {
    if (z != 0) throw std::runtime_error("predictive_logpmf: positive count under zero exposure");
    return 0.0;
  }
  if (z < 0) fail("predictive_logpmf: negative count %g", double(z));
  // NB(kappa = shape, pi = wl/(rate + wl)) written against the raw pair for
  // stability at extreme rates.
  const double log_total = std::log(pred.rate + w_lambda_next);
  return log_gamma(static_cast<double>(z) + pred.shape) - log_gamma(pred.shape) - log_factorial(z) +
         pred.shape * (std::log(pred.rate) - log_total) +
         static_cast<double>(z) * (std::log(w_lambda_next) - log_total);
}

IngarchCoeffs to_ingarch_unit(double rate_pred, double delta, double c) {
  if (!(rate_pred > 0.0)) fail("to_ingarch_unit: rate = %g not positive", rate_pred);
  if (!(delta > 0.0)) fail("to_ingarch_unit: coefficient map undefined at delta = %g", delta);
  if (!(c >= 0.0)) fail("to_ingarch_unit: c = %g negative", c);
  const double beta1 = delta / (rate_pred + 1.0);
  return IngarchCoeffs{c, beta1, beta1 * rate_pred};
}

UnitInverse from_ingarch(const IngarchCoeffs& coeffs) {
  if (!(coeffs.beta1 > 0.0) || !(coeffs.beta2 > 0.0))
    fail("from_ingarch: beta1 = %g, beta2 = %g must be positive", coeffs.beta1, coeffs.beta2);
  if (!(coeffs.beta0 >= 0.0)) fail("from_ingarch: beta0 = %g negative", coeffs.beta0);
  UnitInverse inv;
  inv.rate_pred = coeffs.beta2 / coeffs.beta1;
  inv.delta = coeffs.beta1 + coeffs.beta2;
  inv.c = coeffs.beta0;
  inv.outside_lift_region = inv.delta > 1.0;
  return inv;
}

PanelMap to_ingarch(State pred, double delta, double c, double wl_t, double wl_next) {
  check_state(pred);
  if (!(wl_t >= 0.0) || !(wl_next >= 0.0)) fail("to_ingarch: exposures (%g, %g) negative", wl_t, wl_next);
  if (!(c >= 0.0)) fail("to_ingarch: c = %g negative", c);
  PanelMap map;
  if (wl_t == 0.0) {
    map.direct_mean = wl_next * (c + delta * pred.mean());
    return map;
  }
  if (!(delta > 0.0)) fail("to_ingarch: coefficient map undefined at delta = %g", delta);
  const double beta1 = wl_next * delta / (pred.rate + wl_t);
  map.coeffs = IngarchCoeffs{wl_next * c, beta1, beta1 * pred.rate / wl_t};
  return map;
}

PanelInverse from_ingarch(const IngarchCoeffs& coeffs, double wl_t, double wl_next) {
  if (!(coeffs.beta1 > 0.0) || !(coeffs.beta2 > 0.0))
    fail("from_ingarch: beta1 = %g, beta2 = %g must be positive", coeffs.beta1, coeffs.beta2);
  if (!(wl_t > 0.0) || !(wl_next > 0.0)) fail("from_ingarch: exposures (%g, %g) must be positive", wl_t, wl_next);
  PanelInverse inv;
  inv.rate_pred = coeffs.beta2 * wl_t / coeffs.beta1;
  inv.delta = coeffs.beta1 * (inv.rate_pred + wl_t) / wl_next;
  inv.c = coeffs.beta0 / wl_next;
  return inv;
}

MomentTable moments(const Params& params, std::size_t horizon) {
  params.validate();
  if (horizon == 0 || horizon > params.periods()) fail("moments: horizon %g beyond parameter range", double(horizon));
  MomentTable table;
  table.mean_theta.assign(horizon, 1.0);
  table.var_theta.assign(horizon, 1.0 / params.a_anchor);
  table.mean_z.resize(horizon);
  table.var_z.resize(horizon);
  table.obs_scale.resize(horizon);
  table.delta.assign(params.delta.begin(), params.delta.begin() + static_cast<std::ptrdiff_t>(horizon));
  for (std::size_t t = 0; t < horizon; ++t) {
    const double wl = params.wlambda(t);
    table.obs_scale[t] = wl;
    table.mean_z[t] = wl;
    table.var_z[t] = wl + wl * wl / params.a_anchor;
  }
  return table;
}

std::vector<std::int64_t> simulate_marginal(const Params& params, std::size_t horizon, RngStream& rng) {
  params.validate();
  if (horizon == 0 || horizon > params.periods()) fail("simulate_marginal: horizon %g beyond parameter range", double(horizon));
  std::vector<std::int64_t> z(horizon);
  State state{params.a_anchor, params.a_anchor};
  for (std::size_t t = 0; t < horizon; ++t) {
    const double theta = sample_gamma(state.shape, state.rate, rng);
    const double wl = params.wlambda(t);
    z[t] = sample_poisson(wl * theta, rng);
    const State filtered = filter(state, static_cast<double>(z[t]), wl);
    if (t + 1 < horizon) state = evolve(filtered, params.delta[t], params.a_anchor).state;
  }
  return z;
}

double lift_step(double theta_t, State filtered, double delta, double c, State target, RngStream& rng) {
  check_state(filtered);
  check_state(target);
  if (!(delta >= 0.0) || !(c >= 0.0)) fail("lift_step: delta = %g, c = %g", delta, c);
  if (!(theta_t >= 0.0)) fail("lift_step: theta = %g negative", theta_t);
  if (delta == 0.0) return sample_gamma(target.shape, target.rate, rng);
  const double noise_shape = c * filtered.rate / delta;
  const double total_shape = filtered.shape + noise_shape;
  double residual_shape = total_shape - target.shape;
  if (residual_shape < 0.0) {
    if (residual_shape < -1e-9 * std::max(1.0, total_shape))
      fail("lift_step: convex order violated, delta * rate'/rate = %g exceeds 1",
           delta * target.rate / filtered.rate);
    residual_shape = 0.0;  // boundary case delta * q == 1
  }
  const double noise = noise_shape == 0.0 ? 0.0 : sample_gamma(noise_shape, filtered.rate / delta, rng);
  const double x = delta * theta_t + noise;
  const double thin = residual_shape == 0.0 ? 1.0 : sample_beta(target.shape, residual_shape, rng);
  return (filtered.rate / delta) * thin * x / target.rate;
}

Path simulate_lifted(const Params& params, std::size_t horizon, RngStream& rng) {
  params.validate();
  if (horizon == 0 || horizon > params.periods()) fail("simulate_lifted: horizon %g beyond parameter range", double(horizon));
  Path path;
  path.theta.resize(horizon);
  path.z.resize(horizon);
  path.pred.resize(horizon);
  State state{params.a_anchor, params.a_anchor};
  path.theta[0] = sample_gamma(state.shape, state.rate, rng);
  for (std::size_t t = 0; t < horizon; ++t) {
    const double wl = params.wlambda(t);
    path.pred[t] = state;
    path.z[t] = sample_poisson(wl * path.theta[t], rng);
    if (t + 1 == horizon) break;
    const State filtered = filter(state, static_cast<double>(path.z[t]), wl);
    const Evolved next = evolve(filtered, params.delta[t], params.a_anchor);
    path.theta[t + 1] = lift_step(path.theta[t], filtered, params.delta[t], 1.0 - params.delta[t], next.state, rng);
    state = next.state;
  }
  return path;
}

double mgf_gap(double s, const MgfContext& ctx) {
  if (!std::isfinite(s)) fail("mgf_gap: s = %g not finite", s);
  if (!(ctx.shape_f > 0.0) || !(ctx.rate_f > 0.0)) fail("mgf_gap: filtered pair (%g, %g) must be positive", ctx.shape_f, ctx.rate_f);
  if (!(ctx.delta >= 0.0) || !(ctx.c >= 0.0) || !(ctx.q > 0.0)) fail("mgf_gap: invalid context");
  if (ctx.delta > 0.0 && s >= ctx.rate_f / ctx.delta) fail("mgf_gap: s = %g outside the domain s < rate/delta", s);
  if (s >= ctx.q * ctx.rate_f) fail("mgf_gap: s = %g outside the domain s < q * rate", s);
  const double shape_next = ctx.q * (ctx.delta * ctx.shape_f + ctx.c * ctx.rate_f);
  const double term_x = ctx.delta == 0.0 ? 0.0 : ctx.shape_f * std::log1p(-ctx.delta * s / ctx.rate_f);
  return term_x - ctx.c * s - shape_next * std::log1p(-s / (ctx.q * ctx.rate_f));
}

GapScan scan_mgf_gap(const MgfContext& ctx) {
  constexpr int kPoints = 200;
  GapScan scan;
  scan.min_gap = std::numeric_limits<double>::infinity();
  double s_max = ctx.q * ctx.rate_f;
  if (ctx.delta > 0.0) s_max = std::min(s_max, ctx.rate_f / ctx.delta);
  // log-spaced fractions of the upper end, approaching it closely enough to
  // catch the dive to -inf when delta * q > 1
  const double f_lo = 1e-3;
  const double f_hi = 1.0 - 1e-9;
  const double step = std::log(f_hi / f_lo) / (kPoints - 1);
  for (int i = 0; i < kPoints; ++i) {
    const double s = s_max * f_lo * std::exp(step * i);
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
  }
  return scan;
}

OrderCertificate parameterization_check(Parameterization mode, double fixed_value,
                                        double anchor_other, std::span<const double> delta,
                                        std::span<const double> c, std::size_t n_paths,
                                        RngStream& rng) {
  if (!(fixed_value > 0.0) || !(anchor_other > 0.0))
    fail("parameterization_check: anchors (%g, %g) must be positive", fixed_value, anchor_other);
  if (delta.size() != c.size() || delta.empty()) fail("parameterization_check: schedule sizes disagree");
  OrderCertificate cert;
  for (std::size_t path = 0; path < n_paths; ++path) {
    RngStream path_rng = rng.split(path);
    State state = mode == Parameterization::fixed_rate ? State{anchor_other, fixed_value}
                                                       : State{fixed_value, anchor_other};
    for (std::size_t t = 0; t < delta.size(); ++t) {
      const double theta = sample_gamma(state.shape, state.rate, path_rng);
      const double z = static_cast<double>(sample_poisson(theta, path_rng));
      const State filtered = filter(state, z, 1.0);
      state = mode == Parameterization::fixed_rate
                  ? evolve_fixed_rate(filtered, delta[t], c[t], fixed_value)
                  : evolve_fixed_shape(filtered, delta[t], c[t], fixed_value);
      const double ratio = delta[t] * state.rate / filtered.rate;
      if (ratio > cert.max_ratio) cert.max_ratio = ratio;
      ++cert.transitions;
    }
  }
  cert.holds = cert.max_ratio <= 1.0 + 1e-12;
  return cert;
}

}  // namespace ingarch::negbin
