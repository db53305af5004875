#include "ingarch/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "ingarch/kernels.hpp"
#include "ingarch/parallel.hpp"
#include "ingarch/rng.hpp"

namespace ingarch {

namespace {

constexpr double kDeltaFloor = 1e-8;
const double kInf = std::numeric_limits<double>::infinity();

double sigmoid(double u) { return u >= 0.0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u)); }

struct EntityData {
  std::string id;
  std::vector<EffectivePeriod> eff;
  std::vector<std::vector<double>> x;  // resolved link covariates per period
  std::vector<long> periods;
};

struct Workspace {
  std::vector<EntityData> entities;
  std::vector<std::size_t> id_order;  // canonical reduction order
  std::size_t n_link = 0;
  std::size_t n_obs_used = 0;
};

std::vector<std::size_t> resolve_columns(const Panel& panel, const LinkSpec& links) {
  std::vector<std::size_t> idx;
  idx.reserve(links.columns.size());
  for (const auto& name : links.columns) {
    const auto it = std::find(panel.covariate_names.begin(), panel.covariate_names.end(), name);
    if (it == panel.covariate_names.end())
      throw std::invalid_argument("link column '" + name + "' not found in panel");
    idx.push_back(static_cast<std::size_t>(it - panel.covariate_names.begin()));
  }
  return idx;
}

Workspace build_workspace(const Panel& panel, const LinkSpec& links) {
  Workspace ws;
  ws.n_link = links.columns.size();
  const auto idx = resolve_columns(panel, links);
  ws.entities.reserve(panel.entities.size());
  for (const auto& series : panel.entities) {
    EntityData data;
    data.id = series.entity_id;
    data.eff = apply_missingness(series, MissingPolicy::as_no_exposure);
    data.x.reserve(series.rows.size());
    data.periods.reserve(series.rows.size());
    for (const auto& row : series.rows) {
      std::vector<double> xs(idx.size());
      for (std::size_t j = 0; j < idx.size(); ++j) xs[j] = row.covariates[idx[j]];
      data.x.push_back(std::move(xs));
      data.periods.push_back(row.period);
    }
    for (const auto& e : data.eff)
      if (e.use_in_likelihood) ++ws.n_obs_used;
    ws.entities.push_back(std::move(data));
  }
  ws.id_order.resize(ws.entities.size());
  std::iota(ws.id_order.begin(), ws.id_order.end(), std::size_t{0});
  std::stable_sort(ws.id_order.begin(), ws.id_order.end(), [&](std::size_t a, std::size_t b) {
    return ws.entities[a].id < ws.entities[b].id;
  });
  return ws;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Per-entity log-likelihood; +inf-safe (returns NaN/inf on bad parameters,
// the caller maps that to the sentinel).
double entity_loglik(const EntityData& e, const FitEstimates& est, ModelKind model,
                     DeltaPolicy policy) {
  const std::size_t n = e.eff.size();
  std::vector<double> scale(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double eta = dot(e.x[t], est.link_coeffs);
    scale[t] = model == ModelKind::poisson ? sigmoid(eta) : std::exp(eta);
    if (!std::isfinite(scale[t]) || scale[t] <= 0.0 || (model == ModelKind::poisson && scale[t] >= 1.0))
      return kInf;
  }
  std::vector<double> delta(n);
  if (policy == DeltaPolicy::fixed_one) {
    std::fill(delta.begin(), delta.end(), 1.0);
  } else if (model == ModelKind::poisson && policy == DeltaPolicy::stationary_from_anchor) {
    // anchor period: w0 = 1, p0 from the first period's link
    const double pstar0 = scale[0];
    for (std::size_t t = 0; t < n; ++t) {
      const double pstar_t = e.eff[t].use_in_filter ? scale[t] : 0.0;
      delta[t] = poisson::stationary_delta(est.delta, pstar0, pstar_t);
    }
  } else {
    std::fill(delta.begin(), delta.end(), est.delta);
  }
  const SeriesRun run = model == ModelKind::poisson
                            ? run_poisson_series(est.anchor, delta, scale, e.eff)
                            : run_nb_series(est.anchor, delta, scale, e.eff);
  return run.loglik;
}

double panel_neg_loglik(const Workspace& ws, const FitEstimates& est, ModelKind model,
                        DeltaPolicy policy) {
  std::vector<double> per_entity(ws.entities.size());
  parallel_for(ws.entities.size(), [&](std::size_t i) {
    double ll;
    try {
      ll = entity_loglik(ws.entities[i], est, model, policy);
    } catch (const std::exception&) {
      ll = kInf;  // parameter-induced failure; data errors were caught at load
    }
    per_entity[i] = ll;
  });
  std::vector<double> ordered(per_entity.size());
  for (std::size_t i = 0; i < ws.id_order.size(); ++i) ordered[i] = per_entity[ws.id_order[i]];
  for (double v : ordered)
    if (!std::isfinite(v)) return kInf;
  return -kahan_total(ordered);
}

FitEstimates unpack_impl(std::span<const double> theta, DeltaPolicy policy, std::size_t n_link) {
  const std::size_t expect = 1 + (policy == DeltaPolicy::fixed_one ? 0 : 1) + n_link;
  if (theta.size() != expect) throw std::invalid_argument("parameter vector has wrong length");
  FitEstimates est;
  std::size_t at = 0;
  est.anchor = std::exp(theta[at++]);
  est.delta = policy == DeltaPolicy::fixed_one ? 1.0 : squash_delta(theta[at++]);
  est.link_coeffs.assign(theta.begin() + static_cast<std::ptrdiff_t>(at), theta.end());
  return est;
}

// Weighted least squares of y on the link covariates over covariate cells;
// small dense normal equations with a ridge fallback.
std::vector<double> wls(const std::map<std::vector<double>, std::pair<double, double>>& cells,
                        std::size_t p, const std::function<double(double, double)>& target) {
  std::vector<double> coeffs(p, 0.0);
  if (p == 0) return coeffs;
  std::vector<double> a(p * p, 0.0);
  std::vector<double> b(p, 0.0);
  for (const auto& [x, agg] : cells) {
    const double weight = agg.first;
    const double y = target(agg.second, agg.first);
    for (std::size_t i = 0; i < p; ++i) {
      b[i] += weight * x[i] * y;
      for (std::size_t j = 0; j < p; ++j) a[i * p + j] += weight * x[i] * x[j];
    }
  }
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<double> m = a;
    if (attempt == 1)
      for (std::size_t i = 0; i < p; ++i) m[i * p + i] += 1e-8 + 1e-8 * m[i * p + i];
    std::vector<double> rhs = b;
    std::vector<std::size_t> piv(p);
    std::iota(piv.begin(), piv.end(), std::size_t{0});
    bool singular = false;
    for (std::size_t col = 0; col < p && !singular; ++col) {
      std::size_t best = col;
      for (std::size_t r = col + 1; r < p; ++r)
        if (std::fabs(m[r * p + col]) > std::fabs(m[best * p + col])) best = r;
      if (std::fabs(m[best * p + col]) < 1e-12) {
        singular = true;
        break;
      }
      if (best != col) {
        for (std::size_t j = 0; j < p; ++j) std::swap(m[col * p + j], m[best * p + j]);
        std::swap(rhs[col], rhs[best]);
      }
      for (std::size_t r = col + 1; r < p; ++r) {
        const double f = m[r * p + col] / m[col * p + col];
        for (std::size_t j = col; j < p; ++j) m[r * p + j] -= f * m[col * p + j];
        rhs[r] -= f * rhs[col];
      }
    }
    if (singular) continue;
    for (std::size_t col = p; col-- > 0;) {
      double s = rhs[col];
      for (std::size_t j = col + 1; j < p; ++j) s -= m[col * p + j] * coeffs[j];
      coeffs[col] = s / m[col * p + col];
    }
    return coeffs;
  }
  return std::vector<double>(p, 0.0);
}

FitEstimates initial_estimates(const Workspace& ws, ModelKind model, DeltaPolicy policy) {
  // pooled and per-cell count means over usable observations
  std::map<std::vector<double>, std::pair<double, double>> cells;  // x -> (count, sum z)
  double total = 0.0;
  double used = 0.0;
  for (const auto& e : ws.entities) {
    for (std::size_t t = 0; t < e.eff.size(); ++t) {
      if (!e.eff[t].use_in_likelihood) continue;
      auto& cell = cells[e.x[t]];
      cell.first += 1.0;
      cell.second += e.eff[t].effective_count;
      total += e.eff[t].effective_count;
      used += 1.0;
    }
  }
  const double pooled = used > 0.0 ? total / used : 0.5;
  FitEstimates est;
  est.delta = policy == DeltaPolicy::fixed_one ? 1.0 : 0.5;
  if (model == ModelKind::negbin) {
    est.anchor = 1.0;
    est.link_coeffs = wls(cells, ws.n_link, [](double sum, double count) {
      return std::log(std::max(sum / count, 1e-2));
    });
  } else {
    est.anchor = std::max(2.0 * pooled, 0.5);
    const double mu0 = est.anchor;
    est.link_coeffs = wls(cells, ws.n_link, [mu0](double sum, double count) {
      const double ratio = std::clamp(sum / count / mu0, 0.01, 0.99);
      return std::log(ratio / (1.0 - ratio));
    });
  }
  return est;
}

}  // namespace

double squash_delta(double u) { return kDeltaFloor + (1.0 - kDeltaFloor) * sigmoid(u); }

double unsquash_delta(double delta) {
  if (!(delta > kDeltaFloor && delta < 1.0))
    throw std::domain_error("unsquash_delta: delta outside (1e-8, 1)");
  const double r = (delta - kDeltaFloor) / (1.0 - kDeltaFloor);
  return std::log(r / (1.0 - r));
}

std::vector<double> pack_parameters(const FitEstimates& estimates, DeltaPolicy policy) {
  std::vector<double> theta;
  theta.push_back(std::log(estimates.anchor));
  if (policy != DeltaPolicy::fixed_one)
    theta.push_back(unsquash_delta(std::clamp(estimates.delta, 2.0 * kDeltaFloor, 1.0 - 1e-12)));
  theta.insert(theta.end(), estimates.link_coeffs.begin(), estimates.link_coeffs.end());
  return theta;
}

FitEstimates unpack_parameters(std::span<const double> theta, DeltaPolicy policy,
                               std::size_t n_link) {
  return unpack_impl(theta, policy, n_link);
}

double neg_loglik(std::span<const double> theta, const Panel& panel, ModelKind model,
                  DeltaPolicy policy, const LinkSpec& links) {
  for (double v : theta)
    if (!std::isfinite(v)) throw std::domain_error("neg_loglik: non-finite parameter");
  const Workspace ws = build_workspace(panel, links);
  if (ws.entities.empty()) return 0.0;
  const FitEstimates est = unpack_impl(theta, policy, links.columns.size());
  return panel_neg_loglik(ws, est, model, policy);
}

FitReport fit(const Panel& panel, ModelKind model, DeltaPolicy policy, const LinkSpec& links,
              const OptimizerConfig& config) {
  const Workspace ws = build_workspace(panel, links);
  if (ws.n_obs_used == 0) throw std::invalid_argument("fit: no usable observations");

  FitReport report;
  report.model = model;
  report.policy = policy;
  report.link_columns = links.columns;
  report.multistarts = config.multistarts;
  report.seed = config.seed;
  report.n_entities = ws.entities.size();
  report.n_obs_used = ws.n_obs_used;

  const FitEstimates init = initial_estimates(ws, model, policy);
  const std::vector<double> theta0 = pack_parameters(init, policy);

  auto objective = [&](std::span<const double> theta) {
    const FitEstimates est = unpack_impl(theta, policy, links.columns.size());
    return panel_neg_loglik(ws, est, model, policy);
  };

  NmOptions nm;
  nm.max_iterations = config.max_iterations;
  nm.spread_tol = config.spread_tol;

  NmResult best;
  best.fmin = kInf;
  RngStream jitter_rng(config.seed, 0x6a69747465720000ULL);
  for (int start = 0; start < config.multistarts; ++start) {
    std::vector<double> theta = theta0;
    if (start > 0) {
      RngStream r = jitter_rng.split(static_cast<std::uint64_t>(start));
      for (auto& v : theta)
        v += config.jitter * std::max(1.0, std::fabs(v)) * (2.0 * r.next_unit() - 1.0);
    }
    const NmResult run = nelder_mead(objective, theta, nm);
    report.evaluations += run.evaluations;
    if (!std::isfinite(run.fmin)) {
      ++report.failed_starts;
      continue;
    }
    if (run.fmin < best.fmin) {
      best = run;
      report.iterations = run.iterations;
      report.converged = run.converged;
    }
  }
  if (!std::isfinite(best.fmin)) {
    report.converged = false;
    report.loglik = -kInf;
    report.estimates = init;
    return report;
  }

  report.estimates = unpack_impl(best.x, policy, links.columns.size());
  report.loglik = -best.fmin;
  report.per_entity_loglik.reserve(ws.entities.size());
  for (std::size_t i : ws.id_order) {
    const double ll = entity_loglik(ws.entities[i], report.estimates, model, policy);
    report.per_entity_loglik.emplace_back(ws.entities[i].id, ll);
  }
  return report;
}

double PredictiveLaw::log_pmf(std::int64_t z) const {
  switch (kind) {
    case Kind::zero:
      return z == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    case Kind::poisson:
      return poisson_logpmf(z, poisson_mean);
    case Kind::negbin:
      return nb_logpmf(z, kappa, pi);
  }
  throw std::logic_error("unreachable");
}

std::vector<EntityPrediction> predict(const FitReport& report, const Panel& panel, long horizon) {
  LinkSpec links{report.link_columns};
  const auto idx = resolve_columns(panel, links);
  const FitEstimates& est = report.estimates;
  std::vector<EntityPrediction> out;
  for (const auto& series : panel.entities) {
    const PanelObservation* target = nullptr;
    for (const auto& row : series.rows)
      if (row.period == horizon && !row.gap_filler) target = &row;
    if (!target) continue;
    EntitySeries history;
    history.entity_id = series.entity_id;
    history.first_period = series.first_period;
    for (const auto& row : series.rows)
      if (row.period < horizon) history.rows.push_back(row);
    if (history.rows.empty())
      throw std::runtime_error("entity '" + series.entity_id + "': no history before the horizon");

    const auto eff = apply_missingness(history, MissingPolicy::as_no_exposure);
    const std::size_t n = history.rows.size();
    std::vector<double> scale(n);
    for (std::size_t t = 0; t < n; ++t) {
      double eta = 0.0;
      for (std::size_t j = 0; j < idx.size(); ++j)
        eta += history.rows[t].covariates[idx[j]] * est.link_coeffs[j];
      scale[t] = report.model == ModelKind::poisson ? sigmoid(eta) : std::exp(eta);
    }
    std::vector<double> delta(n);
    if (report.policy == DeltaPolicy::fixed_one) {
      std::fill(delta.begin(), delta.end(), 1.0);
    } else if (report.model == ModelKind::poisson &&
               report.policy == DeltaPolicy::stationary_from_anchor) {
      for (std::size_t t = 0; t < n; ++t) {
        const double pstar_t = eff[t].use_in_filter ? scale[t] : 0.0;
        delta[t] = poisson::stationary_delta(est.delta, scale[0], pstar_t);
      }
    } else {
      std::fill(delta.begin(), delta.end(), est.delta);
    }
    SeriesRun run = report.model == ModelKind::poisson
                        ? run_poisson_series(est.anchor, delta, scale, eff)
                        : run_nb_series(est.anchor, delta, scale, eff);

    // evolve through any exposure-free stretch between the last history row
    // and the horizon
    const long last_period = history.rows.back().period;
    for (long gap = last_period + 1; gap < horizon; ++gap) {
      if (report.model == ModelKind::poisson) {
        double d = est.delta;
        if (report.policy == DeltaPolicy::stationary_from_anchor)
          d = poisson::stationary_delta(est.delta, scale[0], 0.0);
        else if (report.policy == DeltaPolicy::fixed_one)
          d = 1.0;
        run.final_pred_mean =
            poisson::evolve(run.final_pred_mean, d, (1.0 - d) * est.anchor).mean;
      } else {
        const double d = report.policy == DeltaPolicy::fixed_one ? 1.0 : est.delta;
        run.final_state = negbin::evolve(run.final_state, d, est.anchor).state;
        run.final_pred_mean = run.final_state.mean();
      }
    }

    double eta_h = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j)
      eta_h += target->covariates[idx[j]] * est.link_coeffs[j];

    EntityPrediction pred;
    pred.entity_id = series.entity_id;
    if (target->exposure == 0) {
      pred.law.kind = PredictiveLaw::Kind::zero;
    } else if (report.model == ModelKind::poisson) {
      const double p_h = sigmoid(eta_h);
      pred.law.kind = PredictiveLaw::Kind::poisson;
      pred.law.poisson_mean = p_h * run.final_pred_mean;
      pred.law.mean = pred.law.poisson_mean;
    } else {
      const double wl_h = std::exp(eta_h);
      const negbin::Predictive law = negbin::predictive(run.final_state, wl_h);
      pred.law.kind = PredictiveLaw::Kind::negbin;
      pred.law.kappa = law.kappa;
      pred.law.pi = law.pi;
      pred.law.mean = wl_h * run.final_state.mean();
    }
    out.push_back(std::move(pred));
  }
  return out;
}

Score score(std::span<const EntityPrediction> predictions,
            std::span<const std::pair<std::string, std::int64_t>> actuals) {
  if (predictions.size() != actuals.size())
    throw std::invalid_argument("score: prediction and actual entity sets differ in size");
  std::map<std::string, const PredictiveLaw*> laws;
  for (const auto& p : predictions) laws[p.entity_id] = &p.law;
  Score s;
  std::vector<double> sq;
  std::vector<double> ll;
  sq.reserve(actuals.size());
  ll.reserve(actuals.size());
  for (const auto& [id, z] : actuals) {
    const auto it = laws.find(id);
    if (it == laws.end()) throw std::invalid_argument("score: no prediction for entity '" + id + "'");
    const double diff = static_cast<double>(z) - it->second->mean;
    sq.push_back(diff * diff);
    ll.push_back(it->second->log_pmf(z));
  }
  s.n = actuals.size();
  s.mse = kahan_total(sq) / static_cast<double>(s.n);
  s.predictive_loglik = kahan_total(ll);
  return s;
}

}  // namespace ingarch
