#include "ingarch/panel_sim.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ingarch/kernels.hpp"
#include "ingarch/rng.hpp"

namespace ingarch {

namespace {

constexpr std::uint64_t kCovStream = 1;
constexpr std::uint64_t kExposureStream = 2;
constexpr std::uint64_t kPathStream = 3;
constexpr std::uint64_t kMaskStream = 4;

double sigmoid(double u) { return u >= 0.0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u)); }

std::string entity_name(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "e%06zu", i + 1);
  return buf;
}

}  // namespace

SimOutput simulate_panel(const SimConfig& config) {
  if (config.n_entities == 0 || config.periods < 1)
    throw std::invalid_argument("simulate_panel: need at least one entity and one period");
  if (config.cov_names.size() != config.cov_bernoulli.size())
    throw std::invalid_argument("simulate_panel: covariate names and bernoulli rates disagree");
  if (!config.link_coeffs.empty() && config.link_coeffs.size() != config.cov_names.size())
    throw std::invalid_argument("simulate_panel: link coefficients and covariates disagree");

  SimOutput out;
  out.panel.covariate_names = config.cov_names;
  const auto periods = static_cast<std::size_t>(config.periods);
  const RngStream root(config.seed, 0);

  std::vector<PanelObservation> rows;
  rows.reserve(config.n_entities * periods);
  for (std::size_t i = 0; i < config.n_entities; ++i) {
    const RngStream entity_rng = root.split(i);
    const std::string id = entity_name(i);

    std::vector<double> x(config.cov_names.size());
    {
      RngStream cov_rng = entity_rng.split(kCovStream);
      for (std::size_t j = 0; j < x.size(); ++j)
        x[j] = cov_rng.next_unit() < config.cov_bernoulli[j] ? 1.0 : 0.0;
    }
    double link_scale;
    if (config.link_coeffs.empty()) {
      link_scale = config.model == ModelKind::poisson ? config.p_const : config.lambda_const;
    } else {
      double eta = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) eta += x[j] * config.link_coeffs[j];
      link_scale = config.model == ModelKind::poisson ? sigmoid(eta) : std::exp(eta);
    }

    std::vector<std::uint8_t> w(periods, 1);
    if (config.exposure_zero_prob > 0.0) {
      RngStream w_rng = entity_rng.split(kExposureStream);
      for (auto& wt : w)
        if (w_rng.next_unit() < config.exposure_zero_prob) wt = 0;
    }

    RngStream path_rng = entity_rng.split(kPathStream);
    RngStream mask_rng = entity_rng.split(kMaskStream);

    if (config.model == ModelKind::poisson) {
      poisson::Params params;
      params.mu = config.mu;
      params.delta.resize(periods + 1);
      params.p.assign(periods + 1, link_scale);
      params.w.resize(periods + 1);
      params.w[0] = 1;  // internal anchor period carries full exposure
      for (std::size_t t = 0; t < periods; ++t) params.w[t + 1] = w[t];
      params.delta[0] = config.delta;
      for (std::size_t t = 1; t <= periods; ++t)
        params.delta[t] = config.stationary
                              ? poisson::stationary_delta(config.delta, params.pstar(0), params.pstar(t))
                              : config.delta;
      const auto path = poisson::simulate_lifted(params, periods + 1, path_rng);
      for (std::size_t t = 1; t <= periods; ++t) {
        PanelObservation row;
        row.entity_id = id;
        row.period = static_cast<long>(t);
        row.count = path.z[t];
        row.exposure = w[t - 1];
        row.covariates = x;
        if (row.exposure == 1 && config.absent_prob > 0.0 && mask_rng.next_unit() < config.absent_prob)
          row.count.reset();
        rows.push_back(std::move(row));
        out.latent.push_back(LatentRow{id, static_cast<long>(t), static_cast<double>(path.theta[t]),
                                       path.mu_pred[t], 0.0});
      }
    } else {
      negbin::Params params;
      params.a_anchor = config.a_anchor;
      params.delta.assign(periods, config.delta);
      params.lambda.assign(periods, link_scale);
      params.w = w;
      const auto path = negbin::simulate_lifted(params, periods, path_rng);
      for (std::size_t t = 0; t < periods; ++t) {
        PanelObservation row;
        row.entity_id = id;
        row.period = static_cast<long>(t) + 1;
        row.count = path.z[t];
        row.exposure = w[t];
        row.covariates = x;
        if (row.exposure == 1 && config.absent_prob > 0.0 && mask_rng.next_unit() < config.absent_prob)
          row.count.reset();
        rows.push_back(std::move(row));
        out.latent.push_back(LatentRow{id, static_cast<long>(t) + 1, path.theta[t],
                                       path.pred[t].shape, path.pred[t].rate});
      }
    }
  }
  out.panel = Panel::assemble(std::move(rows), config.cov_names);
  return out;
}

}  // namespace ingarch
