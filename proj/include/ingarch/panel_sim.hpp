#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ingarch/estimation.hpp"
#include "ingarch/panel.hpp"

namespace ingarch {

// Synthetic-panel generator. Covariates are entity-level Bernoulli draws held
// constant over time; links follow the estimation module (logit on p for the
// Poisson model, log on lambda for the NB model) or fall back to the constant
// p / lambda when no coefficients are given. The Poisson generator simulates
// the unobserved anchor period internally and emits periods 1..periods.
struct SimConfig {
  ModelKind model = ModelKind::negbin;
  std::size_t n_entities = 100;
  long periods = 6;
  double mu = 1.0;
  double a_anchor = 1.0;
  double delta = 0.8;
  bool stationary = false;  // poisson: per-period delta from the anchor formula
  std::vector<std::string> cov_names;
  std::vector<double> cov_bernoulli;
  std::vector<double> link_coeffs;  // xi (poisson) or zeta (negbin); empty = constants below
  double p_const = 0.5;
  double lambda_const = 1.0;
  double exposure_zero_prob = 0.0;
  double absent_prob = 0.0;
  std::uint64_t seed = 1;
};

struct LatentRow {
  std::string entity_id;
  long period = 0;
  double theta = 0.0;
  double state1 = 0.0;  // predictive mean (poisson) or shape (negbin)
  double state2 = 0.0;  // rate (negbin)
};

struct SimOutput {
  Panel panel;
  std::vector<LatentRow> latent;
};

SimOutput simulate_panel(const SimConfig& config);

}  // namespace ingarch
