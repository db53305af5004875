#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ingarch/nelder_mead.hpp"
#include "ingarch/panel.hpp"

namespace ingarch {

enum class ModelKind { poisson, negbin };

// free_scalar fits one delta in [eps, 1]; stationary_from_anchor derives the
// per-period deltas that hold the latent variance flat (Poisson) or keeps
// delta constant (NB, whose shrink recursion is already variance-stationary);
// fixed_one pins delta = 1, the static random-effects baseline.
enum class DeltaPolicy { free_scalar, stationary_from_anchor, fixed_one };

// Covariates enter the observation layer only: p = sigmoid(<x, xi>) for the
// Poisson model, lambda = exp(<x, zeta>) for the NB model, over exactly these
// panel columns (no implicit intercept).
struct LinkSpec {
  std::vector<std::string> columns;
};

struct OptimizerConfig {
  int max_iterations = 2000;
  double spread_tol = 1e-9;
  int multistarts = 5;
  double jitter = 0.2;
  std::uint64_t seed = 1u;
};

/// Maps an unconstrained real onto [1e-8, 1); inverse below.
double squash_delta(double u);
double unsquash_delta(double delta);

struct FitEstimates {
  double anchor = 1.0;  // mu (poisson) or a_anchor (negbin)
  double delta = 1.0;   // scalar delta, or delta0 under the stationary policy
  std::vector<double> link_coeffs;
};

struct Score {
  double mse = 0.0;
  double predictive_loglik = 0.0;
  std::size_t n = 0;
};

struct FitReport {
  ModelKind model = ModelKind::negbin;
  DeltaPolicy policy = DeltaPolicy::free_scalar;
  std::vector<std::string> link_columns;
  FitEstimates estimates;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
  int multistarts = 0;
  int failed_starts = 0;
  std::size_t n_entities = 0;
  std::size_t n_obs_used = 0;
  std::vector<std::pair<std::string, double>> per_entity_loglik;
  std::optional<Score> holdout;
  std::uint64_t seed = 0;
};

// Unconstrained vector layout: [log anchor, delta transform (absent under
// fixed_one), link coefficients...].
std::vector<double> pack_parameters(const FitEstimates& estimates, DeltaPolicy policy);
FitEstimates unpack_parameters(std::span<const double> theta, DeltaPolicy policy,
                               std::size_t n_link);

/// Negative panel log-likelihood at an unconstrained parameter vector.
/// Entities evaluate independently (in parallel) and reduce by compensated
/// summation in entity-id order, so the value is bit-identical under entity
/// permutations and any thread count. Non-finite intermediates yield +inf.
double neg_loglik(std::span<const double> theta, const Panel& panel, ModelKind model,
                  DeltaPolicy policy, const LinkSpec& links);

/// Multistart Nelder-Mead maximum likelihood. Start 0 is a moment-matched
/// initialization (link coefficients from a weighted least-squares fit over
/// covariate cells, delta at 0.5, a_anchor at 1); the remaining starts jitter
/// it by +/- jitter. Deterministic given (panel, config).
FitReport fit(const Panel& panel, ModelKind model, DeltaPolicy policy, const LinkSpec& links,
              const OptimizerConfig& config = {});

struct PredictiveLaw {
  enum class Kind { zero, poisson, negbin };
  Kind kind = Kind::zero;
  double mean = 0.0;
  double poisson_mean = 0.0;  // poisson kind
  double kappa = 0.0;         // negbin kind
  double pi = 0.0;
  double log_pmf(std::int64_t z) const;
};

struct EntityPrediction {
  std::string entity_id;
  PredictiveLaw law;
};

/// One-step-ahead laws at the horizon period for every entity carrying a row
/// there; the entity's history through horizon-1 is filtered under the
/// fitted parameters. An entity with a horizon row but no earlier history is
/// an error.
std::vector<EntityPrediction> predict(const FitReport& report, const Panel& panel, long horizon);

/// MSE of counts against predicted means plus the summed predictive log-pmf.
/// The entity sets of predictions and actuals must coincide.
Score score(std::span<const EntityPrediction> predictions,
            std::span<const std::pair<std::string, std::int64_t>> actuals);

}  // namespace ingarch
