#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ingarch/negbin.hpp"
#include "ingarch/poisson.hpp"

namespace ingarch {

// One (entity, period) record. A missing count value is a
// recorded-as-missing observation (unawareness missing); exposure == 0 means
// the period carried no risk, which forces a structural zero count.
struct PanelObservation {
  std::string entity_id;
  long period = 0;
  std::optional<std::int64_t> count;
  std::uint8_t exposure = 1;
  std::vector<double> covariates;
  bool gap_filler = false;  // synthesized for a period absent from the data
};

struct EntitySeries {
  std::string entity_id;
  long first_period = 0;
  std::vector<PanelObservation> rows;  // consecutive periods after gap filling
};

struct Panel {
  std::vector<std::string> covariate_names;
  std::vector<EntitySeries> entities;

  std::size_t observation_count() const;
  /// Groups rows by entity (first-appearance order), checks strictly
  /// increasing periods and covariate arity, and fills interior period gaps
  /// with zero-exposure rows.
  static Panel assemble(std::vector<PanelObservation> rows,
                        std::vector<std::string> covariate_names);
};

enum class MissingPolicy {
  as_no_exposure  // recorded-as-missing counts skip both filter and likelihood
};

struct EffectivePeriod {
  bool use_in_filter = false;
  bool use_in_likelihood = false;
  double effective_count = 0.0;
};

/// Resolves each row to its filtering/likelihood role. Zero exposure and
/// missing counts both skip filter and likelihood; a positive count under
/// zero exposure is a data error.
std::vector<EffectivePeriod> apply_missingness(const EntitySeries& series, MissingPolicy policy);

// One entity's filtering pass. pred_mean[t] is the latent predictive mean
// entering period t, filtered_mean[t] the post-update mean (equal to
// pred_mean[t] on skipped periods); final_* carries the state evolved past
// the last period, which one-step-ahead prediction consumes.
struct SeriesRun {
  double loglik = 0.0;
  std::vector<double> loglik_terms;
  std::vector<std::uint8_t> term_used;
  std::vector<double> pred_mean;
  std::vector<double> filtered_mean;
  std::vector<negbin::State> nb_pred;  // negbin runner only
  double final_pred_mean = 0.0;
  negbin::State final_state;
};

/// Poisson-layer run: starts at the anchor mean mu (the pre-data anchor
/// period collapses to it), filters with p_star = w p, evolves with
/// drift (1 - delta) mu.
SeriesRun run_poisson_series(double mu, std::span<const double> delta,
                             std::span<const double> pstar,
                             std::span<const EffectivePeriod> periods);

/// NB-layer run: starts at the Gamma(a_anchor, a_anchor) prior and uses the
/// variance-stationary evolution.
SeriesRun run_nb_series(double a_anchor, std::span<const double> delta,
                        std::span<const double> wlambda,
                        std::span<const EffectivePeriod> periods);

}  // namespace ingarch
