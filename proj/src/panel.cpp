#include "ingarch/panel.hpp"

#include <stdexcept>
#include <unordered_map>

namespace ingarch {

namespace {

[[noreturn]] void data_error(const std::string& entity, long period, const std::string& what) {
  throw std::runtime_error("entity '" + entity + "' period " + std::to_string(period) + ": " + what);
}

}  // namespace

std::size_t Panel::observation_count() const {
  std::size_t n = 0;
  for (const auto& e : entities)
    for (const auto& r : e.rows)
      if (!r.gap_filler) ++n;
  return n;
}

Panel Panel::assemble(std::vector<PanelObservation> rows, std::vector<std::string> covariate_names) {
  Panel panel;
  panel.covariate_names = std::move(covariate_names);
  std::unordered_map<std::string, std::size_t> index;
  for (auto& row : rows) {
    if (row.period < 1) data_error(row.entity_id, row.period, "period must be >= 1");
    if (row.exposure > 1) data_error(row.entity_id, row.period, "exposure must be 0 or 1");
    if (row.covariates.size() != panel.covariate_names.size())
      data_error(row.entity_id, row.period, "covariate arity mismatch");
    if (row.count && *row.count < 0) data_error(row.entity_id, row.period, "negative count");
    if (row.exposure == 0 && row.count && *row.count > 0)
      data_error(row.entity_id, row.period, "positive count under zero exposure");
    auto [it, inserted] = index.try_emplace(row.entity_id, panel.entities.size());
    if (inserted) panel.entities.push_back(EntitySeries{row.entity_id, row.period, {}});
    EntitySeries& series = panel.entities[it->second];
    if (!series.rows.empty()) {
      const long prev = series.rows.back().period;
      if (row.period <= prev) data_error(row.entity_id, row.period, "periods must be strictly increasing");
      // interior gaps become no-exposure periods
      for (long missing = prev + 1; missing < row.period; ++missing) {
        PanelObservation filler;
        filler.entity_id = row.entity_id;
        filler.period = missing;
        filler.count = 0;
        filler.exposure = 0;
        filler.covariates.assign(panel.covariate_names.size(), 0.0);
        filler.gap_filler = true;
        series.rows.push_back(std::move(filler));
      }
    }
    series.rows.push_back(std::move(row));
  }
  return panel;
}

std::vector<EffectivePeriod> apply_missingness(const EntitySeries& series, MissingPolicy policy) {
  if (policy != MissingPolicy::as_no_exposure) throw std::invalid_argument("unsupported missingness policy");
  std::vector<EffectivePeriod> out(series.rows.size());
  for (std::size_t t = 0; t < series.rows.size(); ++t) {
    const PanelObservation& row = series.rows[t];
    if (row.exposure == 0) {
      if (row.count && *row.count > 0) data_error(row.entity_id, row.period, "positive count under zero exposure");
      out[t] = EffectivePeriod{false, false, 0.0};
    } else if (!row.count) {
      out[t] = EffectivePeriod{false, false, 0.0};
    } else {
      out[t] = EffectivePeriod{true, true, static_cast<double>(*row.count)};
    }
  }
  return out;
}

SeriesRun run_poisson_series(double mu, std::span<const double> delta,
                             std::span<const double> pstar,
                             std::span<const EffectivePeriod> periods) {
  const std::size_t n = periods.size();
  if (delta.size() != n || pstar.size() != n) throw std::invalid_argument("run_poisson_series: length mismatch");
  SeriesRun run;
  run.loglik_terms.assign(n, 0.0);
  run.term_used.assign(n, 0);
  run.pred_mean.resize(n);
  run.filtered_mean.resize(n);
  poisson::State state{mu};
  for (std::size_t t = 0; t < n; ++t) {
    run.pred_mean[t] = state.mean;
    const double ps = periods[t].use_in_filter ? pstar[t] : 0.0;
    if (periods[t].use_in_likelihood) {
      run.loglik_terms[t] = poisson::predictive_logpmf(state, pstar[t],
                                                       static_cast<std::int64_t>(periods[t].effective_count));
      run.term_used[t] = 1;
      run.loglik += run.loglik_terms[t];
    }
    run.filtered_mean[t] = poisson::filter(state, periods[t].effective_count, ps);
    state = poisson::evolve(run.filtered_mean[t], delta[t], (1.0 - delta[t]) * mu);
  }
  run.final_pred_mean = state.mean;
  return run;
}

SeriesRun run_nb_series(double a_anchor, std::span<const double> delta,
                        std::span<const double> wlambda,
                        std::span<const EffectivePeriod> periods) {
  const std::size_t n = periods.size();
  if (delta.size() != n || wlambda.size() != n) throw std::invalid_argument("run_nb_series: length mismatch");
  SeriesRun run;
  run.loglik_terms.assign(n, 0.0);
  run.term_used.assign(n, 0);
  run.pred_mean.resize(n);
  run.filtered_mean.resize(n);
  run.nb_pred.resize(n);
  negbin::State state{a_anchor, a_anchor};
  for (std::size_t t = 0; t < n; ++t) {
    run.nb_pred[t] = state;
    run.pred_mean[t] = state.mean();
    const double wl = periods[t].use_in_filter ? wlambda[t] : 0.0;
    if (periods[t].use_in_likelihood) {
      run.loglik_terms[t] = negbin::predictive_logpmf(state, wlambda[t],
                                                      static_cast<std::int64_t>(periods[t].effective_count));
      run.term_used[t] = 1;
      run.loglik += run.loglik_terms[t];
    }
    const negbin::State filtered = negbin::filter(state, periods[t].effective_count, wl);
    run.filtered_mean[t] = filtered.mean();
    state = negbin::evolve(filtered, delta[t], a_anchor).state;
  }
  run.final_pred_mean = state.mean();
  run.final_state = state;
  return run;
}

}  // namespace ingarch
