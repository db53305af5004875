#include "ingarch/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "ingarch/config.hpp"
#include "ingarch/covariance_check.hpp"
#include "ingarch/csv_io.hpp"
#include "ingarch/estimation.hpp"
#include "ingarch/kernels.hpp"
#include "ingarch/panel_sim.hpp"

namespace ingarch::cli {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

KeyValues merge_options(const Options& options) {
  KeyValues kv;
  if (!options.config_path.empty()) kv = KeyValues::from_file(options.config_path);
  if (!options.model.empty()) kv.set("model", options.model);
  if (!options.panel_path.empty()) kv.set("panel", options.panel_path);
  if (!options.out_path.empty()) kv.set("out", options.out_path);
  if (!options.delta_policy.empty()) kv.set("delta_policy", options.delta_policy);
  if (options.lags) kv.set("lags", *options.lags);
  if (options.seed) kv.set("seed", std::to_string(*options.seed));
  if (options.horizon) kv.set("horizon", std::to_string(*options.horizon));
  if (options.verify_n) kv.set("verify_n", std::to_string(*options.verify_n));
  return kv;
}

struct ModelChoice {
  ModelKind kind;
  bool force_fixed_one;  // random_effects = nb with delta pinned at 1
  std::string label;
};

ModelChoice parse_model(const KeyValues& kv) {
  const std::string name = kv.get_string("model", "nb");
  if (name == "poisson") return {ModelKind::poisson, false, name};
  if (name == "nb") return {ModelKind::negbin, false, name};
  if (name == "random_effects") return {ModelKind::negbin, true, name};
  throw std::runtime_error("unknown model '" + name + "' (expected poisson, nb or random_effects)");
}

DeltaPolicy parse_policy(const KeyValues& kv, const ModelChoice& model) {
  if (model.force_fixed_one) return DeltaPolicy::fixed_one;
  const std::string name = kv.get_string("delta_policy", "free_scalar");
  if (name == "free_scalar") return DeltaPolicy::free_scalar;
  if (name == "stationary_from_anchor") return DeltaPolicy::stationary_from_anchor;
  if (name == "fixed_one") return DeltaPolicy::fixed_one;
  throw std::runtime_error("unknown delta_policy '" + name + "'");
}

std::string policy_name(DeltaPolicy policy) {
  switch (policy) {
    case DeltaPolicy::free_scalar: return "free_scalar";
    case DeltaPolicy::stationary_from_anchor: return "stationary_from_anchor";
    case DeltaPolicy::fixed_one: return "fixed_one";
  }
  return "?";
}

std::uint64_t require_seed(const KeyValues& kv) {
  if (!kv.has("seed")) throw std::runtime_error("this command requires a seed (--seed or config key)");
  return kv.get_u64("seed", 0);
}

std::string require_out(const KeyValues& kv) {
  const std::string out = kv.get_string("out");
  if (out.empty()) throw std::runtime_error("an output path is required (--out or config key)");
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json estimates_json(const FitReport& report) {
  json est;
  est[report.model == ModelKind::poisson ? "mu" : "a_anchor"] = report.estimates.anchor;
  est["delta"] = report.estimates.delta;
  est[report.model == ModelKind::poisson ? "xi" : "zeta"] = report.estimates.link_coeffs;
  return est;
}

json fit_report_json(const FitReport& report, const std::string& model_label) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["model"] = model_label;
  j["delta_policy"] = policy_name(report.policy);
  j["link_columns"] = report.link_columns;
  j["estimates"] = estimates_json(report);
  j["loglik"] = report.loglik;
  j["converged"] = report.converged;
  j["iterations"] = report.iterations;
  j["evaluations"] = report.evaluations;
  j["multistarts"] = report.multistarts;
  j["failed_starts"] = report.failed_starts;
  j["n_entities"] = report.n_entities;
  j["n_obs_used"] = report.n_obs_used;
  j["seed"] = report.seed;
  json per_entity = json::object();
  for (const auto& [id, ll] : report.per_entity_loglik) per_entity[id] = ll;
  j["per_entity_loglik"] = per_entity;
  if (report.holdout) {
    j["holdout"] = {{"mse", report.holdout->mse},
                    {"predictive_loglik", report.holdout->predictive_loglik},
                    {"n", report.holdout->n}};
  }
  return j;
}

Panel panel_before(const Panel& panel, long horizon) {
  std::vector<PanelObservation> rows;
  for (const auto& series : panel.entities)
    for (const auto& row : series.rows)
      if (!row.gap_filler && row.period < horizon) rows.push_back(row);
  return Panel::assemble(std::move(rows), panel.covariate_names);
}

std::vector<std::pair<std::string, std::int64_t>> actuals_at(const Panel& panel, long horizon) {
  std::vector<std::pair<std::string, std::int64_t>> actuals;
  for (const auto& series : panel.entities)
    for (const auto& row : series.rows)
      if (!row.gap_filler && row.period == horizon && row.count)
        actuals.emplace_back(series.entity_id, *row.count);
  return actuals;
}

Score holdout_score(const FitReport& report, const Panel& panel, long horizon) {
  const auto predictions = predict(report, panel, horizon);
  auto actuals = actuals_at(panel, horizon);
  std::vector<EntityPrediction> matched;
  matched.reserve(actuals.size());
  for (const auto& [id, z] : actuals) {
    (void)z;
    for (const auto& p : predictions)
      if (p.entity_id == id) matched.push_back(p);
  }
  return score(matched, actuals);
}

LinkSpec links_from(const KeyValues& kv, const Panel& panel) {
  LinkSpec links;
  links.columns = kv.get_strings("link_columns");
  if (links.columns.empty() && !kv.has("link_columns")) links.columns = panel.covariate_names;
  return links;
}

}  // namespace

int cmd_simulate(const Options& options) {
  const KeyValues kv = merge_options(options);
  const ModelChoice model = parse_model(kv);
  SimConfig config;
  config.model = model.kind;
  config.seed = require_seed(kv);
  config.n_entities = static_cast<std::size_t>(kv.get_long("n", 100));
  config.periods = kv.get_long("periods", 6);
  config.mu = kv.get_double("mu", 1.0);
  config.a_anchor = kv.get_double("a_anchor", 1.0);
  config.delta = model.force_fixed_one ? 1.0 : kv.get_double("delta", 0.8);
  config.stationary = kv.get_string("delta_policy") == "stationary_from_anchor";
  config.cov_names = kv.get_strings("cov_names");
  config.cov_bernoulli = kv.get_doubles("cov_bernoulli");
  config.link_coeffs = kv.get_doubles(model.kind == ModelKind::poisson ? "xi" : "zeta");
  config.p_const = kv.get_double("p", 0.5);
  config.lambda_const = kv.get_double("lambda", 1.0);
  config.exposure_zero_prob = kv.get_double("exposure_zero_prob", 0.0);
  config.absent_prob = kv.get_double("absent_prob", 0.0);

  const std::string out = require_out(kv);
  const std::string latent_out = kv.get_string("out_latent", out + ".latent.csv");
  const SimOutput sim = simulate_panel(config);
  write_panel_csv(out, sim.panel);

  std::string latent;
  latent += model.kind == ModelKind::poisson ? "entity_id,period,theta,mu_pred\n"
                                             : "entity_id,period,theta,a_pred,b_pred\n";
  for (const auto& row : sim.latent) {
    latent += row.entity_id;
    latent += ',';
    latent += std::to_string(row.period);
    latent += ',';
    latent += format_double(row.theta);
    latent += ',';
    latent += format_double(row.state1);
    if (model.kind == ModelKind::negbin) {
      latent += ',';
      latent += format_double(row.state2);
    }
    latent += '\n';
  }
  write_text(latent_out, latent);
  return 0;
}

int cmd_fit(const Options& options) {
  const KeyValues kv = merge_options(options);
  const ModelChoice model = parse_model(kv);
  const DeltaPolicy policy = parse_policy(kv, model);
  const std::string panel_path = kv.get_string("panel");
  if (panel_path.empty()) throw std::runtime_error("fit requires a panel CSV (--panel)");
  const Panel panel = read_panel_csv(panel_path);
  const LinkSpec links = links_from(kv, panel);

  OptimizerConfig optimizer;
  optimizer.seed = kv.get_u64("seed", 1);
  optimizer.multistarts = static_cast<int>(kv.get_long("multistarts", optimizer.multistarts));
  optimizer.max_iterations = static_cast<int>(kv.get_long("max_iterations", optimizer.max_iterations));
  optimizer.spread_tol = kv.get_double("spread_tol", optimizer.spread_tol);

  const long horizon = kv.get_long("horizon", 0);
  const Panel& train = horizon > 0 ? panel_before(panel, horizon) : panel;
  FitReport report = fit(horizon > 0 ? train : panel, model.kind, policy, links, optimizer);
  if (horizon > 0 && report.converged) report.holdout = holdout_score(report, panel, horizon);

  const json j = fit_report_json(report, model.label);
  const std::string out = kv.get_string("out");
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json(out, j);
  }
  return report.converged ? 0 : 2;
}

int cmd_predict(const Options& options) {
  const KeyValues kv = merge_options(options);
  if (options.fit_report_path.empty()) throw std::runtime_error("predict requires --fit <report.json>");
  std::ifstream in(options.fit_report_path);
  if (!in) throw std::runtime_error("cannot open fit report '" + options.fit_report_path + "'");
  json j;
  in >> j;
  if (j.value("schema_version", 0) != kSchemaVersion)
    throw std::runtime_error("fit report has an unsupported schema_version");

  KeyValues model_kv;
  model_kv.set("model", j.at("model").get<std::string>());
  const ModelChoice model = parse_model(model_kv);
  FitReport report;
  report.model = model.kind;
  const std::string policy = j.at("delta_policy").get<std::string>();
  report.policy = policy == "free_scalar"              ? DeltaPolicy::free_scalar
                  : policy == "stationary_from_anchor" ? DeltaPolicy::stationary_from_anchor
                                                       : DeltaPolicy::fixed_one;
  report.link_columns = j.at("link_columns").get<std::vector<std::string>>();
  const json& est = j.at("estimates");
  report.estimates.anchor = est.at(model.kind == ModelKind::poisson ? "mu" : "a_anchor").get<double>();
  report.estimates.delta = est.at("delta").get<double>();
  report.estimates.link_coeffs =
      est.at(model.kind == ModelKind::poisson ? "xi" : "zeta").get<std::vector<double>>();

  const std::string panel_path = kv.get_string("panel");
  if (panel_path.empty()) throw std::runtime_error("predict requires a panel CSV (--panel)");
  const Panel panel = read_panel_csv(panel_path);
  const long horizon = kv.get_long("horizon", 0);
  if (horizon < 1) throw std::runtime_error("predict requires --horizon >= 1");

  const auto predictions = predict(report, panel, horizon);
  std::string csv = "entity_id,period,predicted_mean,actual,predictive_logpmf\n";
  std::vector<std::pair<std::string, std::int64_t>> actuals;
  for (const auto& p : predictions) {
    std::optional<std::int64_t> actual;
    for (const auto& series : panel.entities) {
      if (series.entity_id != p.entity_id) continue;
      for (const auto& row : series.rows)
        if (row.period == horizon && !row.gap_filler && row.count) actual = *row.count;
    }
    csv += p.entity_id + ',' + std::to_string(horizon) + ',' + format_double(p.law.mean) + ',';
    if (actual) {
      csv += std::to_string(*actual);
      csv += ',';
      csv += format_double(p.law.log_pmf(*actual));
      actuals.emplace_back(p.entity_id, *actual);
    } else {
      csv += ',';
    }
    csv += '\n';
  }
  const std::string out = require_out(kv);
  write_text(out, csv);

  std::vector<EntityPrediction> matched;
  for (const auto& [id, z] : actuals) {
    (void)z;
    for (const auto& p : predictions)
      if (p.entity_id == id) matched.push_back(p);
  }
  const Score s = score(matched, actuals);
  json scores;
  scores["schema_version"] = kSchemaVersion;
  scores["horizon"] = horizon;
  scores["n"] = s.n;
  scores["mse"] = s.mse;
  scores["predictive_loglik"] = s.predictive_loglik;
  write_json(kv.get_string("scores_out", out + ".scores.json"), scores);
  return 0;
}

int cmd_moments(const Options& options) {
  const KeyValues kv = merge_options(options);
  const ModelChoice model = parse_model(kv);
  const auto periods = static_cast<std::size_t>(kv.get_long("periods", 8));
  std::vector<std::size_t> lags = kv.get_sizes("lags");
  if (!kv.has("lags")) lags = {1, 2};

  std::vector<std::uint8_t> w(periods, 1);
  for (std::size_t t : kv.get_sizes("w_zero_periods")) {
    if (t >= periods) throw std::runtime_error("w_zero_periods entry beyond the horizon");
    w[t] = 0;
  }

  MomentTable table;
  if (model.kind == ModelKind::poisson) {
    poisson::Params params;
    params.mu = kv.get_double("mu", 1.0);
    params.w = w;
    params.p.assign(periods, kv.get_double("p", 0.5));
    const auto p_schedule = kv.get_doubles("p_schedule");
    if (!p_schedule.empty()) {
      if (p_schedule.size() != periods) throw std::runtime_error("p_schedule length != periods");
      params.p = p_schedule;
    }
    const double delta = kv.get_double("delta", 0.8);
    params.delta.assign(periods, delta);
    if (kv.get_string("delta_policy") == "stationary_from_anchor") {
      for (std::size_t t = 1; t < periods; ++t)
        params.delta[t] = poisson::stationary_delta(delta, params.pstar(0), params.pstar(t));
    }
    table = poisson::moments(params, periods);
  } else {
    negbin::Params params;
    params.a_anchor = kv.get_double("a_anchor", 1.0);
    params.w = w;
    params.lambda.assign(periods, kv.get_double("lambda", 1.0));
    const auto schedule = kv.get_doubles("lambda_schedule");
    if (!schedule.empty()) {
      if (schedule.size() != periods) throw std::runtime_error("lambda_schedule length != periods");
      params.lambda = schedule;
    }
    params.delta.assign(periods, model.force_fixed_one ? 1.0 : kv.get_double("delta", 0.8));
    table = negbin::moments(params, periods);
  }

  std::string csv = "t,mean_theta,var_theta,mean_z,var_z";
  for (std::size_t k : lags) csv += ",autocov_z_lag" + std::to_string(k);
  csv += '\n';
  for (std::size_t t = 0; t < table.periods(); ++t) {
    csv += std::to_string(t) + ',' + format_double(table.mean_theta[t]) + ',' +
           format_double(table.var_theta[t]) + ',' + format_double(table.mean_z[t]) + ',' +
           format_double(table.var_z[t]);
    for (std::size_t k : lags) {
      csv += ',';
      if (t + k < table.periods()) csv += format_double(table.obs_cov(t, k));
    }
    csv += '\n';
  }
  write_text(require_out(kv), csv);
  return 0;
}

int cmd_verify(const Options& options) {
  const KeyValues kv = merge_options(options);
  const std::uint64_t seed = require_seed(kv);
  const std::size_t n_paths = static_cast<std::size_t>(kv.get_long("verify_n", 200000));
  std::vector<std::size_t> lags = kv.get_sizes("lags");
  if (!kv.has("lags")) lags = {1, 2};
  const auto periods = static_cast<std::size_t>(kv.get_long("periods", 8));
  const double mu = kv.get_double("mu", 2.0);
  const double p = kv.get_double("p", 0.5);
  const double delta = kv.get_double("delta", 0.8);
  const double a_anchor = kv.get_double("a_anchor", 2.0);
  const double lambda = kv.get_double("lambda", 1.0);
  const std::size_t t_at = static_cast<std::size_t>(kv.get_long("t", 1));
  const bool in_region = delta <= 1.0;

  const RngStream root(seed, 0);
  json checks = json::array();
  bool all_pass = true;
  auto add = [&](json j, bool pass, bool skipped = false) {
    j["pass"] = pass;
    if (skipped) j["skipped"] = true;
    if (!skipped && !pass) all_pass = false;
    checks.push_back(std::move(j));
  };

  {  // coefficient bijections
    RngStream rng = root.split(1);
    double max_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double d = 0.01 + 0.99 * rng.next_unit();
      const double c = 2.0 * rng.next_unit();
      const double p_t = 0.01 + 0.98 * rng.next_unit();
      const double p_next = 0.01 + 0.98 * rng.next_unit();
      const auto cur = poisson::to_ingarch(d, c, p_t, p_next);
      const auto nxt = poisson::to_ingarch(0.5, 0.1, p_next, 0.5);
      const auto inv = poisson::from_ingarch(cur, nxt);
      max_err = std::max({max_err, std::fabs(inv.p - p_t), std::fabs(inv.delta - d), std::fabs(inv.c - c)});
    }
    add({{"name", "poisson_bijection_roundtrip"}, {"max_abs_error", max_err}}, max_err <= 1e-12);
  }
  {
    RngStream rng = root.split(2);
    double max_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double rate = 0.3 + 6.0 * rng.next_unit();
      const double d = 0.01 + 0.99 * rng.next_unit();
      const double c = rng.next_unit();
      const auto inv = negbin::from_ingarch(negbin::to_ingarch_unit(rate, d, c));
      max_err = std::max({max_err, std::fabs(inv.rate_pred - rate), std::fabs(inv.delta - d),
                          std::fabs(inv.c - c)});
      const double wl_t = 0.2 + 3.0 * rng.next_unit();
      const double wl_next = 0.2 + 3.0 * rng.next_unit();
      const auto map = negbin::to_ingarch(negbin::State{1.0, rate}, d, c, wl_t, wl_next);
      const auto pinv = negbin::from_ingarch(*map.coeffs, wl_t, wl_next);
      max_err = std::max({max_err, std::fabs(pinv.rate_pred - rate), std::fabs(pinv.delta - d),
                          std::fabs(pinv.c - c)});
    }
    add({{"name", "nb_bijection_roundtrip"}, {"max_abs_error", max_err}}, max_err <= 1e-12);
  }

  {  // convex-order scan, poisson
    RngStream rng = root.split(3);
    double min_gap = std::numeric_limits<double>::infinity();
    json witness;
    bool violated = false;
    for (int i = 0; i < 32; ++i) {
      poisson::MgfContext ctx;
      ctx.delta = delta;
      ctx.c = std::max(0.0, 1.0 - delta) * mu;
      ctx.p = p;
      ctx.mu_prev = mu * std::exp(rng.next_unit() - 0.5);
      ctx.z = static_cast<double>(sample_poisson(p * ctx.mu_prev, rng));
      if (ctx.delta == 0.0 && ctx.c == 0.0) ctx.c = 0.1;
      const GapScan scan = poisson::scan_mgf_gap(ctx);
      min_gap = std::min(min_gap, scan.min_gap);
      if (scan.violated && !violated) {
        violated = true;
        witness = {{"s", scan.witness_s}, {"gap", scan.witness_gap}};
      }
    }
    json j{{"name", "poisson_convex_order"}, {"delta", delta}, {"min_gap", min_gap}};
    if (violated) j["witness"] = witness;
    add(std::move(j), !violated && min_gap >= -1e-10);
  }
  {  // convex-order scan, nb
    RngStream rng = root.split(4);
    double min_gap = std::numeric_limits<double>::infinity();
    json witness;
    bool violated = false;
    for (int i = 0; i < 32; ++i) {
      negbin::MgfContext ctx;
      ctx.delta = delta;
      ctx.c = std::max(0.0, 1.0 - delta);
      ctx.shape_f = a_anchor * (0.5 + rng.next_unit());
      ctx.rate_f = a_anchor + lambda * (0.5 + rng.next_unit());
      if (in_region) {
        const double d2 = delta * delta;
        ctx.q = 1.0 / (d2 + (1.0 - d2) * ctx.rate_f / a_anchor);
      } else {
        ctx.q = 1.0;  // delta > 1 with q = 1 sits outside the order region
      }
      const GapScan scan = negbin::scan_mgf_gap(ctx);
      min_gap = std::min(min_gap, scan.min_gap);
      if (scan.violated && !violated) {
        violated = true;
        witness = {{"s", scan.witness_s}, {"gap", scan.witness_gap}};
      }
    }
    json j{{"name", "nb_convex_order"}, {"delta", delta}, {"min_gap", min_gap}};
    if (violated) j["witness"] = witness;
    add(std::move(j), !violated && min_gap >= -1e-10);
  }

  {  // appendix sweep: shrink factor and rate bounds along random paths
    RngStream rng = root.split(5);
    double max_q = 0.0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 10000; ++rep) {
      RngStream r = rng.split(rep);
      const double anchor = std::exp(std::log(0.2) + r.next_unit() * std::log(100.0));
      negbin::State state{anchor, anchor};
      for (int t = 0; t < 20; ++t) {
        const double wl = r.next_unit() < 0.1 ? 0.0 : std::exp(std::log(0.2) + r.next_unit() * std::log(25.0));
        const double theta = sample_gamma(state.shape, state.rate, r);
        const double z = static_cast<double>(sample_poisson(wl * theta, r));
        const negbin::State filtered = negbin::filter(state, z, wl);
        const auto ev = negbin::evolve(filtered, r.next_unit(), anchor);
        max_q = std::max(max_q, ev.q);
        min_margin = std::min(min_margin, std::min(filtered.rate, ev.state.rate) - anchor);
        state = ev.state;
      }
    }
    add({{"name", "nb_shrink_and_rate_bounds"}, {"max_q", max_q}, {"min_rate_margin", min_margin}},
        max_q <= 1.0 + 1e-12 && min_margin >= -1e-12);
  }

  {  // poisson stationary-variance identity
    if (in_region) {
      poisson::Params params;
      params.mu = mu;
      params.p.assign(periods, p);
      params.w.assign(periods, 1);
      params.delta.assign(periods, delta);
      for (std::size_t t = 1; t < periods; ++t)
        params.delta[t] = poisson::stationary_delta(delta, params.pstar(0), params.pstar(t));
      const MomentTable table = poisson::moments(params, periods);
      double max_dev = 0.0;
      for (std::size_t t = 1; t < periods; ++t)
        max_dev = std::max(max_dev, std::fabs(table.var_theta[t] - table.var_theta[1]));
      add({{"name", "poisson_stationary_variance"}, {"max_abs_deviation", max_dev}}, max_dev <= 1e-12);
    } else {
      add({{"name", "poisson_stationary_variance"}, {"reason", "delta outside [0, 1]"}}, false, true);
    }
  }

  {  // covariance reports
    poisson::Params pp;
    pp.mu = mu;
    pp.p.assign(periods, p);
    pp.w.assign(periods, 1);
    pp.delta.assign(periods, std::min(delta, 1.0));
    negbin::Params np;
    np.a_anchor = a_anchor;
    np.lambda.assign(periods, lambda);
    np.w.assign(periods, 1);
    np.delta.assign(periods, std::min(delta, 1.0));
    std::uint64_t stream = 100;
    for (std::size_t lag : lags) {
      if (t_at + lag >= periods) throw std::runtime_error("t + lag beyond the configured periods");
      auto emit = [&](const char* name, const CovReport& r) {
        add({{"name", name},
             {"t", r.t},
             {"lag", r.lag},
             {"empirical", r.empirical_cov},
             {"theoretical", r.theoretical_cov},
             {"mc_stderr", r.mc_stderr}},
            r.pass);
      };
      auto skip = [&](const char* name) {
        add({{"name", name}, {"lag", lag}, {"reason", "delta outside the lift region"}}, false, true);
      };
      if (in_region) {
        emit("poisson_latent_cov", verify_latent_cov(pp, t_at, lag, n_paths, root.split(stream++)));
        emit("poisson_obs_cov", verify_obs_cov(pp, t_at, lag, n_paths, root.split(stream++)));
        emit("nb_latent_cov", verify_latent_cov(np, t_at, lag, n_paths, root.split(stream++)));
        emit("nb_obs_cov", verify_obs_cov(np, t_at, lag, n_paths, root.split(stream++)));
      } else {
        skip("poisson_latent_cov");
        skip("poisson_obs_cov");
        skip("nb_latent_cov");
        skip("nb_obs_cov");
      }
    }
  }

  json report;
  report["schema_version"] = kSchemaVersion;
  report["seed"] = seed;
  report["verify_n"] = n_paths;
  report["all_pass"] = all_pass;
  report["checks"] = checks;
  const std::string out = kv.get_string("out");
  if (out.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    write_json(out, report);
  }
  return all_pass ? 0 : 3;
}

}  // namespace ingarch::cli
