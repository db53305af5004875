#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ingarch/kernels.hpp"
#include "ingarch/poisson.hpp"
#include "support.hpp"

using namespace ingarch;
namespace poi = ingarch::poisson;

namespace {

poi::Params constant_params(double mu, double delta, double p, std::size_t periods) {
  poi::Params params;
  params.mu = mu;
  params.delta.assign(periods, delta);
  params.p.assign(periods, p);
  params.w.assign(periods, 1);
  return params;
}

}  // namespace

TEST_CASE("filter") {
  CHECK(poi::filter(poi::State{2.0}, 3.0, 0.5) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(poi::filter(poi::State{2.0}, 0.0, 0.0) == 2.0);  // no exposure skips the update
  CHECK(poi::filter(poi::State{5.0}, 0.0, 1.0 - 1e-12) < 1e-9);
  CHECK_THROWS_AS(poi::filter(poi::State{2.0}, 1.0, 0.0), std::runtime_error);
  CHECK_THROWS_AS(poi::filter(poi::State{2.0}, 1.0, 1.0), std::domain_error);
}

TEST_CASE("evolve") {
  CHECK(poi::evolve(4.0, 1.0, 0.0).mean == 4.0);
  CHECK(poi::evolve(4.0, 0.0, 1.0).mean == 1.0);
  CHECK(poi::evolve(4.0, 0.8, 0.2).mean == doctest::Approx(3.4).epsilon(1e-15));
  CHECK_THROWS_AS(poi::evolve(0.0, 0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(poi::evolve(4.0, 1.5, 0.0), std::domain_error);
}

TEST_CASE("predictive log-pmf") {
  CHECK(poi::predictive_logpmf(poi::State{2.0}, 0.5, 0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(poi::predictive_logpmf(poi::State{2.0}, 0.0, 0) == 0.0);
  CHECK(poi::predictive_logpmf(poi::State{2.0}, 0.5, 2) ==
        doctest::Approx(std::log(0.5) - 1.0).epsilon(1e-14));
  CHECK_THROWS_AS(poi::predictive_logpmf(poi::State{2.0}, 0.0, 1), std::runtime_error);
}

TEST_CASE("coefficient map and its inverse") {
  const IngarchCoeffs a = poi::to_ingarch(0.8, 0.5, 0.4, 0.5);
  CHECK(a.beta0 == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(a.beta1 == doctest::Approx(0.40).epsilon(1e-15));
  CHECK(a.beta2 == doctest::Approx(0.60).epsilon(1e-15));
  const IngarchCoeffs b = poi::to_ingarch(1.0, 0.0, 0.5, 0.5);
  CHECK(b.beta0 == 0.0);
  CHECK(b.beta1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b.beta2 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(poi::to_ingarch(0.0, 0.5, 0.4, 0.5), std::domain_error);

  // successor with p_{t+1} = 0.5
  const IngarchCoeffs next = poi::to_ingarch(0.7, 0.1, 0.5, 0.6);
  const poi::MssmPeriod inv = poi::from_ingarch(a, next);
  CHECK(inv.p == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(inv.delta == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(inv.c == doctest::Approx(0.5).epsilon(1e-15));

  CHECK(poi::thinning_prob(IngarchCoeffs{0.0, 0.3, 0.3}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(poi::thinning_prob(IngarchCoeffs{0.0, 0.3, 0.0}), std::domain_error);

  std::vector<IngarchCoeffs> single{a};
  CHECK_THROWS_WITH_AS(poi::from_ingarch(std::span<const IngarchCoeffs>(single)),
                       doctest::Contains("successor"), std::invalid_argument);
}

TEST_CASE("bijection round trip on random parameters") {
  RngStream rng(314, 0);
  double max_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double delta = 0.01 + 0.99 * rng.next_unit();
    const double c = 2.0 * rng.next_unit();
    const double p_t = 0.01 + 0.98 * rng.next_unit();
    const double p_next = 0.01 + 0.98 * rng.next_unit();
    const IngarchCoeffs cur = poi::to_ingarch(delta, c, p_t, p_next);
    // any successor with thinning_prob == p_next
    const IngarchCoeffs nxt = poi::to_ingarch(0.5, 0.1, p_next, 0.5);
    const poi::MssmPeriod inv = poi::from_ingarch(cur, nxt);
    max_err = std::max(max_err, std::fabs(inv.p - p_t));
    max_err = std::max(max_err, std::fabs(inv.delta - delta));
    max_err = std::max(max_err, std::fabs(inv.c - c));
  }
  CHECK(max_err <= 1e-12);
}

TEST_CASE("stationary delta") {
  CHECK(poi::stationary_delta(1.0, 0.3, 0.3) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(poi::stationary_delta(0.9, 0.3, 0.0) == 1.0);
  CHECK(poi::stationary_delta(0.0, 0.3, 0.4) == 0.0);
  bool convention = false;
  CHECK(poi::stationary_delta(0.0, 0.3, 0.0, &convention) == 1.0);
  CHECK(convention);
  convention = false;
  CHECK(poi::stationary_delta(0.5, 0.0, 0.0, &convention) == 1.0);
  CHECK(convention);
}

TEST_CASE("moments") {
  SUBCASE("variance recursion by hand") {
    auto params = constant_params(1.0, 1.0, 0.5, 3);
    const MomentTable table = poi::moments(params, 3);
    CHECK(table.var_theta[0] == 1.0);
    CHECK(table.var_theta[1] == doctest::Approx(1.5).epsilon(1e-15));
  }
  SUBCASE("delta == 0 kills all autocovariance") {
    auto params = constant_params(2.0, 0.0, 0.5, 5);
    params.c.assign(5, 2.0);
    const MomentTable table = poi::moments(params, 5);
    for (std::size_t t = 0; t + 1 < 5; ++t) {
      CHECK(table.obs_cov(t, 1) == 0.0);
      CHECK(table.latent_cov(t, 1) == 0.0);
    }
  }
  SUBCASE("delta == 1 without exposure keeps the anchor variance") {
    auto params = constant_params(2.0, 1.0, 0.5, 5);
    params.w.assign(5, 0);
    const MomentTable table = poi::moments(params, 5);
    for (std::size_t t = 0; t < 5; ++t) {
      CHECK(table.var_theta[t] == doctest::Approx(2.0).epsilon(1e-15));
      CHECK(table.mean_z[t] == 0.0);
    }
  }
}

TEST_CASE("stationary deltas make the latent variance flat from t = 1 on") {
  RngStream rng(99, 2);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t periods = 8;
    poi::Params params;
    params.mu = 0.5 + 4.0 * rng.next_unit();
    params.delta.resize(periods);
    params.p.resize(periods);
    params.w.assign(periods, 1);
    for (auto& pv : params.p) pv = 0.05 + 0.9 * rng.next_unit();
    if (rep % 3 == 0) params.w[3] = 0;
    params.delta[0] = 0.1 + 0.9 * rng.next_unit();
    for (std::size_t t = 1; t < periods; ++t)
      params.delta[t] = poi::stationary_delta(params.delta[0], params.pstar(0), params.pstar(t));
    const MomentTable table = poi::moments(params, periods);
    for (std::size_t t = 2; t < periods; ++t)
      CHECK(std::fabs(table.var_theta[t] - table.var_theta[1]) <= 1e-12);
  }
}

TEST_CASE("state-space predictive means equal the ingarch recursion") {
  RngStream rng(512, 9);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t periods = 30;
    poi::Params params;
    params.mu = 0.5 + 3.0 * rng.next_unit();
    params.delta.resize(periods);
    params.p.resize(periods);
    params.w.assign(periods, 1);
    params.c.resize(periods);
    for (std::size_t t = 0; t < periods; ++t) {
      params.delta[t] = 0.05 + 0.9 * rng.next_unit();
      params.p[t] = 0.1 + 0.8 * rng.next_unit();
      params.c[t] = 0.1 + rng.next_unit();
    }
    RngStream path_rng = rng.split(rep);
    const auto z = poi::simulate_marginal(params, periods, path_rng);

    // state-space route
    std::vector<double> mean_ss(periods, 0.0);
    poi::State state{params.mu};
    for (std::size_t t = 0; t + 1 < periods; ++t) {
      const double filtered = poi::filter(state, static_cast<double>(z[t]), params.pstar(t));
      state = poi::evolve(filtered, params.delta[t], params.c[t]);
      mean_ss[t + 1] = params.pstar(t + 1) * state.mean;
    }
    // coefficient route
    double m = params.p[0] * params.mu;
    for (std::size_t t = 0; t + 1 < periods; ++t) {
      const IngarchCoeffs cf = poi::to_ingarch(params.delta[t], params.c[t], params.p[t], params.p[t + 1]);
      m = cf.beta0 + cf.beta1 * static_cast<double>(z[t]) + cf.beta2 * m;
      CHECK(std::fabs(m - mean_ss[t + 1]) <= 1e-12);
    }
  }
}

TEST_CASE("simulation is seed-deterministic and respects degenerate exposure") {
  auto params = constant_params(2.0, 0.7, 0.4, 6);
  RngStream a(7, 1);
  RngStream b(7, 1);
  CHECK(poi::simulate_marginal(params, 6, a) == poi::simulate_marginal(params, 6, b));

  params.w.assign(6, 0);
  RngStream c(7, 2);
  for (auto zt : poi::simulate_marginal(params, 6, c)) CHECK(zt == 0);
}

TEST_CASE("marginal simulation matches the observation mean") {
  // full reversion: z_t are iid thinned-mixed with mean p* mu
  auto params = constant_params(3.0, 0.0, 0.5, 2);
  params.c.assign(2, 3.0);
  RngStream rng(606, 0);
  const std::size_t n = 50000;
  std::vector<double> z1(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream path = rng.split(i);
    z1[i] = static_cast<double>(poi::simulate_marginal(params, 2, path)[1]);
  }
  const auto stat = testsupport::batch_mean(z1);
  CHECK(stat.within(0.5 * 3.0));
}

TEST_CASE("lift coupling") {
  SUBCASE("martingale case has unit slope and zero intercept") {
    RngStream rng(17, 4);
    const std::size_t n = 40000;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      RngStream r = rng.split(i);
      const std::int64_t theta = sample_poisson(4.0, r);
      const std::int64_t z = sample_binomial(theta, 0.5, r);
      const double next = static_cast<double>(poi::lift_step(theta, z, 1.0, 0.0, r));
      const double x = static_cast<double>(theta);
      sx += x;
      sy += next;
      sxx += x * x;
      sxy += x * next;
    }
    const double nn = static_cast<double>(n);
    const double den = sxx - sx * sx / nn;
    const double slope = (sxy - sx * sy / nn) / den;
    const double intercept = (sy - slope * sx) / nn;
    CHECK(std::fabs(slope - 1.0) < 0.02);
    CHECK(std::fabs(intercept) < 0.05);
  }

  SUBCASE("conditional law of the next state is the predictive poisson") {
    // fixed history: mu_prev = 2.6, p = 0.35, z = 3
    const double mu_prev = 2.6;
    const double p = 0.35;
    const std::int64_t z = 3;
    const double delta = 0.75;
    const double c = 0.4;
    const double mu_next = delta * (static_cast<double>(z) + (1.0 - p) * mu_prev) + c;
    RngStream rng(23, 8);
    const std::size_t n = 100000;
    std::vector<std::int64_t> draws(n);
    for (std::size_t i = 0; i < n; ++i) {
      RngStream r = rng.split(i);
      // theta_t | history = z + K, K ~ Poi((1-p) mu_prev)
      const std::int64_t theta = z + sample_poisson((1.0 - p) * mu_prev, r);
      draws[i] = poi::lift_step(theta, z, delta, c, r);
    }
    auto fit = testsupport::chi_square_gof(draws, [&](std::int64_t k) { return poisson_logpmf(k, mu_next); });
    CHECK(fit.p_value > 1e-4);
  }

  SUBCASE("serial covariance equals delta times the latent variance") {
    auto params = constant_params(2.0, 0.8, 0.5, 3);
    RngStream rng(41, 6);
    const std::size_t n = 100000;
    std::vector<double> th1(n);
    std::vector<double> th2(n);
    for (std::size_t i = 0; i < n; ++i) {
      RngStream r = rng.split(i);
      const auto path = poi::simulate_lifted(params, 3, r);
      th1[i] = static_cast<double>(path.theta[1]);
      th2[i] = static_cast<double>(path.theta[2]);
    }
    const MomentTable table = poi::moments(params, 3);
    const auto cov = testsupport::batch_cov(th1, th2);
    CHECK(cov.within(params.delta[1] * table.var_theta[1]));
  }

  SUBCASE("delta above one is refused") {
    RngStream rng(1, 1);
    CHECK_THROWS_WITH_AS(poi::lift_step(4, 1, 1.2, 0.0, rng), doctest::Contains("lift"),
                         std::domain_error);
  }
}

TEST_CASE("mgf gap") {
  const poi::MgfContext ctx{0.8, 0.3, 0.4, 2.0, 3.0};
  CHECK(poi::mgf_gap(0.0, ctx) == 0.0);

  SUBCASE("zero derivative at the origin by mean matching") {
    const double h = 1e-6;
    const double deriv = (poi::mgf_gap(h, ctx) - poi::mgf_gap(-h, ctx)) / (2.0 * h);
    CHECK(std::fabs(deriv) < 1e-7);
  }

  SUBCASE("in-region grid minimum stays above -1e-10") {
    RngStream rng(88, 0);
    for (int i = 0; i < 200; ++i) {
      poi::MgfContext c;
      c.delta = rng.next_unit();
      c.c = 2.0 * rng.next_unit();
      if (c.delta == 0.0 && c.c == 0.0) c.c = 0.1;
      c.p = 0.05 + 0.9 * rng.next_unit();
      c.mu_prev = 0.2 + 5.0 * rng.next_unit();
      c.z = static_cast<double>(sample_poisson(c.p * c.mu_prev + 0.5, rng));
      const GapScan scan = poi::scan_mgf_gap(c);
      CHECK(scan.min_gap >= -1e-10);
      CHECK_FALSE(scan.violated);
    }
  }

  SUBCASE("delta = 1.5 yields a witness") {
    poi::MgfContext c{1.5, 0.2, 0.4, 2.0, 3.0};
    const GapScan scan = poi::scan_mgf_gap(c);
    CHECK(scan.violated);
    CHECK(scan.witness_gap < -1e-6);
    CHECK(poi::mgf_gap(scan.witness_s, c) < -1e-6);
  }

  SUBCASE("delta slightly above one still caught by the extended search") {
    poi::MgfContext c{1.002, 0.0, 0.3, 1.5, 20.0};
    const GapScan scan = poi::scan_mgf_gap(c);
    CHECK(scan.violated);
  }
}

TEST_CASE("lifted paths reproduce closed-form moments at modest n") {
  poi::Params params;
  const std::size_t periods = 4;
  params.mu = 2.0;
  params.delta = {0.9, 0.6, 0.8, 0.7};
  params.p = {0.5, 0.3, 0.6, 0.4};
  params.w = {1, 1, 0, 1};
  RngStream rng(2025, 3);
  const std::size_t n = 50000;
  std::vector<std::vector<double>> theta(periods, std::vector<double>(n));
  std::vector<std::vector<double>> z(periods, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    RngStream r = rng.split(i);
    const auto path = poi::simulate_lifted(params, periods, r);
    for (std::size_t t = 0; t < periods; ++t) {
      theta[t][i] = static_cast<double>(path.theta[t]);
      z[t][i] = static_cast<double>(path.z[t]);
    }
  }
  const MomentTable table = poi::moments(params, periods);
  for (std::size_t t = 0; t < periods; ++t) {
    CHECK(testsupport::batch_mean(theta[t]).within(table.mean_theta[t]));
    CHECK(testsupport::batch_var(theta[t]).within(table.var_theta[t]));
    CHECK(testsupport::batch_mean(z[t]).within(table.mean_z[t]));
    CHECK(testsupport::batch_var(z[t]).within(table.var_z[t]));
  }
  CHECK(testsupport::batch_cov(z[0], z[1]).within(table.obs_cov(0, 1)));
  CHECK(testsupport::batch_cov(z[1], z[3]).within(table.obs_cov(1, 2)));
}
