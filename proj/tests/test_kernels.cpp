#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <gmp.h>
#include <mpfr.h>
#include <vector>

#include "ingarch/kernels.hpp"
#include "ingarch/rng.hpp"
#include "support.hpp"

using namespace ingarch;

namespace {

// Arbitrary-precision oracle for log Gamma, 256-bit mantissa.
double mpfr_log_gamma(double x) {
  mpfr_t v;
  mpfr_init2(v, 256);
  mpfr_set_d(v, x, MPFR_RNDN);
  mpfr_lngamma(v, v, MPFR_RNDN);
  const double out = mpfr_get_d(v, MPFR_RNDN);
  mpfr_clear(v);
  return out;
}

// Arbitrary-precision oracle for log(e^-mean mean^k / k!).
double mpfr_poisson_logpmf(long k, double mean) {
  mpfr_t acc, tmp;
  mpfr_init2(acc, 256);
  mpfr_init2(tmp, 256);
  mpfr_set_d(acc, mean, MPFR_RNDN);
  mpfr_log(acc, acc, MPFR_RNDN);
  mpfr_mul_si(acc, acc, k, MPFR_RNDN);
  mpfr_sub_d(acc, acc, mean, MPFR_RNDN);
  mpfr_set_si(tmp, k + 1, MPFR_RNDN);
  mpfr_lngamma(tmp, tmp, MPFR_RNDN);
  mpfr_sub(acc, acc, tmp, MPFR_RNDN);
  const double out = mpfr_get_d(acc, MPFR_RNDN);
  mpfr_clear(acc);
  mpfr_clear(tmp);
  return out;
}

}  // namespace

TEST_CASE("log_gamma matches the arbitrary-precision oracle to 1e-13") {
  std::vector<double> grid;
  for (double x = 0.001; x < 0.5; x += 0.013) grid.push_back(x);
  for (int i = 0; i <= 400; ++i) grid.push_back(0.5 + i * 0.25);  // up to 100.5
  for (double x : {1e3, 1e4, 1e6, 1e8, 1e12, 3.5, 7.25, 1.0, 2.0}) grid.push_back(x);
  for (double x : grid) {
    const double got = log_gamma(x);
    const double want = mpfr_log_gamma(x);
    const double tol = 1e-13 * std::max(1.0, std::fabs(want));
    CHECK(std::fabs(got - want) <= tol);
  }
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
}

TEST_CASE("poisson log-pmf") {
  CHECK(poisson_logpmf(0, 1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  // hand arithmetic: pmf(2; 2) = 2 e^-2
  CHECK(poisson_logpmf(2, 2.0) == doctest::Approx(std::log(2.0) - 2.0).epsilon(1e-14));
  CHECK(std::fabs(poisson_logpmf(5, 0.5) - mpfr_poisson_logpmf(5, 0.5)) < 1e-12);
  CHECK_THROWS_AS(poisson_logpmf(-1, 1.0), std::domain_error);
  CHECK_THROWS_AS(poisson_logpmf(2, 0.0), std::domain_error);
  CHECK_THROWS_AS(poisson_logpmf(2, std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("nb log-pmf") {
  // geometric special case: P(0) = 1 - pi
  CHECK(nb_logpmf(0, 1.0, 0.5) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(nb_logpmf(0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(nb_logpmf(0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(nb_logpmf(0, 0.0, 0.5), std::domain_error);

  SUBCASE("truncated-sum mean matches kappa pi / (1 - pi)") {
    const double kappa = 2.0;
    const double pi = 0.25;
    double mass = 0.0;
    double mean = 0.0;
    for (std::int64_t k = 0; mass < 1.0 - 1e-12; ++k) {
      const double pk = std::exp(nb_logpmf(k, kappa, pi));
      mass += pk;
      mean += static_cast<double>(k) * pk;
    }
    CHECK(mean == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  }

  SUBCASE("pi -> 0 puts all mass at zero") {
    CHECK(std::exp(nb_logpmf(0, 3.0, 1e-13)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::exp(nb_logpmf(1, 3.0, 1e-13)) < 1e-9);
  }
}

TEST_CASE("pmf normalization over truncated support") {
  auto total = [](const std::function<double(std::int64_t)>& lp) {
    double mass = 0.0;
    for (std::int64_t k = 0; mass < 1.0 - 1e-12 && k < 100000; ++k) mass += std::exp(lp(k));
    return mass;
  };
  CHECK(total([](std::int64_t k) { return poisson_logpmf(k, 7.3); }) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(total([](std::int64_t k) { return nb_logpmf(k, 2.5, 0.6); }) == doctest::Approx(1.0).epsilon(1e-9));
  double mass = 0.0;
  for (std::int64_t k = 0; k <= 40; ++k) mass += std::exp(binomial_logpmf(k, 40, 0.3));
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rng streams are reproducible and split cleanly") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  RngStream c(42, 8);
  CHECK(c.next_u64() != RngStream(42, 7).next_u64());
  RngStream s1 = RngStream(42, 7).split(3);
  RngStream s2 = RngStream(42, 7).split(3);
  CHECK(s1.next_u64() == s2.next_u64());
  RngStream u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.next_unit();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("sampler conventions at boundary parameters") {
  RngStream rng(5, 0);
  for (int i = 0; i < 20; ++i) CHECK(sample_binomial(0, 0.3, rng) == 0);
  for (int i = 0; i < 20; ++i) CHECK(sample_binomial(9, 0.0, rng) == 0);
  for (int i = 0; i < 20; ++i) CHECK(sample_binomial(9, 1.0, rng) == 9);
  CHECK(sample_gamma(0.0, 2.0, rng) == 0.0);
  CHECK(sample_poisson(0.0, rng) == 0);
  CHECK(sample_beta(0.0, 2.0, rng) == 0.0);
  CHECK(sample_beta(2.0, 0.0, rng) == 1.0);
  CHECK_THROWS_AS(sample_beta(0.0, 0.0, rng), std::domain_error);
  CHECK_THROWS_AS(sample_gamma(-1.0, 1.0, rng), std::domain_error);
  CHECK_THROWS_AS(sample_poisson(-0.5, rng), std::domain_error);
}

TEST_CASE("poisson sampler empirical mean within CLT bound") {
  RngStream rng(20260810, 1);
  const std::size_t n = 1000000;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += static_cast<double>(sample_poisson(3.7, rng));
  const double mean = sum / static_cast<double>(n);
  const double bound = 4.0 * std::sqrt(3.7) / std::sqrt(static_cast<double>(n));
  CHECK(std::fabs(mean - 3.7) <= bound);
}

TEST_CASE("sampler/pmf consistency via chi-square") {
  const std::size_t n = 1000000;
  auto run = [&](std::uint64_t stream, const std::function<std::int64_t(RngStream&)>& draw,
                 const std::function<double(std::int64_t)>& lp) {
    RngStream rng(911, stream);
    std::vector<std::int64_t> draws(n);
    for (auto& d : draws) d = draw(rng);
    return testsupport::chi_square_gof(draws, lp);
  };
  auto poi = run(1, [](RngStream& r) { return sample_poisson(3.7, r); },
                 [](std::int64_t k) { return poisson_logpmf(k, 3.7); });
  CHECK(poi.p_value > 1e-4);
  auto poi_big = run(2, [](RngStream& r) { return sample_poisson(48.0, r); },
                     [](std::int64_t k) { return poisson_logpmf(k, 48.0); });
  CHECK(poi_big.p_value > 1e-4);
  auto bin = run(3, [](RngStream& r) { return sample_binomial(40, 0.3, r); },
                 [](std::int64_t k) { return binomial_logpmf(k, 40, 0.3); });
  CHECK(bin.p_value > 1e-4);
  auto bin_big = run(4, [](RngStream& r) { return sample_binomial(700, 0.62, r); },
                     [](std::int64_t k) { return binomial_logpmf(k, 700, 0.62); });
  CHECK(bin_big.p_value > 1e-4);
  auto nb = run(5, [](RngStream& r) { return sample_nb(2.5, 0.4, r); },
                [](std::int64_t k) { return nb_logpmf(k, 2.5, 0.4); });
  CHECK(nb.p_value > 1e-4);
}

TEST_CASE("gamma-poisson mixture reproduces the nb pmf") {
  RngStream rng(2024, 17);
  const std::size_t n = 1000000;
  const double a = 2.0;
  const double b = 3.0;
  const double lambda = 1.5;
  std::vector<std::int64_t> draws(n);
  for (auto& d : draws) {
    const double theta = sample_gamma(a, b, rng);
    d = sample_poisson(lambda * theta, rng);
  }
  const double pi = lambda / (b + lambda);
  auto res = testsupport::chi_square_gof(draws, [&](std::int64_t k) { return nb_logpmf(k, a, pi); });
  CHECK(res.p_value > 1e-4);
}

TEST_CASE("binomial thinning of a poisson splits into independent poissons") {
  RngStream rng(77, 3);
  const std::size_t n = 1000000;
  const double mu = 5.0;
  const double p = 0.4;
  std::vector<std::int64_t> kept(n);
  std::vector<std::int64_t> rest(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t theta = sample_poisson(mu, rng);
    kept[i] = sample_binomial(theta, p, rng);
    rest[i] = theta - kept[i];
  }
  auto kept_fit = testsupport::chi_square_gof(kept, [&](std::int64_t k) { return poisson_logpmf(k, p * mu); });
  auto rest_fit = testsupport::chi_square_gof(rest, [&](std::int64_t k) { return poisson_logpmf(k, (1.0 - p) * mu); });
  CHECK(kept_fit.p_value > 1e-4);
  CHECK(rest_fit.p_value > 1e-4);
  // independence at the correlation level
  double sk = 0.0;
  double sr = 0.0;
  double skr = 0.0;
  double skk = 0.0;
  double srr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sk += static_cast<double>(kept[i]);
    sr += static_cast<double>(rest[i]);
  }
  const double mk = sk / n;
  const double mr = sr / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double dk = static_cast<double>(kept[i]) - mk;
    const double dr = static_cast<double>(rest[i]) - mr;
    skr += dk * dr;
    skk += dk * dk;
    srr += dr * dr;
  }
  const double corr = skr / std::sqrt(skk * srr);
  CHECK(std::fabs(corr) <= 4.0 / std::sqrt(static_cast<double>(n)));
}
