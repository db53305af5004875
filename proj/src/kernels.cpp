#include "ingarch/kernels.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace ingarch {

namespace {

[[noreturn]] void fail(const char* fmt, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  throw std::domain_error(buf);
}

constexpr double kLanczosG = 4.7421875;  // 607/128
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4,
    0.15808870322491248884e-3,  -0.21026444172410488319e-3,
    0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4,
    0.36899182659531622704e-5};

double lanczos_log_gamma(double x) {
  double acc = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    acc += kLanczos[i] / (x - 1.0 + static_cast<double>(i));
  }
  const double t = x + kLanczosG - 0.5;
  return 0.5 * std::log(2.0 * M_PI) + (x - 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) fail("log_gamma: x = %g outside (0, inf)", x);
  if (x < 0.5) {
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return std::log(M_PI / std::sin(M_PI * x)) - lanczos_log_gamma(1.0 - x);
  }
  return lanczos_log_gamma(x);
}

double log_factorial(std::int64_t k) {
  if (k < 0) fail("log_factorial: negative k = %g", static_cast<double>(k));
  static const std::array<double, 257> table = [] {
    std::array<double, 257> t{};
    t[0] = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = lanczos_log_gamma(static_cast<double>(i) + 1.0);
    return t;
  }();
  if (k < static_cast<std::int64_t>(table.size())) return table[static_cast<std::size_t>(k)];
  return log_gamma(static_cast<double>(k) + 1.0);
}

double poisson_logpmf(std::int64_t k, double mean) {
  if (!(mean > 0.0) || !std::isfinite(mean)) fail("poisson_logpmf: mean = %g outside (0, inf)", mean);
  if (k < 0) fail("poisson_logpmf: negative count %g", static_cast<double>(k));
  return static_cast<double>(k) * std::log(mean) - mean - log_factorial(k);
}

double binomial_logpmf(std::int64_t k, std::int64_t n, double p) {
  if (n < 0 || k < 0 || k > n) fail("binomial_logpmf: invalid k = %g, n = %g", static_cast<double>(k), static_cast<double>(n));
  if (!(p >= 0.0 && p <= 1.0)) fail("binomial_logpmf: p = %g outside [0, 1]", p);
  const double inf = std::numeric_limits<double>::infinity();
  if (p == 0.0) return k == 0 ? 0.0 : -inf;
  if (p == 1.0) return k == n ? 0.0 : -inf;
  const double log_choose = log_factorial(n) - log_factorial(k) - log_factorial(n - k);
  return log_choose + static_cast<double>(k) * std::log(p) + static_cast<double>(n - k) * std::log1p(-p);
}

double nb_logpmf(std::int64_t k, double kappa, double pi) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) fail("nb_logpmf: kappa = %g outside (0, inf)", kappa);
  if (!(pi > 0.0 && pi < 1.0)) fail("nb_logpmf: pi = %g outside (0, 1)", pi);
  if (k < 0) fail("nb_logpmf: negative count %g", static_cast<double>(k));
  return log_gamma(static_cast<double>(k) + kappa) - log_gamma(kappa) - log_factorial(k) +
         kappa * std::log1p(-pi) + static_cast<double>(k) * std::log(pi);
}

std::int64_t sample_poisson(double mean, RngStream& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) fail("sample_poisson: mean = %g", mean);
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    // Knuth inversion: count uniforms until their product drops below e^-mean.
    const double limit = std::exp(-mean);
    double prod = rng.next_open();
    std::int64_t k = 0;
    while (prod > limit) {
      prod *= rng.next_open();
      ++k;
    }
    return k;
  }
  // Hormann's transformed rejection (PTRS).
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    const double u = rng.next_unit() - 0.5;
    const double v = rng.next_unit();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const std::int64_t k = static_cast<std::int64_t>(kf);
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    if (lhs <= kf * log_mean - mean - log_factorial(k)) return k;
  }
}

std::int64_t sample_binomial(std::int64_t n, double p, RngStream& rng) {
  if (n < 0) fail("sample_binomial: n = %g", static_cast<double>(n));
  if (!(p >= 0.0 && p <= 1.0)) fail("sample_binomial: p = %g outside [0, 1]", p);
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  // Sums of independent halves keep the inversion pmf recurrence in range.
  if (n > 256) return sample_binomial(n / 2, p, rng) + sample_binomial(n - n / 2, p, rng);
  if (p > 0.5) return n - sample_binomial(n, 1.0 - p, rng);
  const double q = 1.0 - p;
  const double ratio = p / q;
  double f = std::pow(q, static_cast<double>(n));
  double u = rng.next_unit();
  std::int64_t k = 0;
  while (u >= f && k < n) {
    u -= f;
    ++k;
    f *= ratio * static_cast<double>(n - k + 1) / static_cast<double>(k);
  }
  return k;
}

std::int64_t sample_nb(double kappa, double pi, RngStream& rng) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) fail("sample_nb: kappa = %g", kappa);
  if (!(pi > 0.0 && pi < 1.0)) fail("sample_nb: pi = %g outside (0, 1)", pi);
  const double theta = sample_gamma(kappa, (1.0 - pi) / pi, rng);
  return sample_poisson(theta, rng);
}

double sample_normal(RngStream& rng) {
  const double u1 = rng.next_open();
  const double u2 = rng.next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double sample_gamma(double shape, double rate, RngStream& rng) {
  if (!(shape >= 0.0) || !std::isfinite(shape)) fail("sample_gamma: shape = %g", shape);
  if (!(rate > 0.0) || !std::isfinite(rate)) fail("sample_gamma: rate = %g", rate);
  if (shape == 0.0) return 0.0;
  if (shape < 1.0) {
    const double u = rng.next_open();
    return sample_gamma(shape + 1.0, rate, rng) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = sample_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

double sample_beta(double a, double b, RngStream& rng) {
  if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) fail("sample_beta: a = %g, b = %g", a, b);
  if (a == 0.0 && b == 0.0) fail("sample_beta: both shapes zero", a, b);
  if (a == 0.0) return 0.0;
  if (b == 0.0) return 1.0;
  const double x = sample_gamma(a, 1.0, rng);
  const double y = sample_gamma(b, 1.0, rng);
  const double s = x + y;
  if (s == 0.0) return a / (a + b);  // double underflow at extreme shapes
  return x / s;
}

}  // namespace ingarch
