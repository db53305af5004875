#pragma once

#include <cstdint>

#include "ingarch/rng.hpp"

namespace ingarch {

/// log Gamma(x) for x > 0 via a 15-term Lanczos approximation (g = 607/128);
/// relative error stays below 1e-13 across the positive axis.
double log_gamma(double x);

/// log k! with a cached table for small k.
double log_factorial(std::int64_t k);

double poisson_logpmf(std::int64_t k, double mean);
double binomial_logpmf(std::int64_t k, std::int64_t n, double p);

/// log P(Z = k) for Z ~ NB(kappa, pi) with
/// pmf = Gamma(k+kappa)/(Gamma(kappa) k!) (1-pi)^kappa pi^k; mean is
/// kappa pi / (1 - pi).
double nb_logpmf(std::int64_t k, double kappa, double pi);

// Samplers. Boundary parameters follow the mass-at-limit conventions:
// Poisson(0) == 0, Gamma(shape 0) == 0, Beta(0, b) == 0, Beta(a, 0) == 1,
// Binomial(n, 0) == 0 and Binomial(n, 1) == n.
std::int64_t sample_poisson(double mean, RngStream& rng);
std::int64_t sample_binomial(std::int64_t n, double p, RngStream& rng);
std::int64_t sample_nb(double kappa, double pi, RngStream& rng);
double sample_gamma(double shape, double rate, RngStream& rng);
double sample_beta(double a, double b, RngStream& rng);
double sample_normal(RngStream& rng);

}  // namespace ingarch
