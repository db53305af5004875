#include "ingarch/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ingarch {

NmResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                     std::span<const double> start, const NmOptions& options) {
  const std::size_t dim = start.size();
  if (dim == 0) throw std::invalid_argument("nelder_mead: empty start point");
  const double n = static_cast<double>(dim);
  const double alpha = 1.0;                    // reflection
  const double beta = 1.0 + 2.0 / n;           // expansion
  const double gamma = 0.75 - 1.0 / (2.0 * n); // contraction
  const double sigma = 1.0 - 1.0 / n;          // shrink

  NmResult result;
  std::vector<std::vector<double>> simplex(dim + 1, std::vector<double>(start.begin(), start.end()));
  for (std::size_t i = 0; i < dim; ++i)
    simplex[i + 1][i] += options.initial_step * std::max(1.0, std::fabs(start[i]));
  std::vector<double> fvals(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) {
    fvals[i] = objective(simplex[i]);
    ++result.evaluations;
  }
  std::vector<std::size_t> order(dim + 1);

  std::vector<double> centroid(dim);
  std::vector<double> candidate(dim);
  std::vector<double> expanded(dim);

  for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
    const std::size_t best = order[0];
    const std::size_t worst = order[dim];
    const std::size_t second_worst = order[dim - 1];

    const double spread = fvals[worst] - fvals[best];
    if (std::isfinite(fvals[best]) && (spread < options.spread_tol)) {
      result.converged = true;
      break;
    }

    for (std::size_t j = 0; j < dim; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i <= dim; ++i)
        if (i != worst) s += simplex[i][j];
      centroid[j] = s / n;
    }

    auto blend = [&](std::vector<double>& out, double coef) {
      for (std::size_t j = 0; j < dim; ++j)
        out[j] = centroid[j] + coef * (centroid[j] - simplex[worst][j]);
    };

    blend(candidate, alpha);
    const double f_reflect = objective(candidate);
    ++result.evaluations;

    if (f_reflect < fvals[order[0]]) {
      blend(expanded, alpha * beta);
      const double f_expand = objective(expanded);
      ++result.evaluations;
      if (f_expand < f_reflect) {
        simplex[worst] = expanded;
        fvals[worst] = f_expand;
      } else {
        simplex[worst] = candidate;
        fvals[worst] = f_reflect;
      }
      continue;
    }
    if (f_reflect < fvals[second_worst]) {
      simplex[worst] = candidate;
      fvals[worst] = f_reflect;
      continue;
    }
    if (f_reflect < fvals[worst]) {
      blend(candidate, alpha * gamma);  // outside contraction
      const double f_out = objective(candidate);
      ++result.evaluations;
      if (f_out <= f_reflect) {
        simplex[worst] = candidate;
        fvals[worst] = f_out;
        continue;
      }
    } else {
      blend(candidate, -gamma);  // inside contraction
      const double f_in = objective(candidate);
      ++result.evaluations;
      if (f_in < fvals[worst]) {
        simplex[worst] = candidate;
        fvals[worst] = f_in;
        continue;
      }
    }
    // shrink toward the best vertex
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < dim; ++j)
        simplex[i][j] = simplex[best][j] + sigma * (simplex[i][j] - simplex[best][j]);
      fvals[i] = objective(simplex[i]);
      ++result.evaluations;
    }
  }

  const std::size_t best = static_cast<std::size_t>(
      std::min_element(fvals.begin(), fvals.end()) - fvals.begin());
  result.x = simplex[best];
  result.fmin = fvals[best];
  return result;
}

}  // namespace ingarch
