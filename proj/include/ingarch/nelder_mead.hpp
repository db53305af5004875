#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ingarch {

struct NmOptions {
  int max_iterations = 2000;
  double spread_tol = 1e-9;  // stop once max f - min f over the simplex drops below
  double initial_step = 0.1;
};

struct NmResult {
  std::vector<double> x;
  double fmin = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead with the dimension-adaptive expansion/contraction/shrink
/// parameters of Gao & Han. The objective may return +inf for infeasible
/// points; those are ordered worst.
NmResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                     std::span<const double> start, const NmOptions& options = {});

}  // namespace ingarch
