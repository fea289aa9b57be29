#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hvpol {

struct SimplexOptions {
  int max_iterations = 5000;
  double diameter_tol = 1e-8;  // max distance of any vertex from the best one
  double spread_tol = 1e-12;   // f(worst) - f(best)
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead downhill simplex (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2) inside the box [lo, hi]; trial points are clamped to the box.
/// The initial simplex is x0 plus steps[i] along each axis (reflected inward
/// if that leaves the box). Non-finite objective values count as +inf.
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> x0, std::span<const double> steps,
                          std::span<const double> lo, std::span<const double> hi,
                          const SimplexOptions& opts = {});

}  // namespace hvpol
