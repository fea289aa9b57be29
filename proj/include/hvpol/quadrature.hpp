#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hvpol {

/// Controls for Gauss-Legendre integration with node doubling.
struct QuadratureSpec {
  int base_nodes = 64;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_doublings = 6;

  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double est_error = 0.0;  // |I(2n) - I(n)| of the last doubling
  long nodes_used = 0;
  bool converged = false;
};

/// n-point Gauss-Legendre nodes and weights on [-1, 1], ascending.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached; safe to call concurrently.
const GaussLegendreRule& gauss_legendre(int n);

/// Pairwise (cascade) summation; the association order depends only on the size.
double pairwise_sum(std::span<const double> terms);

using Integrand = std::function<double(double)>;

/// Integrate f over [lo, hi]. Starts from spec.base_nodes and doubles until
/// two successive estimates agree within max(abs_tol, rel_tol * |value|).
/// Throws NumericError naming the abscissa if f returns NaN or inf.
IntegralResult integrate(const Integrand& f, double lo, double hi, const QuadratureSpec& spec);

/// Composite variant: the same rule is applied on every panel
/// [breaks[i], breaks[i+1]] and the doubling test is made on the total.
/// Panels of zero width are skipped; breaks must be nondecreasing.
IntegralResult integrate(const Integrand& f, std::span<const double> breaks,
                         const QuadratureSpec& spec);

/// Panel boundaries on [-pi/2, pi/2] at which integrands built from
/// p1(delta(lambda, axis)) lose smoothness: each axis and each axis +- pi/2.
std::vector<double> axis_breaks(std::span<const double> axes);

/// Like integrate() but throws NumericError if the result did not converge.
double integrate_or_throw(const Integrand& f, std::span<const double> breaks,
                          const QuadratureSpec& spec, const char* what);

}  // namespace hvpol
