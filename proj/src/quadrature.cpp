#include "hvpol/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "hvpol/angle.hpp"
#include "hvpol/error.hpp"

namespace hvpol {

void QuadratureSpec::validate() const {
  if (base_nodes < 16) throw ConfigError("quadrature base_nodes must be >= 16");
  if (!(rel_tol > 0.0)) throw ConfigError("quadrature rel_tol must be > 0");
  if (!(abs_tol > 0.0)) throw ConfigError("quadrature abs_tol must be > 0");
  if (max_doublings < 1) throw ConfigError("quadrature max_doublings must be >= 1");
  if (max_doublings > 16) throw ConfigError("quadrature max_doublings must be <= 16");
}

namespace {

GaussLegendreRule compute_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double pairwise_range(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_range(x, h) + pairwise_range(x + h, n - h);
}

double fixed_rule(const Integrand& f, std::span<const double> breaks, int n, long& evals) {
  const GaussLegendreRule& rule = gauss_legendre(n);
  // Local buffer: integrands may themselves integrate (nested quadrature).
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n) * (breaks.size() - 1));
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p], hi = breaks[p + 1];
    if (!(hi > lo)) continue;
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int i = 0; i < n; ++i) {
      const double x = mid + half * rule.nodes[i];
      const double y = f(x);
      if (!std::isfinite(y)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "integrand returned " << y << " at x = " << x;
        throw NumericError(msg.str());
      }
      terms.push_back(half * rule.weights[i] * y);
    }
    evals += n;
  }
  return pairwise_range(terms.data(), terms.size());
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(compute_rule(n));
  return *slot;
}

double pairwise_sum(std::span<const double> terms) {
  return pairwise_range(terms.data(), terms.size());
}

IntegralResult integrate(const Integrand& f, double lo, double hi, const QuadratureSpec& spec) {
  if (!(lo < hi)) throw DomainError("integrate: need lo < hi");
  const double breaks[2] = {lo, hi};
  return integrate(f, breaks, spec);
}

IntegralResult integrate(const Integrand& f, std::span<const double> breaks,
                         const QuadratureSpec& spec) {
  spec.validate();
  if (breaks.size() < 2) throw DomainError("integrate: need at least two break points");
  if (!std::is_sorted(breaks.begin(), breaks.end()) || !(breaks.back() > breaks.front()))
    throw DomainError("integrate: break points must be nondecreasing with lo < hi");

  IntegralResult r;
  int n = spec.base_nodes;
  double prev = fixed_rule(f, breaks, n, r.nodes_used);
  for (int k = 0; k < spec.max_doublings; ++k) {
    n *= 2;
    const double cur = fixed_rule(f, breaks, n, r.nodes_used);
    r.value = cur;
    r.est_error = std::fabs(cur - prev);
    if (r.est_error <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(cur))) {
      r.converged = true;
      return r;
    }
    prev = cur;
  }
  return r;
}

std::vector<double> axis_breaks(std::span<const double> axes) {
  std::vector<double> out{-kHalfPi, kHalfPi};
  for (double axis : axes) {
    const double a = canonical_angle(axis);
    for (double x : {a - kHalfPi, a, a + kHalfPi})
      if (x > -kHalfPi && x < kHalfPi) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double integrate_or_throw(const Integrand& f, std::span<const double> breaks,
                          const QuadratureSpec& spec, const char* what) {
  const IntegralResult r = integrate(f, breaks, spec);
  if (!r.converged) {
    std::ostringstream msg;
    msg.precision(6);
    msg << what << ": quadrature did not converge (est_error " << r.est_error << " after "
        << r.nodes_used << " evaluations)";
    throw NumericError(msg.str());
  }
  return r.value;
}

}  // namespace hvpol
