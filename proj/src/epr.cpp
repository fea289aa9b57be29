#include "hvpol/epr.hpp"

#include <cmath>
#include <vector>

#include "hvpol/cascade.hpp"
#include "hvpol/error.hpp"
#include "hvpol/optimize.hpp"
#include "parallel_for.hpp"

namespace hvpol {

namespace {

// The second photon's analyzer sees lambda + pi/2 for a perpendicular
// source, equivalent to turning that analyzer by -pi/2.
double effective_axis(double beta, PairSource source) {
  return source == PairSource::perpendicular ? beta - kHalfPi : beta;
}

}  // namespace

AnalyzerSettings AnalyzerSettings::canonical() const {
  return {canonical_angle(a), canonical_angle(a_prime), canonical_angle(b),
          canonical_angle(b_prime)};
}

AnalyzerSettings AnalyzerSettings::rotated(double offset) const {
  return {a + offset, a_prime + offset, b + offset, b_prime + offset};
}

double coincidence_rate(const TransmissionProfileParams& p, double alpha, double beta,
                        const QuadratureSpec& spec, PairSource source) {
  const ProfileFn f = profile_fn(p);
  const Polarizer stages[] = {{f, alpha}, {f, effective_axis(beta, source)}};
  return cascade_transmission(stages, spec) / kPi;
}

double correlation(const TransmissionProfileParams& p, double alpha, double beta,
                   const QuadratureSpec& spec, PairSource source) {
  const double b = effective_axis(beta, source);
  const auto breaks = axis_breaks(std::vector<double>{alpha, b});
  auto f = [&](double lambda) {
    return (2.0 * p1(angular_distance(lambda, alpha), p) - 1.0) *
           (2.0 * p1(angular_distance(lambda, b), p) - 1.0);
  };
  return integrate_or_throw(f, breaks, spec, "correlation") / kPi;
}

double qm_correlation(double alpha, double beta) { return std::cos(2.0 * (alpha - beta)); }

CorrelationFn hv_correlation(const TransmissionProfileParams& p, const QuadratureSpec& spec,
                             PairSource source) {
  return [p, spec, source](double alpha, double beta) {
    return correlation(p, alpha, beta, spec, source);
  };
}

double chsh(const CorrelationFn& e, const AnalyzerSettings& s) {
  return e(s.a, s.b) - e(s.a, s.b_prime) + e(s.a_prime, s.b) + e(s.a_prime, s.b_prime);
}

ChshScanResult chsh_scan(const CorrelationFn& e, double step, Exec exec) {
  if (!(step > 0.0 && step <= kPi / 8.0 + 1e-15))
    throw DomainError("chsh_scan: step must lie in (0, pi/8]");
  const auto n = static_cast<std::ptrdiff_t>(std::ceil(kPi / step - 1e-9));
  std::vector<double> angle(static_cast<std::size_t>(n));
  for (std::ptrdiff_t i = 0; i < n; ++i) angle[i] = static_cast<double>(i) * step;

  std::vector<double> table(static_cast<std::size_t>(n * n));
  detail::parallel_for(n, exec, [&](std::ptrdiff_t i) {
    for (std::ptrdiff_t j = 0; j < n; ++j) table[i * n + j] = e(angle[i], angle[j]);
  });
  auto E = [&](std::ptrdiff_t i, std::ptrdiff_t j) { return table[i * n + j]; };

  struct Best {
    double s = -INFINITY;
    std::ptrdiff_t i = 0, j = 0, k = 0;
  };
  std::vector<Best> row_best(static_cast<std::size_t>(n));
  detail::parallel_for(n, exec, [&](std::ptrdiff_t i) {
    Best b;
    for (std::ptrdiff_t j = 0; j < n; ++j)
      for (std::ptrdiff_t k = 0; k < n; ++k) {
        const double s = E(0, j) - E(0, k) + E(i, j) + E(i, k);
        if (s > b.s) b = {s, i, j, k};
      }
    row_best[i] = b;
  });
  Best best = row_best[0];
  for (const Best& b : row_best)
    if (b.s > best.s) best = b;

  ChshScanResult out;
  out.lattice_max = best.s;
  out.max_s = best.s;
  out.argmax = {0.0, angle[best.i], angle[best.j], angle[best.k]};

  const double x0[] = {angle[best.i], angle[best.j], angle[best.k]};
  const double steps[] = {0.5 * step, 0.5 * step, 0.5 * step};
  const double lo[] = {x0[0] - step, x0[1] - step, x0[2] - step};
  const double hi[] = {x0[0] + step, x0[1] + step, x0[2] + step};
  SimplexOptions opts;
  opts.max_iterations = 400;
  opts.diameter_tol = 1e-10;
  opts.spread_tol = 1e-15;
  const auto polished = nelder_mead(
      [&](std::span<const double> x) { return -chsh(e, {0.0, x[0], x[1], x[2]}); }, x0, steps, lo,
      hi, opts);
  if (-polished.value > out.max_s) {
    out.max_s = -polished.value;
    out.argmax = {0.0, polished.x[0], polished.x[1], polished.x[2]};
  }
  out.argmax = out.argmax.canonical();
  return out;
}

}  // namespace hvpol
