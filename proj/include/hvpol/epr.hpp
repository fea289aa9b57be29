#pragma once

#include <functional>

#include "hvpol/exec.hpp"
#include "hvpol/profile.hpp"
#include "hvpol/quadrature.hpp"

namespace hvpol {

/// Both photons of a pair share the hidden axis lambda (parallel), or the
/// second one carries lambda + pi/2 (perpendicular).
enum class PairSource { parallel, perpendicular };

struct AnalyzerSettings {
  double a = 0.0;
  double a_prime = 0.0;
  double b = 0.0;
  double b_prime = 0.0;

  AnalyzerSettings canonical() const;
  AnalyzerSettings rotated(double offset) const;
};

using CorrelationFn = std::function<double(double, double)>;

/// Probability that both photons of a pair pass analyzers at alpha and beta.
double coincidence_rate(const TransmissionProfileParams& p, double alpha, double beta,
                        const QuadratureSpec& spec = {}, PairSource source = PairSource::parallel);

/// E(alpha, beta) with outcomes +1 (transmitted) and -1 (absorbed).
double correlation(const TransmissionProfileParams& p, double alpha, double beta,
                   const QuadratureSpec& spec = {}, PairSource source = PairSource::parallel);

/// cos(2 (alpha - beta)).
double qm_correlation(double alpha, double beta);

CorrelationFn hv_correlation(const TransmissionProfileParams& p, const QuadratureSpec& spec = {},
                             PairSource source = PairSource::parallel);

/// S = E(a,b) - E(a,b') + E(a',b) + E(a',b').
double chsh(const CorrelationFn& e, const AnalyzerSettings& s);

struct ChshScanResult {
  double max_s = 0.0;
  AnalyzerSettings argmax;
  double lattice_max = 0.0;
};

/// Maximize S over the lattice {k * step} in [0, pi) for a', b, b' with a = 0,
/// then polish the best lattice point with Nelder-Mead. Requires
/// 0 < step <= pi/8. Ties on the lattice go to the lexicographically
/// smallest (a', b, b') index triple.
ChshScanResult chsh_scan(const CorrelationFn& e, double step, Exec exec = Exec::parallel);

}  // namespace hvpol
