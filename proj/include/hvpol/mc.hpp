#pragma once

#include <cstdint>
#include <vector>

#include "hvpol/epr.hpp"
#include "hvpol/exec.hpp"
#include "hvpol/philox.hpp"
#include "hvpol/profile.hpp"
#include "hvpol/shrinkage.hpp"

namespace hvpol {

/// Photon Monte Carlo settings. Samples are split over stream_count Philox
/// streams (stream s gets the s-th contiguous share), so the estimate
/// depends on (samples, seed, stream_count) and nothing else.
struct McConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  int stream_count = 16;

  void validate() const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(samples)
  std::uint64_t samples = 0;
};

/// Fraction of photons passing polarizers at 0 and alpha; estimates
/// pair_transmission_raw(alpha) / pi.
McEstimate mc_pair(const TransmissionProfileParams& p, double alpha, const McConfig& cfg,
                   Exec exec = Exec::parallel);

/// Three stages at 0, alpha, beta; estimates triple_transmission / pi.
McEstimate mc_triple(const TransmissionProfileParams& p, double alpha, double beta,
                     const McConfig& cfg, Exec exec = Exec::parallel);

/// Shared-lambda photon pairs through analyzers at alpha and beta;
/// estimates coincidence_rate.
McEstimate mc_coincidence(const TransmissionProfileParams& p, double alpha, double beta,
                          const McConfig& cfg, Exec exec = Exec::parallel,
                          PairSource source = PairSource::parallel);

/// Inverse-CDF sampler for the outgoing polarization lambda given the entry
/// polarization lambda'. Rows sit on 1025 equally spaced lambda' values; each
/// row holds a 4096-bin CDF over the window around lambda_e^-1(lambda')
/// where the kernel has mass, with linear interpolation inside bins. Between
/// rows the sampler picks a neighbour with probability given by the linear
/// weight.
class KernelSampler {
 public:
  static constexpr int kRows = 1025;
  static constexpr int kBins = 4096;

  /// Throws NumericError if a row's mass disagrees with 1 / A(lambda').
  explicit KernelSampler(const ShrinkageModel& model);

  double sample(double lambda_prime, PhiloxStream& rng) const;

 private:
  struct Row {
    double lo = 0.0;
    double width = 0.0;
    std::vector<double> cdf;  // kBins + 1 entries, cdf[0] = 0, cdf[kBins] = 1
  };
  double sample_row(const Row& row, double u) const;

  std::vector<Row> rows_;
};

/// Exact draw from the kernel by rejection against the Gaussian envelope;
/// slow, used to check the tabulated sampler.
double sample_kernel_rejection(const ShrinkageModel& model, double lambda_prime, PhiloxStream& rng);

/// Photons pass the first polarizer, shift according to the kernel, then
/// meet the second polarizer at alpha; estimates model.pair_transmission / pi.
McEstimate mc_pair_shrinkage(const ShrinkageModel& model, const KernelSampler& sampler,
                             double alpha, const McConfig& cfg, Exec exec = Exec::parallel);
McEstimate mc_pair_shrinkage(const ShrinkageModel& model, double alpha, const McConfig& cfg,
                             Exec exec = Exec::parallel);

}  // namespace hvpol
