#include "hvpol/mc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hvpol/error.hpp"
#include "parallel_for.hpp"

namespace hvpol {

void McConfig::validate() const {
  if (samples < 1) throw ConfigError("mc: samples must be >= 1");
  if (stream_count < 1) throw ConfigError("mc: stream_count must be >= 1");
}

namespace {

// Runs `photon(rng)` samples times split over the configured streams and
// returns the Bernoulli estimate. Counts are integers, so the merge is
// exact and independent of scheduling.
template <class Photon>
McEstimate run_photons(const McConfig& cfg, Exec exec, Photon&& photon) {
  cfg.validate();
  const auto streams = static_cast<std::uint64_t>(cfg.stream_count);
  std::vector<std::uint64_t> passed(streams, 0);
  detail::parallel_for(static_cast<std::ptrdiff_t>(streams), exec, [&](std::ptrdiff_t s) {
    const auto us = static_cast<std::uint64_t>(s);
    const std::uint64_t n = cfg.samples / streams + (us < cfg.samples % streams ? 1 : 0);
    PhiloxStream rng(cfg.seed, us);
    std::uint64_t k = 0;
    for (std::uint64_t i = 0; i < n; ++i) k += photon(rng) ? 1 : 0;
    passed[us] = k;
  });
  std::uint64_t k = 0;
  for (auto v : passed) k += v;

  McEstimate est;
  est.samples = cfg.samples;
  const auto n = static_cast<double>(cfg.samples);
  est.mean = static_cast<double>(k) / n;
  if (cfg.samples > 1) {
    const double var = static_cast<double>(k) * static_cast<double>(cfg.samples - k) / (n * (n - 1.0));
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

// Uniform hidden axis on (-pi/2, pi/2].
inline double draw_axis(PhiloxStream& rng) { return kHalfPi - kPi * rng.uniform(); }

inline bool passes(double lambda, double axis, const TransmissionProfileParams& p,
                   PhiloxStream& rng) {
  return rng.uniform() < p1(angular_distance(lambda, axis), p);
}

struct Window {
  double lo, hi;
};

// Interval of lambda outside which exp(-sigma (lambda' - lambda_e)^2) < e^-50.
Window kernel_window(const ShrinkageModel& model, double lambda_prime, bool monotone) {
  if (!monotone) return {-kHalfPi, kHalfPi};
  const double reach = std::sqrt(50.0 / model.shrinkage().sigma());
  return {model.inverse_lambda_e(lambda_prime - reach), model.inverse_lambda_e(lambda_prime + reach)};
}

bool shift_is_monotone(const ShrinkageParams& s) {
  double prev = -INFINITY;
  for (int i = 0; i <= 4000; ++i) {
    const double x = -kHalfPi + kPi * i / 4000.0;
    const double v = lambda_e_interval(x, s);
    if (v < prev) return false;
    prev = v;
  }
  return true;
}

}  // namespace

McEstimate mc_pair(const TransmissionProfileParams& p, double alpha, const McConfig& cfg,
                   Exec exec) {
  return run_photons(cfg, exec, [&](PhiloxStream& rng) {
    const double lambda = draw_axis(rng);
    return passes(lambda, 0.0, p, rng) && passes(lambda, alpha, p, rng);
  });
}

McEstimate mc_triple(const TransmissionProfileParams& p, double alpha, double beta,
                     const McConfig& cfg, Exec exec) {
  return run_photons(cfg, exec, [&](PhiloxStream& rng) {
    const double lambda = draw_axis(rng);
    return passes(lambda, 0.0, p, rng) && passes(lambda, alpha, p, rng) &&
           passes(lambda, beta, p, rng);
  });
}

McEstimate mc_coincidence(const TransmissionProfileParams& p, double alpha, double beta,
                          const McConfig& cfg, Exec exec, PairSource source) {
  const double shift = source == PairSource::perpendicular ? kHalfPi : 0.0;
  return run_photons(cfg, exec, [&](PhiloxStream& rng) {
    const double lambda = draw_axis(rng);
    // Both transmissions are drawn so each pair consumes the same randomness.
    const bool first = passes(lambda, alpha, p, rng);
    const bool second = passes(lambda + shift, beta, p, rng);
    return first && second;
  });
}

KernelSampler::KernelSampler(const ShrinkageModel& model) : rows_(kRows) {
  const double sigma = model.shrinkage().sigma();
  const bool monotone = shift_is_monotone(model.shrinkage());
  // Three-point Gauss rule per bin.
  static constexpr double kGx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr double kGw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  for (int r = 0; r < kRows; ++r) {
    const double lp = r + 1 == kRows ? kHalfPi : -kHalfPi + kPi * r / (kRows - 1);
    const Window win = kernel_window(model, lp, monotone);
    Row& row = rows_[r];
    row.lo = win.lo;
    row.width = (win.hi - win.lo) / kBins;
    row.cdf.assign(kBins + 1, 0.0);
    double mass = 0.0;
    for (int b = 0; b < kBins; ++b) {
      const double mid = row.lo + (b + 0.5) * row.width;
      double m = 0.0;
      for (int q = 0; q < 3; ++q) {
        const double x = lp - lambda_e_interval(mid + 0.5 * row.width * kGx[q], model.shrinkage());
        m += kGw[q] * std::exp(-sigma * x * x);
      }
      mass += 0.5 * row.width * m;
      row.cdf[b + 1] = mass;
    }
    const double check = mass * model.normalization_direct(lp);
    if (!(std::fabs(check - 1.0) <= 1e-6)) {
      std::ostringstream msg;
      msg << "kernel table: row " << r << " (lambda' = " << lp << ") integrates to " << check;
      throw NumericError(msg.str());
    }
    for (double& c : row.cdf) c /= mass;
    row.cdf.back() = 1.0;
  }
}

double KernelSampler::sample_row(const Row& row, double u) const {
  const auto it = std::upper_bound(row.cdf.begin(), row.cdf.end(), u);
  const auto b = std::clamp<std::ptrdiff_t>(it - row.cdf.begin() - 1, 0, kBins - 1);
  const double c0 = row.cdf[b], c1 = row.cdf[b + 1];
  const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
  return row.lo + (static_cast<double>(b) + frac) * row.width;
}

double KernelSampler::sample(double lambda_prime, PhiloxStream& rng) const {
  const double t = (std::clamp(lambda_prime, -kHalfPi, kHalfPi) + kHalfPi) / (kPi / (kRows - 1));
  auto r = std::min(static_cast<int>(t), kRows - 1);
  if (r < kRows - 1 && rng.uniform() < t - r) ++r;
  return sample_row(rows_[r], rng.uniform());
}

double sample_kernel_rejection(const ShrinkageModel& model, double lambda_prime,
                               PhiloxStream& rng) {
  const Window win = kernel_window(model, lambda_prime, shift_is_monotone(model.shrinkage()));
  const double sigma = model.shrinkage().sigma();
  for (;;) {
    const double lambda = win.lo + (win.hi - win.lo) * rng.uniform();
    const double x = lambda_prime - lambda_e_interval(lambda, model.shrinkage());
    if (rng.uniform() < std::exp(-sigma * x * x)) return lambda;
  }
}

McEstimate mc_pair_shrinkage(const ShrinkageModel& model, const KernelSampler& sampler,
                             double alpha, const McConfig& cfg, Exec exec) {
  const auto& p = model.profile();
  return run_photons(cfg, exec, [&](PhiloxStream& rng) {
    const double entry = draw_axis(rng);
    if (!passes(entry, 0.0, p, rng)) return false;
    const double exit = sampler.sample(entry, rng);
    return passes(exit, alpha, p, rng);
  });
}

McEstimate mc_pair_shrinkage(const ShrinkageModel& model, double alpha, const McConfig& cfg,
                             Exec exec) {
  const KernelSampler sampler(model);
  return mc_pair_shrinkage(model, sampler, alpha, cfg, exec);
}

}  // namespace hvpol
