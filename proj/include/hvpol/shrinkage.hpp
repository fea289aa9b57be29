#pragma once

#include <array>
#include <span>
#include <vector>

#include "hvpol/exec.hpp"
#include "hvpol/profile.hpp"
#include "hvpol/quadrature.hpp"

namespace hvpol {

/// Parameters of the polarization-shift kernel: Gaussian concentration
/// sigma (rad^-2), shift rate eps_shift (rad^-1) and watershed angle eta.
class ShrinkageParams {
 public:
  ShrinkageParams(double sigma, double eps_shift, double eta);

  double sigma() const { return sigma_; }
  double eps_shift() const { return eps_shift_; }
  double eta() const { return eta_; }

  friend bool operator==(const ShrinkageParams&, const ShrinkageParams&) = default;

 private:
  double sigma_, eps_shift_, eta_;
};

/// Shifted polarization. Below eta it moves toward the axis, above eta
/// toward the perpendicular; odd in lambda; fixes 0 and +-pi/2. The input is
/// canonicalized first.
double lambda_e(double lambda, const ShrinkageParams& s);

/// Same map, but a lambda already in [-pi/2, pi/2] is used as given, so
/// -pi/2 stays the lower end instead of folding onto +pi/2.
double lambda_e_interval(double lambda, const ShrinkageParams& s);

enum class TotalsConvention { raw, over_pi, over_half_pi };

inline constexpr std::array<TotalsConvention, 3> kAllConventions = {
    TotalsConvention::raw, TotalsConvention::over_pi, TotalsConvention::over_half_pi};

double convention_factor(TotalsConvention c);
const char* convention_name(TotalsConvention c);

struct TotalRatios {
  double i1_over_i0 = 0.0;
  double i2_over_i0 = 0.0;
};

struct OutputDistribution {
  std::vector<double> grid;
  std::vector<double> densities;
};

/// The shift model for one (profile, shrinkage) pair.
///
/// Construction tabulates the kernel normalization A(lambda') on equally
/// spaced points of [-pi/2, pi/2] by direct quadrature: 721 points, refined by
/// an integer factor when the kernel is narrow (spacing <= width/25); between nodes A is
/// taken from the local 6-point Lagrange quintic. After construction the model
/// is immutable and all members may be called concurrently.
class ShrinkageModel {
 public:
  static constexpr int kMinNormalizationNodes = 721;

  ShrinkageModel(const TransmissionProfileParams& profile, const ShrinkageParams& shrink,
                 const QuadratureSpec& spec = {});

  const TransmissionProfileParams& profile() const { return profile_; }
  const ShrinkageParams& shrinkage() const { return shrink_; }
  const QuadratureSpec& spec() const { return spec_; }

  /// A(lambda') from the cached table.
  int normalization_nodes() const { return static_cast<int>(norm_table_.size()); }
  double normalization(double lambda_prime) const;
  /// A(lambda') = 1 / integral of exp(-sigma (lambda' - lambda_e(lambda))^2) d lambda.
  double normalization_direct(double lambda_prime) const;

  /// c(lambda, lambda'): density of leaving with lambda given entry at lambda'.
  double kernel(double lambda, double lambda_prime) const;

  /// Integral over lambda in [lo, hi] of kernel(lambda, lambda_prime).
  double kernel_mass(double lambda_prime, double lo = -kHalfPi, double hi = kHalfPi) const;

  /// Root of lambda_e(x) = u on [-pi/2, pi/2] by bisection.
  double inverse_lambda_e(double u) const;

  /// d(lambda) = integral of p1(|lambda'|) c(lambda, lambda') d lambda'.
  double output_distribution(double lambda) const;
  OutputDistribution output_distribution(std::span<const double> grid,
                                         Exec exec = Exec::parallel) const;

  /// Integral of d(lambda) p1(delta(lambda, alpha)) d lambda.
  double pair_transmission(double alpha) const;

  TotalRatios total_ratios(TotalsConvention convention = TotalsConvention::over_pi) const;

 private:
  std::vector<double> lambda_breaks() const;
  std::vector<double> peak_breaks(double center, std::vector<double> breaks) const;

  TransmissionProfileParams profile_;
  ShrinkageParams shrink_;
  QuadratureSpec spec_;
  double node_step_;
  std::vector<double> norm_table_;
};

/// Fast discretization of the shift model for repeated curve evaluation
/// (fitting). One composite Gauss-Legendre node set on [-pi/2, pi/2], split
/// at 0 and +-eta into panels no wider than min(0.2, 6 / sqrt(2 sigma)),
/// carries both integration variables. A is normalized against that same
/// node set, so the discrete kernel integrates to one exactly. Between nodes
/// d(lambda) is the panel's barycentric Lagrange interpolant.
class ShrinkageGrid {
 public:
  ShrinkageGrid(const TransmissionProfileParams& profile, const ShrinkageParams& shrink,
                int nodes_per_panel = 16);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> density() const { return density_; }

  double density_at(double lambda) const;

  /// Integral of d(lambda) p1(delta(lambda, alpha)) with the panels further
  /// split at alpha and alpha +- pi/2.
  double pair_transmission(double alpha) const;

 private:
  TransmissionProfileParams profile_;
  ShrinkageParams shrink_;
  int nodes_per_panel_;
  std::vector<double> edges_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> density_;
  std::vector<double> bary_;
  std::vector<double> ref_nodes_;
};

}  // namespace hvpol
