#pragma once

#include <span>
#include <vector>

#include "hvpol/exec.hpp"
#include "hvpol/profile.hpp"
#include "hvpol/quadrature.hpp"

namespace hvpol {

enum class Normalization { raw, unit_at_zero, incident_density };

/// Sampled angle -> intensity table. Angles in radians, strictly increasing.
struct TransmissionCurve {
  std::vector<double> angles;
  std::vector<double> values;
  Normalization normalization = Normalization::raw;
};

/// One stage of a cascade: a transmission profile and its axis (radians).
struct Polarizer {
  ProfileFn profile;
  double axis = 0.0;
};

/// Integral over lambda in [-pi/2, pi/2] of the product of the stage
/// transmissions p_k(delta(lambda, axis_k)). Unpolarized light of uniform
/// axis density; divide by pi for the transmitted fraction.
double cascade_transmission(std::span<const Polarizer> stages, const QuadratureSpec& spec);

double pair_transmission_raw(const TransmissionProfileParams& p, double alpha,
                             const QuadratureSpec& spec = {});
double pair_transmission_raw(const ProfileFn& profile, double alpha, const QuadratureSpec& spec = {});

double pair_transmission_normalized(const TransmissionProfileParams& p, double alpha,
                                    const QuadratureSpec& spec = {});
double pair_transmission_normalized(const ProfileFn& profile, double alpha,
                                    const QuadratureSpec& spec = {});

/// Polarization density behind one polarizer when nothing shifts: p1 / (pi/2).
double simple_output_distribution(const TransmissionProfileParams& p, double lambda);

double triple_transmission(const TransmissionProfileParams& p, double alpha, double beta,
                           const QuadratureSpec& spec = {});

/// Angles (radians) from start to stop inclusive in degree steps. Exact zero
/// is produced when the degree value is zero.
std::vector<double> degree_grid(double start_deg, double stop_deg, double step_deg);

/// Evaluate fn over grid and apply the normalization. Throws ConfigError on
/// an empty or non-increasing grid, or unit_at_zero without 0 in the grid.
TransmissionCurve curve(const std::function<double(double)>& fn, std::span<const double> grid,
                        Normalization normalization, Exec exec = Exec::parallel);

}  // namespace hvpol
