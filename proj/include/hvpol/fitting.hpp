#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hvpol/exec.hpp"
#include "hvpol/profile.hpp"
#include "hvpol/quadrature.hpp"

namespace hvpol {

enum class ModelKind { simple, shrinkage };

const char* model_name(ModelKind m);

struct ParamBounds {
  double lo;
  double hi;
};

/// Least-squares match of the unit-at-zero pair curve to the Malus law.
/// Parameter order: simple (a, e, c); shrinkage (a, e, c, sigma, eps_shift, eta).
struct FitProblem {
  ModelKind model = ModelKind::simple;
  MalusTarget target{};
  std::vector<double> grid;     // radians
  std::vector<double> weights;  // one per grid point
  std::vector<double> start;
  std::vector<ParamBounds> bounds;
  QuadratureSpec quad{};

  /// 0..90 deg in 1 deg steps, unit weights, the matching named preset as start.
  static FitProblem with_defaults(ModelKind model, MalusTarget target = MalusTarget{});

  void validate() const;
};

struct FitOptions {
  int starts = 20;
  std::uint64_t seed = 1;
  int max_iterations = 5000;
  double diameter_tol = 1e-8;
  double spread_tol = 1e-12;
  double start_dispersion = 0.5;  // std-dev of start jitter in fit coordinates
  Exec exec = Exec::parallel;
};

struct FitResult {
  std::vector<double> params;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  bool under_determined = false;  // fewer weighted points than parameters
  int best_start = 0;
  std::vector<double> per_point_residuals;
};

std::vector<std::string_view> parameter_names(ModelKind m);
std::vector<ParamBounds> default_bounds(ModelKind m);

/// Unit-at-zero pair transmission of the selected model at every grid angle.
std::vector<double> model_curve(const FitProblem& problem, std::span<const double> params);

/// Weighted SSE against the Malus target. Throws ConfigError when params
/// lie outside the bounds.
double objective(const FitProblem& problem, std::span<const double> params);

/// Multi-start Nelder-Mead in fit coordinates (log for a, e, c, sigma; plain
/// for eps_shift and eta). Start 0 is problem.start; the others are jittered
/// from it with Philox stream k of the seed. The lowest objective wins, ties
/// to the lower start index.
FitResult minimize(const FitProblem& problem, const FitOptions& options = {});

struct ResidualRow {
  double angle;  // radians
  double model;
  double target;
  double residual;
};

std::vector<ResidualRow> residual_report(const FitResult& result, const FitProblem& problem);

}  // namespace hvpol
