// Acceptance checks. Prints one PASS/FAIL line per criterion.
// Usage: hvpol_acceptance [--report FILE] [criterion ...]   (no criteria: all nine)
// With --report each result line is also appended to FILE.
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hvpol/cascade.hpp"
#include "hvpol/epr.hpp"
#include "hvpol/fitting.hpp"
#include "hvpol/mc.hpp"
#include "hvpol/presets.hpp"
#include "hvpol/shrinkage.hpp"

using namespace hvpol;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double max_dev_vs(const std::function<double(double)>& curve, const std::function<double(double)>& ref,
                  double lo_deg, double hi_deg, double* at_deg = nullptr) {
  double worst = 0.0;
  for (double deg = lo_deg; deg <= hi_deg + 1e-9; deg += 1.0) {
    const double a = deg_to_rad(deg);
    const double d = std::fabs(curve(a) - ref(a));
    if (d > worst) {
      worst = d;
      if (at_deg) *at_deg = deg;
    }
  }
  return worst;
}

double cos2(double a) { return std::cos(a) * std::cos(a); }

Outcome malus_agreement() {
  const auto p = presets::fig1_simple();
  const auto grid = degree_grid(0.0, 90.0, 1.0);
  const auto c = curve([&](double a) { return pair_transmission_raw(p, a); }, grid, Normalization::unit_at_zero);
  double worst = 0.0, at = 0.0;
  for (std::size_t i = 30; i < grid.size(); ++i) {
    const double d = std::fabs(c.values[i] - cos2(grid[i]));
    if (d > worst) worst = d, at = rad_to_deg(grid[i]);
  }
  return {worst <= 0.05, fmt::format("max |p2_norm - cos^2| on [30,90] deg = {:.6f} at {:g} deg (tol 0.05)", worst, at)};
}

Outcome preset_dominance() {
  FitOptions opts;
  opts.starts = 20;
  opts.seed = 1;
  auto simple = FitProblem::with_defaults(ModelKind::simple);
  const double simple_preset = objective(simple, simple.start);
  const auto rs = minimize(simple, opts);

  auto shrink = FitProblem::with_defaults(ModelKind::shrinkage);
  const double shrink_preset = objective(shrink, shrink.start);
  const auto rk = minimize(shrink, opts);

  const bool ok = rs.objective <= simple_preset && rk.objective <= shrink_preset;
  return {ok, fmt::format("simple refit {:.6g} vs preset {:.6g}; shrinkage refit {:.6g} vs preset {:.6g}",
                          rs.objective, simple_preset, rk.objective, shrink_preset)};
}

Outcome totals() {
  const ShrinkageModel m(presets::fig2_profile(), presets::fig2_shrinkage());
  std::string detail;
  bool any = false;
  for (auto conv : kAllConventions) {
    const auto r = m.total_ratios(conv);
    const bool ok = std::fabs(r.i1_over_i0 - 0.496) <= 0.02 && std::fabs(r.i2_over_i0 - 0.482) <= 0.02;
    any |= ok;
    detail += fmt::format("{}: I1/I0={:.4f} I2/I0={:.4f}{}; ", convention_name(conv), r.i1_over_i0,
                          r.i2_over_i0, ok ? " (match)" : "");
  }
  return {any, detail + "target 0.496 / 0.482 +- 0.02"};
}

Outcome triple_divergence() {
  const auto p = presets::fig1_simple();
  const double t0 = triple_transmission(p, 0.0, 0.0);
  double at = 0.0;
  const double gap = max_dev_vs([&](double a) { return triple_transmission(p, a, 0.0) / t0; },
                                [](double a) { return cos2(a) * cos2(a); }, 50.0, 75.0, &at);
  return {gap >= 0.05, fmt::format("max |hv_norm - cos^4| on [50,75] deg = {:.6f} at {:g} deg (need >= 0.05)", gap, at)};
}

Outcome chsh_bound() {
  const auto hv = chsh_scan(hv_correlation(presets::fig1_simple()), kPi / 24);
  const auto qm = chsh_scan(qm_correlation, kPi / 24);
  const double textbook = chsh(qm_correlation, {0.0, kPi / 4, kPi / 8, 3 * kPi / 8});
  const double tsirelson = 2.0 * std::sqrt(2.0);
  const bool ok = hv.max_s <= 2.0 + 1e-6 && std::fabs(qm.max_s - tsirelson) <= 1e-3 &&
                  std::fabs(textbook - tsirelson) <= 1e-9;
  return {ok, fmt::format("HV max S = {:.9f} (<= 2+1e-6); QM scan S = {:.9f}, textbook S = {:.12f}",
                          hv.max_s, qm.max_s, textbook)};
}

Outcome kernel_normalization() {
  const ShrinkageModel m(presets::fig2_profile(), presets::fig2_shrinkage());
  double worst = 0.0;
  for (int i = 0; i <= 180; ++i)
    worst = std::max(worst, std::fabs(m.kernel_mass(-kHalfPi + kPi * i / 180.0) - 1.0));
  return {worst <= 1e-9, fmt::format("max |int c dlambda - 1| over 181 points = {:.3e} (tol 1e-9)", worst)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 gen(20240611);
  std::uniform_real_distribution<double> ua(1, 3), ue(2, 4), uc(50, 300), ang(-kHalfPi, kHalfPi);
  std::uniform_real_distribution<double> us(20, 80), ueps(0, 0.6), ueta(1.0, 1.5);
  McConfig cfg;
  cfg.samples = 1'000'000;
  double worst = 0.0;
  int failures = 0;
  for (int k = 0; k < 10; ++k) {
    const TransmissionProfileParams p(ua(gen), ue(gen), uc(gen));
    const ShrinkageParams s(us(gen), ueps(gen), ueta(gen));
    const double alpha = ang(gen), beta = ang(gen);
    cfg.seed = 1000 + k;
    const ShrinkageModel model(p, s);
    const KernelSampler sampler(model);
    const std::pair<McEstimate, double> runs[] = {
        {mc_pair(p, alpha, cfg), pair_transmission_raw(p, alpha) / kPi},
        {mc_triple(p, alpha, beta, cfg), triple_transmission(p, alpha, beta) / kPi},
        {mc_pair_shrinkage(model, sampler, alpha, cfg), model.pair_transmission(alpha) / kPi},
        {mc_coincidence(p, alpha, beta, cfg), coincidence_rate(p, alpha, beta)},
    };
    for (const auto& [est, ref] : runs) {
      const double z = std::fabs(est.mean - ref) / est.std_error;
      worst = std::max(worst, z);
      failures += z > 4.0;
    }
  }
  return {failures == 0, fmt::format("40 estimates at N=1e6, worst |mean - quadrature| = {:.2f} stderr (tol 4)", worst)};
}

Outcome belifante() {
  const auto prof = belifante_fn();
  const double p0 = pair_transmission_raw(prof, 0.0);
  double at = 0.0;
  const double dev = max_dev_vs([&](double a) { return pair_transmission_raw(prof, a) / p0; }, cos2, 0.0, 90.0, &at);
  return {dev >= 0.1, fmt::format("max |p2_norm - cos^2| = {:.6f} at {:g} deg (need >= 0.1)", dev, at)};
}

Outcome degenerate_kernel() {
  const auto p = presets::fig1_simple();
  const ShrinkageModel m(p, ShrinkageParams(1e6, 0.0, presets::fig2_shrinkage().eta()));
  const auto grid = degree_grid(0.0, 90.0, 1.0);
  const auto shrink = curve([&](double a) { return m.pair_transmission(a); }, grid, Normalization::raw);
  const auto simple = curve([&](double a) { return pair_transmission_raw(p, a); }, grid, Normalization::raw);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::fabs(shrink.values[i] - simple.values[i]));
  return {worst <= 1e-3, fmt::format("max |shrinkage pair - simple pair| = {:.3e} (tol 1e-3)", worst)};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*check)();
  double budget_s;  // 0 = no runtime limit
};

}  // namespace

int main(int argc, char** argv) {
  const Criterion all[] = {
      {1, "Malus agreement", malus_agreement, 5},
      {2, "preset dominance", preset_dominance, 600},
      {3, "total transmissions", totals, 0},
      {4, "triple divergence", triple_divergence, 0},
      {5, "CHSH bound", chsh_bound, 60},
      {6, "kernel normalization", kernel_normalization, 0},
      {7, "MC vs quadrature", oracle_equivalence, 60},
      {8, "Belifante deviation", belifante, 0},
      {9, "degenerate kernel", degenerate_kernel, 0},
  };
  std::set<int> wanted;
  std::string report;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--report" && i + 1 < argc)
      report = argv[++i];
    else
      wanted.insert(std::atoi(arg.c_str()));
  }

  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += fmt::format("; runtime over budget of {:g} s", c.budget_s);
    }
    const auto line = fmt::format("criterion {} [{}] {}: {} ({:.1f} s)\n", c.id, o.pass ? "PASS" : "FAIL",
                                  c.name, o.detail, secs);
    fmt::print("{}", line);
    if (!report.empty()) std::ofstream(report, std::ios::app) << line;
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
