#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hvpol/cascade.hpp"
#include "hvpol/error.hpp"
#include "hvpol/presets.hpp"
#include "hvpol/shrinkage.hpp"
#include "oracle/fixtures.hpp"
#include "oracle/simpson.hpp"

using namespace hvpol;

namespace {
const ShrinkageModel& fig2() {
  static const ShrinkageModel m(presets::fig2_profile(), presets::fig2_shrinkage());
  return m;
}
}  // namespace

TEST_CASE("shrinkage parameter validation") {
  CHECK_THROWS_AS(ShrinkageParams(0.0, 0.1, 1.0), DomainError);
  CHECK_THROWS_AS(ShrinkageParams(1.0, -0.1, 1.0), DomainError);
  CHECK_THROWS_AS(ShrinkageParams(1.0, 0.1, kPi / 4), DomainError);
  CHECK_THROWS_AS(ShrinkageParams(1.0, 0.1, kHalfPi), DomainError);
}

TEST_CASE("shift map fixed points, continuity and oddness") {
  const auto s = presets::fig2_shrinkage();
  CHECK(lambda_e(0.0, s) == 0.0);
  CHECK(lambda_e(kHalfPi, s) == doctest::Approx(kHalfPi));
  const double eta = s.eta();
  CHECK(std::fabs(lambda_e(std::nextafter(eta, 0.0), s) - lambda_e(std::nextafter(eta, 2.0), s)) < 1e-12);
  CHECK(lambda_e(eta, s) == doctest::Approx(eta));
  for (double l = 0.05; l < kHalfPi; l += 0.05) {
    CHECK(lambda_e(-l, s) == doctest::Approx(-lambda_e(l, s)));
    CHECK(lambda_e_interval(-l, s) == doctest::Approx(-lambda_e(l, s)));
  }
  CHECK(lambda_e(0.5, s) == doctest::Approx(0.5 * (1 + 0.4 * (eta - 0.5))));
  CHECK(lambda_e_interval(-kHalfPi, s) == doctest::Approx(-kHalfPi));
}

TEST_CASE("inverse shift map") {
  for (double u = -1.5; u < 1.5; u += 0.1)
    CHECK(lambda_e_interval(fig2().inverse_lambda_e(u), fig2().shrinkage()) == doctest::Approx(u).epsilon(1e-12));
}

TEST_CASE("kernel normalization on a 181-point grid") {
  double worst = 0.0;
  for (int i = 0; i <= 180; ++i) {
    const double lp = -kHalfPi + kPi * i / 180.0;
    worst = std::max(worst, std::fabs(fig2().kernel_mass(lp) - 1.0));
  }
  MESSAGE("max |mass - 1| = " << worst);
  CHECK(worst <= 1e-9);
  for (double lp : {0.1, 0.7, 1.3}) CHECK(fig2().kernel_mass(lp) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("cached normalization matches direct quadrature") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-kHalfPi, kHalfPi);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double lp = u(gen);
    const double direct = fig2().normalization_direct(lp);
    worst = std::max(worst, std::fabs(fig2().normalization(lp) - direct) / direct);
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("normalization table resolution follows the kernel width") {
  CHECK(fig2().normalization_nodes() == ShrinkageModel::kMinNormalizationNodes);
  const ShrinkageModel narrow(presets::fig2_profile(), ShrinkageParams(400.0, 0.4, 1.38));
  CHECK(narrow.normalization_nodes() > ShrinkageModel::kMinNormalizationNodes);
  CHECK((narrow.normalization_nodes() - 1) % (ShrinkageModel::kMinNormalizationNodes - 1) == 0);
  for (double lp : {-1.5687, -0.0123, 0.777, 1.5601})
    CHECK(narrow.normalization(lp) == doctest::Approx(narrow.normalization_direct(lp)).epsilon(1e-8));
}

TEST_CASE("kernel is positive and concentrated") {
  const double sigma = fig2().shrinkage().sigma();
  for (double lp : {-1.2, -0.3, 0.0, 0.4, 1.0}) {
    // mass with |lp - lambda_e(lambda)| <= 3/sqrt(sigma)
    const double lo = fig2().inverse_lambda_e(std::max(-kHalfPi, lp - 3 / std::sqrt(sigma)));
    const double hi = fig2().inverse_lambda_e(std::min(kHalfPi, lp + 3 / std::sqrt(sigma)));
    CHECK(fig2().kernel_mass(lp, lo, hi) > 0.99);
  }
  for (double l = -1.5; l < 1.5; l += 0.1)
    for (double lp = -1.5; lp < 1.5; lp += 0.1) CHECK(fig2().kernel(l, lp) >= 0.0);
}

TEST_CASE("kernel mass agrees with independent Simpson integration") {
  const double lp = 0.7;
  auto f = [&](double l) { return fig2().kernel(l, lp); };
  const double ref = oracle::simpson(f, -kHalfPi, 0.0, 1e-13) + oracle::simpson(f, 0.0, kHalfPi, 1e-13);
  CHECK(ref == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("output distribution") {
  CHECK(fig2().output_distribution(0.0) == doctest::Approx(fixtures::d0_fig2).epsilon(1e-9));
  const auto grid = degree_grid(-89.0, 90.0, 1.0);
  const auto d = fig2().output_distribution(grid);
  for (double v : d.densities) CHECK(v >= 0.0);
  // single-peaked for these parameters (confirmed by the independent float64
  // oracle): no trough between the centre and the edge, only a shoulder
  bool rising_again = false;
  for (std::size_t i = 89; i + 1 < d.densities.size(); ++i)
    rising_again |= d.densities[i + 1] > d.densities[i];
  CHECK_FALSE(rising_again);
  CHECK(d.densities.back() > 0.1);
  CHECK(d.densities == fig2().output_distribution(grid, Exec::serial).densities);
}

TEST_CASE("totals") {
  const auto raw = fig2().total_ratios(TotalsConvention::raw);
  CHECK(raw.i1_over_i0 == doctest::Approx(fixtures::int_p1_fig2).epsilon(1e-8));
  CHECK(raw.i1_over_i0 == doctest::Approx(fixtures::int_d_fig2).epsilon(1e-8));
  CHECK(raw.i2_over_i0 == doctest::Approx(fixtures::pair_shrink0_fig2).epsilon(1e-8));
  const auto def = fig2().total_ratios();
  CHECK(def.i1_over_i0 == doctest::Approx(raw.i1_over_i0 / kPi));
  for (auto c : kAllConventions) {
    const auto r = fig2().total_ratios(c);
    CHECK(r.i2_over_i0 <= r.i1_over_i0);
  }
  CHECK(convention_factor(TotalsConvention::over_half_pi) == doctest::Approx(2 / kPi));
}

TEST_CASE("pair transmission") {
  const double p0 = fig2().pair_transmission(0.0);
  CHECK(p0 == doctest::Approx(fixtures::pair_shrink0_fig2).epsilon(1e-8));
  CHECK(fig2().pair_transmission(kPi / 4) / p0 ==
        doctest::Approx(fixtures::pair_shrink_norm_45_fig2).epsilon(1e-7));
  CHECK(fig2().pair_transmission(kHalfPi) / p0 ==
        doctest::Approx(fixtures::pair_shrink_norm_90_fig2).epsilon(1e-7));
  CHECK(fig2().pair_transmission(0.6) == doctest::Approx(fig2().pair_transmission(-0.6)).epsilon(1e-10));
}

TEST_CASE("fast Nystrom grid agrees with nested quadrature") {
  const ShrinkageGrid g(presets::fig2_profile(), presets::fig2_shrinkage());
  double w = 0.0;
  for (double x : g.weights()) w += x;
  CHECK(w == doctest::Approx(kPi).epsilon(1e-12));
  for (double l : {0.0, 0.3, 1.0, 1.45})
    CHECK(g.density_at(l) == doctest::Approx(fig2().output_distribution(l)).epsilon(1e-6));
  for (double a : {0.0, 0.5, 1.2, kHalfPi})
    CHECK(g.pair_transmission(a) == doctest::Approx(fig2().pair_transmission(a)).epsilon(1e-6));
}

TEST_CASE("fast grid stays accurate for narrow kernels") {
  const TransmissionProfileParams p(14.5, 12.0, 0.43);
  const ShrinkageParams s(3358.0, 0.68, 0.99);
  const ShrinkageModel nested(p, s);
  const ShrinkageGrid g(p, s);
  for (double a : {0.0, 0.3, 0.99, 1.2, kHalfPi})
    CHECK(g.pair_transmission(a) == doctest::Approx(nested.pair_transmission(a)).epsilon(1e-6));
}

TEST_CASE("degenerate kernel recovers the profile-only model") {
  const auto p = presets::fig1_simple();
  const ShrinkageModel m(p, ShrinkageParams(1e6, 0.0, 1.2));
  for (double deg : {0.0, 30.0, 60.0, 90.0}) {
    const double a = deg_to_rad(deg);
    CHECK(std::fabs(m.pair_transmission(a) - pair_transmission_raw(p, a)) <= 1e-3);
  }
}
