#pragma once
// Reference values produced by make_fixtures.py (mpmath at 30 digits, plus a
// float64 panel rule for the doubly nested shift-model integrals). Frozen.

namespace fixtures {

inline constexpr double phi_halfpi_fig1 = 0.98645413069015747;
inline constexpr double phi_one_fig2 = 0.049618722621891704;
inline constexpr double p1_halfpi_fig1 = 0.013545869309842533;
inline constexpr double int_p1_fig1 = 2.654055843264611;
inline constexpr double pair_raw0_fig1 = 2.514024624848919;
inline constexpr double pair_norm_10_fig1 = 0.97320724144802048;
inline constexpr double pair_norm_45_fig1 = 0.86548302664621715;
inline constexpr double pair_norm_80_fig1 = 0.86183048058804731;
inline constexpr double pair_norm_90_fig1 = 0.86179758638524017;
inline constexpr double triple00_fig1 = 2.4337528643876732;
inline constexpr double triple_halfpi0_fig1 = 2.0266064966147138;
inline constexpr double coinc_0_pi4_fig1 = 0.69259317846032545;
inline constexpr double corr_0_pi8_fig1 = 0.5306942000361712;
inline constexpr double sse_fig1_malus0 = 23.319286072960982;
inline constexpr double belifante_norm_45 = 0.66666666666666667;

inline constexpr double d0_fig2 = 1.4835170577403122;
inline constexpr double int_p1_fig2 = 2.6759209640205674;
inline constexpr double int_d_fig2 = 2.6759209640205674;
inline constexpr double pair_shrink0_fig2 = 2.5282531587254575;
// float64 panel rule, good to ~1e-8
inline constexpr double pair_shrink_norm_45_fig2 = 0.901088045;
inline constexpr double pair_shrink_norm_90_fig2 = 0.80479233;

}  // namespace fixtures
