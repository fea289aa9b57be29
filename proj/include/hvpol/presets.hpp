#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "hvpol/profile.hpp"
#include "hvpol/shrinkage.hpp"

namespace hvpol::presets {

inline constexpr std::string_view kFig1Simple = "fig1-simple";
inline constexpr std::string_view kFig2Shrinkage = "fig2-shrinkage";

struct Preset {
  std::string_view name;
  TransmissionProfileParams profile;
  std::optional<ShrinkageParams> shrinkage;
};

TransmissionProfileParams fig1_simple();
TransmissionProfileParams fig2_profile();
ShrinkageParams fig2_shrinkage();

std::optional<Preset> find(std::string_view name);
std::vector<std::string_view> names();

}  // namespace hvpol::presets
