#include "hvpol/presets.hpp"

namespace hvpol::presets {

TransmissionProfileParams fig1_simple() { return {1.74, 3.78, 200.0}; }
TransmissionProfileParams fig2_profile() { return {2.38, 2.54, 186.8}; }
ShrinkageParams fig2_shrinkage() { return {40.5, 0.40, 1.38}; }

std::optional<Preset> find(std::string_view name) {
  if (name == kFig1Simple) return Preset{kFig1Simple, fig1_simple(), std::nullopt};
  if (name == kFig2Shrinkage) return Preset{kFig2Shrinkage, fig2_profile(), fig2_shrinkage()};
  return std::nullopt;
}

std::vector<std::string_view> names() { return {kFig1Simple, kFig2Shrinkage}; }

}  // namespace hvpol::presets
