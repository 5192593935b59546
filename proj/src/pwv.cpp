#include "precip/pwv.hpp"

#include <cmath>

namespace precip::pwv {

void PressureProfile::validate() const {
  for (double v : q)
    if (!std::isfinite(v) || v < 0.0)
      throw ValidationError("specific humidity must be finite and >= 0");
}

std::vector<double> integrate_layers(std::span<const double> levels_hpa,
                                     std::span<const double> q) {
  if (levels_hpa.size() < 2) throw ValidationError("need at least two pressure levels");
  if (levels_hpa.size() != q.size())
    throw ValidationError("levels and humidity must have equal length");
  for (size_t i = 0; i + 1 < levels_hpa.size(); ++i)
    if (!(levels_hpa[i] > levels_hpa[i + 1]))
      throw ValidationError("pressure levels must be strictly decreasing");
  for (double v : q)
    if (!std::isfinite(v) || v < 0.0)
      throw ValidationError("specific humidity must be finite and >= 0");

  const double denom = kGravityMs2 * kWaterDensityKgM3;
  std::vector<double> out(levels_hpa.size() - 1);
  for (size_t i = 0; i + 1 < levels_hpa.size(); ++i) {
    const double q_bar = 0.5 * (q[i] + q[i + 1]);
    const double dp_pa = (levels_hpa[i] - levels_hpa[i + 1]) * kHpaToPa;
    out[i] = q_bar * dp_pa / denom * 1000.0;  // meters -> mm
  }
  return out;
}

std::array<double, kLayers> integrate_layer_pwv(const PressureProfile& profile) {
  const auto v = integrate_layers(std::span(kPressureLevelsHpa), std::span(profile.q));
  std::array<double, kLayers> out{};
  for (int i = 0; i < kLayers; ++i) out[static_cast<size_t>(i)] = v[static_cast<size_t>(i)];
  return out;
}

fields::PWVStack pwv_stack_for_scene(const Tensor& q_grid) {
  if (q_grid.ndim() != 3 || q_grid.dim(0) != kLevels)
    throw ValidationError("humidity grid must be 19 x H x W");
  const int h = static_cast<int>(q_grid.dim(1));
  const int w = static_cast<int>(q_grid.dim(2));

  fields::PWVStack stack{Tensor({kLayers, h, w})};
  PressureProfile p;
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      for (int l = 0; l < kLevels; ++l) p.q[static_cast<size_t>(l)] = q_grid.at(l, i, j);
      const auto layers = integrate_layer_pwv(p);
      for (int l = 0; l < kLayers; ++l) stack.pwv.at(l, i, j) = layers[static_cast<size_t>(l)];
    }
  return stack;
}

}  // namespace precip::pwv
