#pragma once

#include <array>
#include <span>

#include "precip/fields.hpp"
#include "precip/tensor.hpp"

namespace precip::pwv {

inline constexpr int kLevels = 19;
inline constexpr int kLayers = kLevels - 1;

// ERA5-style pressure levels, hPa, strictly decreasing.
inline constexpr std::array<double, kLevels> kPressureLevelsHpa = {
    1000, 925, 850, 700, 600, 500, 400, 300, 250, 200, 150, 100, 70, 50, 30, 20, 10, 5, 1};

inline constexpr double kGravityMs2 = 9.80665;
inline constexpr double kWaterDensityKgM3 = 1000.0;
inline constexpr double kHpaToPa = 100.0;

struct PressureProfile {
  std::array<double, kLevels> q{};  // specific humidity, kg/kg
  void validate() const;
};

// Trapezoidal layer integration: PWV_i = mean(q_i, q_{i+1}) * dP_i / (g*rho_w),
// dP in Pa, result in mm. Validates monotone pressures and q >= 0.
std::vector<double> integrate_layers(std::span<const double> levels_hpa,
                                     std::span<const double> q);

std::array<double, kLayers> integrate_layer_pwv(const PressureProfile& profile);

// Grids a per-pixel humidity field (19 x H x W) into an 18-layer PWV stack.
fields::PWVStack pwv_stack_for_scene(const Tensor& q_grid);

}  // namespace precip::pwv
