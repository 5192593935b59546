#pragma once

#include <array>
#include <vector>

#include "precip/tensor.hpp"

namespace precip::fields {

inline constexpr int kTbbChannels = 9;
inline constexpr int kStaticChannels = 6;
inline constexpr int kSceneChannels = kTbbChannels + kStaticChannels;
inline constexpr int kVolumeLayers = 72;
inline constexpr double kLayerThicknessKm = 0.25;
inline constexpr int kPwvChannels = 18;

inline constexpr double kTbbMinK = 150.0;
inline constexpr double kTbbMaxK = 350.0;
inline constexpr double kElevationCapM = 9000.0;
inline constexpr double kLandcoverMaxId = 16.0;

// Rain-rate normalization used by the model heads and the conditioned loss
// entry points: r -> log1p(min(r, 100)) / log1p(100), so [0, 100] mm/h maps
// to [0, 1].
inline constexpr double kRateCapMmHr = 100.0;
double rate_to_norm(double rate_mm_hr);
double norm_to_rate(double v);
Tensor rate_to_norm(const Tensor& rates);
Tensor norm_to_rate(const Tensor& values);

inline double layer_mid_km(int layer) { return (layer + 0.5) * kLayerThicknessKm; }
inline double layer_top_km(int layer) { return (layer + 1) * kLayerThicknessKm; }

struct SurfaceField {
  Tensor rate;  // H x W, mm/h
  void validate() const;
};

// Nine-channel infrared brightness temperatures plus static geo grids, all
// H x W. Missing TBB samples are quiet NaN.
struct SpectralScene {
  Tensor tbb;         // 9 x H x W, kelvin
  Tensor lat;         // degrees, -90..90
  Tensor lon;         // degrees, -180..180
  Tensor elevation;   // meters
  Tensor landcover;   // categorical id
  Tensor vza;         // viewing zenith angle, degrees, 0..90
  Tensor solar_time;  // local solar hours, 0..24

  int height() const { return static_cast<int>(tbb.dim(1)); }
  int width() const { return static_cast<int>(tbb.dim(2)); }
  void validate() const;
};

struct PrecipVolume {
  Tensor rate;  // 72 x H x W, mm/h

  int height() const { return static_cast<int>(rate.dim(1)); }
  int width() const { return static_cast<int>(rate.dim(2)); }
  void validate() const;
  SurfaceField surface() const;  // layer 0
};

struct PWVStack {
  Tensor pwv;  // 18 x H x W, mm

  int height() const { return static_cast<int>(pwv.dim(1)); }
  int width() const { return static_cast<int>(pwv.dim(2)); }
  void validate() const;
};

// Per-channel normalization ranges for the 15 raw scene grids, in channel
// order: tbb0..tbb8, lat, lon, elevation, landcover, vza, solar_time.
struct ChannelRanges {
  std::vector<double> lo, hi;
  static ChannelRanges defaults();
  void validate() const;
};

struct NormalizedScene {
  Tensor channels;    // 15 x H x W in [0, 1]
  Tensor valid_mask;  // H x W, 1 where every channel was present
  bool has_missing = false;
};

NormalizedScene normalize_scene(const SpectralScene& scene, const ChannelRanges& ranges);

// Physical encodings of the six static grids: lat/90, lon/180,
// clamp(elev,0,9000)/9000, id/16, cos(vza), sin(2*pi*t/24).
Tensor encode_static(const SpectralScene& scene);

// Model input: normalized TBB channels 0..8 stacked with encode_static 9..14.
Tensor scene_to_input(const SpectralScene& scene, const ChannelRanges& ranges);

// Raw 15-channel stack in the documented channel order, for on-disk scenes.
Tensor scene_to_raw_stack(const SpectralScene& scene);
SpectralScene scene_from_raw_stack(const Tensor& stack);

}  // namespace precip::fields
