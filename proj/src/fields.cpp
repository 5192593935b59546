#include "precip/fields.hpp"

#include <cmath>

namespace precip::fields {

namespace {
const double kLogDen = std::log1p(kRateCapMmHr);

void require_grid(const Tensor& t, int h, int w, const char* name) {
  if (t.ndim() != 2 || t.dim(0) != h || t.dim(1) != w)
    throw ValidationError(std::string(name) + " grid has wrong dimensions");
}
}  // namespace

double rate_to_norm(double rate_mm_hr) {
  const double r = std::fmin(std::fmax(rate_mm_hr, 0.0), kRateCapMmHr);
  return std::log1p(r) / kLogDen;
}

double norm_to_rate(double v) { return std::expm1(v * kLogDen); }

Tensor rate_to_norm(const Tensor& rates) {
  Tensor out = rates;
  for (int64_t i = 0; i < out.size(); ++i) out[i] = rate_to_norm(rates[i]);
  return out;
}

Tensor norm_to_rate(const Tensor& values) {
  Tensor out = values;
  for (int64_t i = 0; i < out.size(); ++i) out[i] = norm_to_rate(values[i]);
  return out;
}

void SurfaceField::validate() const {
  if (rate.ndim() != 2) throw ValidationError("surface field must be 2-d");
  for (int64_t i = 0; i < rate.size(); ++i)
    if (!std::isfinite(rate[i]) || rate[i] < 0)
      throw ValidationError("surface rates must be finite and >= 0");
}

void SpectralScene::validate() const {
  if (tbb.ndim() != 3 || tbb.dim(0) != kTbbChannels)
    throw ValidationError("tbb must be 9 x H x W");
  const int h = height(), w = width();
  require_grid(lat, h, w, "lat");
  require_grid(lon, h, w, "lon");
  require_grid(elevation, h, w, "elevation");
  require_grid(landcover, h, w, "landcover");
  require_grid(vza, h, w, "vza");
  require_grid(solar_time, h, w, "solar_time");

  for (int64_t i = 0; i < tbb.size(); ++i) {
    const double v = tbb[i];
    if (std::isnan(v)) continue;  // flagged missing
    if (!(v >= kTbbMinK && v <= kTbbMaxK))
      throw ValidationError("tbb out of [150, 350] K and not flagged missing");
  }
  for (int64_t i = 0; i < lat.size(); ++i) {
    if (!(std::fabs(lat[i]) <= 90.0)) throw ValidationError("|lat| must be <= 90");
    if (!(vza[i] >= 0.0 && vza[i] <= 90.0)) throw ValidationError("vza must be in [0, 90]");
    if (!(solar_time[i] >= 0.0 && solar_time[i] < 24.0))
      throw ValidationError("solar_time must be in [0, 24)");
  }
}

void PrecipVolume::validate() const {
  if (rate.ndim() != 3 || rate.dim(0) != kVolumeLayers)
    throw ValidationError("volume must be 72 x H x W");
  for (int64_t i = 0; i < rate.size(); ++i)
    if (!std::isfinite(rate[i]) || rate[i] < 0)
      throw ValidationError("volume rates must be finite and >= 0");
}

SurfaceField PrecipVolume::surface() const {
  const int h = height(), w = width();
  SurfaceField s{Tensor({h, w})};
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) s.rate.at(i, j) = rate.at(0, i, j);
  return s;
}

void PWVStack::validate() const {
  if (pwv.ndim() != 3 || pwv.dim(0) != kPwvChannels)
    throw ValidationError("pwv stack must be 18 x H x W");
  for (int64_t i = 0; i < pwv.size(); ++i)
    if (!std::isfinite(pwv[i]) || pwv[i] < 0)
      throw ValidationError("pwv values must be finite and >= 0");
}

ChannelRanges ChannelRanges::defaults() {
  ChannelRanges r;
  r.lo.assign(kSceneChannels, 0.0);
  r.hi.assign(kSceneChannels, 1.0);
  for (int c = 0; c < kTbbChannels; ++c) {
    r.lo[c] = 180.0;
    r.hi[c] = 330.0;
  }
  r.lo[9] = -90.0;  r.hi[9] = 90.0;    // lat
  r.lo[10] = -180.0; r.hi[10] = 180.0; // lon
  r.lo[11] = 0.0;   r.hi[11] = kElevationCapM;
  r.lo[12] = 0.0;   r.hi[12] = kLandcoverMaxId;
  r.lo[13] = 0.0;   r.hi[13] = 90.0;   // vza
  r.lo[14] = 0.0;   r.hi[14] = 24.0;   // solar time
  return r;
}

void ChannelRanges::validate() const {
  if (lo.size() != kSceneChannels || hi.size() != kSceneChannels)
    throw ValidationError("ranges must cover exactly 15 channels");
  for (size_t c = 0; c < lo.size(); ++c)
    if (!(hi[c] > lo[c])) throw ValidationError("range max must exceed min");
}

NormalizedScene normalize_scene(const SpectralScene& scene, const ChannelRanges& ranges) {
  scene.validate();
  ranges.validate();
  const Tensor stack = scene_to_raw_stack(scene);
  const int h = scene.height(), w = scene.width();

  NormalizedScene out;
  out.channels = Tensor({kSceneChannels, h, w});
  out.valid_mask = Tensor({h, w}, 1.0);
  for (int c = 0; c < kSceneChannels; ++c) {
    const double lo = ranges.lo[static_cast<size_t>(c)];
    const double span = ranges.hi[static_cast<size_t>(c)] - lo;
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j) {
        const double v = stack.at(c, i, j);
        if (std::isnan(v)) {
          out.channels.at(c, i, j) = 0.0;
          out.valid_mask.at(i, j) = 0.0;
          out.has_missing = true;
        } else {
          const double n = (v - lo) / span;
          out.channels.at(c, i, j) = std::fmin(1.0, std::fmax(0.0, n));
        }
      }
  }
  return out;
}

Tensor encode_static(const SpectralScene& scene) {
  scene.validate();
  const int h = scene.height(), w = scene.width();
  Tensor out({kStaticChannels, h, w});
  constexpr double kDegToRad = M_PI / 180.0;
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      out.at(0, i, j) = scene.lat.at(i, j) / 90.0;
      out.at(1, i, j) = scene.lon.at(i, j) / 180.0;
      out.at(2, i, j) =
          std::fmin(std::fmax(scene.elevation.at(i, j), 0.0), kElevationCapM) / kElevationCapM;
      out.at(3, i, j) =
          std::fmin(std::fmax(scene.landcover.at(i, j), 0.0), kLandcoverMaxId) / kLandcoverMaxId;
      out.at(4, i, j) = std::cos(scene.vza.at(i, j) * kDegToRad);
      out.at(5, i, j) = std::sin(2.0 * M_PI * scene.solar_time.at(i, j) / 24.0);
    }
  return out;
}

Tensor scene_to_input(const SpectralScene& scene, const ChannelRanges& ranges) {
  const NormalizedScene norm = normalize_scene(scene, ranges);
  const Tensor stat = encode_static(scene);
  const int h = scene.height(), w = scene.width();
  Tensor out({kSceneChannels, h, w});
  for (int c = 0; c < kTbbChannels; ++c)
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j) out.at(c, i, j) = norm.channels.at(c, i, j);
  for (int c = 0; c < kStaticChannels; ++c)
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j) out.at(kTbbChannels + c, i, j) = stat.at(c, i, j);
  return out;
}

Tensor scene_to_raw_stack(const SpectralScene& scene) {
  const int h = scene.height(), w = scene.width();
  Tensor out({kSceneChannels, h, w});
  for (int c = 0; c < kTbbChannels; ++c)
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j) out.at(c, i, j) = scene.tbb.at(c, i, j);
  const Tensor* statics[kStaticChannels] = {&scene.lat,       &scene.lon, &scene.elevation,
                                            &scene.landcover, &scene.vza, &scene.solar_time};
  for (int s = 0; s < kStaticChannels; ++s)
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j)
        out.at(kTbbChannels + s, i, j) = statics[s]->at(i, j);
  return out;
}

SpectralScene scene_from_raw_stack(const Tensor& stack) {
  if (stack.ndim() != 3 || stack.dim(0) != kSceneChannels)
    throw ValidationError("raw scene stack must be 15 x H x W");
  const int h = static_cast<int>(stack.dim(1)), w = static_cast<int>(stack.dim(2));
  SpectralScene s;
  s.tbb = Tensor({kTbbChannels, h, w});
  for (int c = 0; c < kTbbChannels; ++c)
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j) s.tbb.at(c, i, j) = stack.at(c, i, j);
  Tensor* statics[kStaticChannels] = {&s.lat, &s.lon, &s.elevation, &s.landcover, &s.vza,
                                      &s.solar_time};
  for (int st = 0; st < kStaticChannels; ++st) {
    *statics[st] = Tensor({h, w});
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j)
        statics[st]->at(i, j) = stack.at(kTbbChannels + st, i, j);
  }
  return s;
}

}  // namespace precip::fields
