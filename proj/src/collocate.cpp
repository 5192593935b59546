#include "precip/collocate.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "precip/tensor_io.hpp"

namespace precip::collocate {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

std::array<double, 3> to_unit_sphere(double lat_deg, double lon_deg) {
  const double lat = lat_deg * kDegToRad, lon = lon_deg * kDegToRad;
  return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

double chord_for_angle(double angle_deg) { return 2.0 * std::sin(0.5 * angle_deg * kDegToRad); }

}  // namespace

void ObsPoint::validate() const {
  if (std::fabs(lat_deg) > 90.0) throw ValidationError("|lat| must be <= 90");
  if (heights_m.size() != rates.size())
    throw ValidationError("heights and rates must have equal length");
  for (size_t i = 0; i + 1 < heights_m.size(); ++i)
    if (!(heights_m[i] < heights_m[i + 1]))
      throw ValidationError("profile heights must be strictly increasing");
  for (double r : rates)
    if (!std::isfinite(r) || r < 0) throw ValidationError("profile rates must be finite and >= 0");
}

void MatchConfig::validate() const {
  if (!(radius_deg > 0)) throw ValidationError("radius must be > 0");
  if (!(window_s > 0)) throw ValidationError("window must be > 0");
}

double great_circle_deg(double lat1, double lon1, double lat2, double lon2) {
  const double phi1 = lat1 * kDegToRad, phi2 = lat2 * kDegToRad;
  const double dphi = (lat2 - lat1) * kDegToRad;
  const double dlam = (lon2 - lon1) * kDegToRad;
  const double a = std::sin(0.5 * dphi) * std::sin(0.5 * dphi) +
                   std::cos(phi1) * std::cos(phi2) * std::sin(0.5 * dlam) * std::sin(0.5 * dlam);
  return 2.0 * std::asin(std::fmin(1.0, std::sqrt(a))) / kDegToRad;
}

SphereIndex::SphereIndex(std::span<const ObsPoint> points) {
  if (points.empty()) throw ValidationError("cannot build an index over zero points");
  coords_.reserve(points.size());
  for (const ObsPoint& p : points) coords_.push_back(to_unit_sphere(p.lat_deg, p.lon_deg));
  order_.resize(coords_.size());
  for (size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
  root_ = build(0, static_cast<int>(order_.size()));
}

int SphereIndex::build(int begin, int end) {
  constexpr int kLeafSize = 16;
  Node node;
  node.begin = begin;
  node.end = end;
  if (end - begin <= kLeafSize) {
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }

  // split on the widest axis at the median
  double lo[3] = {1e300, 1e300, 1e300}, hi[3] = {-1e300, -1e300, -1e300};
  for (int i = begin; i < end; ++i)
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::fmin(lo[a], coords_[static_cast<size_t>(order_[static_cast<size_t>(i)])][static_cast<size_t>(a)]);
      hi[a] = std::fmax(hi[a], coords_[static_cast<size_t>(order_[static_cast<size_t>(i)])][static_cast<size_t>(a)]);
    }
  int axis = 0;
  for (int a = 1; a < 3; ++a)
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;

  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int x, int y) {
                     return coords_[static_cast<size_t>(x)][static_cast<size_t>(axis)] <
                            coords_[static_cast<size_t>(y)][static_cast<size_t>(axis)];
                   });
  node.axis = axis;
  node.split = coords_[static_cast<size_t>(order_[static_cast<size_t>(mid)])][static_cast<size_t>(axis)];

  const int self = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[static_cast<size_t>(self)].left = left;
  nodes_[static_cast<size_t>(self)].right = right;
  return self;
}

void SphereIndex::query(int ni, const std::array<double, 3>& q, double chord_sq,
                        std::vector<int>& out) const {
  const Node& node = nodes_[static_cast<size_t>(ni)];
  if (node.axis < 0) {
    for (int i = node.begin; i < node.end; ++i) {
      const int id = order_[static_cast<size_t>(i)];
      const auto& p = coords_[static_cast<size_t>(id)];
      const double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
      if (dx * dx + dy * dy + dz * dz <= chord_sq) out.push_back(id);
    }
    return;
  }
  const double d = q[static_cast<size_t>(node.axis)] - node.split;
  if (d <= 0) {
    query(node.left, q, chord_sq, out);
    if (d * d <= chord_sq) query(node.right, q, chord_sq, out);
  } else {
    query(node.right, q, chord_sq, out);
    if (d * d <= chord_sq) query(node.left, q, chord_sq, out);
  }
}

std::vector<int> SphereIndex::query_radius(double lat_deg, double lon_deg,
                                           double radius_deg) const {
  const auto q = to_unit_sphere(lat_deg, lon_deg);
  const double chord = chord_for_angle(radius_deg);
  std::vector<int> out;
  query(root_, q, chord * chord, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> match(const Tensor& cell_lat, const Tensor& cell_lon,
                                    double cell_time_s, std::span<const ObsPoint> points,
                                    const SphereIndex& index, const MatchConfig& config) {
  config.validate();
  require_same_shape(cell_lat, cell_lon, "cell lat/lon");
  std::vector<std::vector<int>> out(static_cast<size_t>(cell_lat.size()));
  for (int64_t c = 0; c < cell_lat.size(); ++c) {
    std::vector<int> ids = index.query_radius(cell_lat[c], cell_lon[c], config.radius_deg);
    std::vector<int>& keep = out[static_cast<size_t>(c)];
    for (int id : ids)
      if (std::fabs(points[static_cast<size_t>(id)].time_s - cell_time_s) <= config.window_s)
        keep.push_back(id);
  }
  return out;
}

std::array<double, fields::kVolumeLayers> interpolate_profile(std::span<const double> heights_m,
                                                              std::span<const double> rates) {
  if (heights_m.empty() || heights_m.size() != rates.size())
    throw ValidationError("profile must be nonempty with matching heights/rates");

  std::array<double, fields::kVolumeLayers> out{};
  for (int l = 0; l < fields::kVolumeLayers; ++l) {
    const double h = fields::layer_mid_km(l) * 1000.0;
    double v = 0.0;
    if (h >= heights_m.front() && h <= heights_m.back()) {
      const auto it = std::lower_bound(heights_m.begin(), heights_m.end(), h);
      if (it == heights_m.begin()) {
        v = rates.front();
      } else {
        const size_t j = static_cast<size_t>(it - heights_m.begin());
        if (j >= heights_m.size()) {
          v = rates.back();
        } else {
          const double h0 = heights_m[j - 1], h1 = heights_m[j];
          const double t = (h - h0) / (h1 - h0);
          v = rates[j - 1] + t * (rates[j] - rates[j - 1]);
        }
      }
    }
    out[static_cast<size_t>(l)] = std::fmax(0.0, v);
  }
  return out;
}

std::vector<MatchRecord> build_dataset(std::vector<SceneSample> scenes,
                                       std::span<const ObsPoint> points,
                                       const MatchConfig& config) {
  config.validate();
  for (const ObsPoint& p : points) p.validate();
  std::stable_sort(scenes.begin(), scenes.end(),
                   [](const SceneSample& a, const SceneSample& b) { return a.time_s < b.time_s; });

  std::vector<MatchRecord> out;
  if (points.empty()) return out;
  SphereIndex index(points);

  for (SceneSample& s : scenes) {
    s.scene.validate();
    const int h = s.scene.height(), w = s.scene.width();
    const auto cell_matches = match(s.scene.lat, s.scene.lon, s.time_s, points, index, config);

    MatchRecord rec;
    rec.mask = Tensor({h, w});
    rec.volume.rate = Tensor({fields::kVolumeLayers, h, w});
    std::vector<char> used(points.size(), 0);
    bool any = false;
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j) {
        const auto& ids = cell_matches[static_cast<size_t>(i * w + j)];
        if (ids.empty()) continue;
        any = true;
        rec.mask.at(i, j) = 1.0;
        std::array<double, fields::kVolumeLayers> acc{};
        for (int id : ids) {
          used[static_cast<size_t>(id)] = 1;
          const ObsPoint& p = points[static_cast<size_t>(id)];
          const auto prof = interpolate_profile(std::span(p.heights_m), std::span(p.rates));
          for (int l = 0; l < fields::kVolumeLayers; ++l)
            acc[static_cast<size_t>(l)] += prof[static_cast<size_t>(l)];
        }
        for (int l = 0; l < fields::kVolumeLayers; ++l)
          rec.volume.rate.at(l, i, j) = acc[static_cast<size_t>(l)] / static_cast<double>(ids.size());
      }
    if (!any) continue;

    rec.scene = std::move(s.scene);
    rec.pwv = std::move(s.pwv);
    rec.scene_time_s = s.time_s;
    rec.n_matched_points = static_cast<int>(std::count(used.begin(), used.end(), 1));
    rec.provenance = "collocated";
    out.push_back(std::move(rec));
  }
  return out;
}

namespace {
std::string sample_name(const char* kind, size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%05zu.tnsr", kind, i);
  return buf;
}
}  // namespace

void save_records(const std::string& dir, const std::vector<MatchRecord>& records) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create dataset directory: " + dir);

  nlohmann::json manifest;
  manifest["samples"] = nlohmann::json::array();
  for (size_t i = 0; i < records.size(); ++i) {
    const MatchRecord& r = records[i];
    const std::string scene = sample_name("scene", i);
    const std::string volume = sample_name("volume", i);
    const std::string pwv = sample_name("pwv", i);
    const std::string mask = sample_name("mask", i);
    write_tensor(dir + "/" + scene, fields::scene_to_raw_stack(r.scene));
    write_tensor(dir + "/" + volume, r.volume.rate);
    write_tensor(dir + "/" + pwv, r.pwv.pwv);
    write_tensor(dir + "/" + mask, r.mask);
    manifest["samples"].push_back({{"scene", scene},
                                   {"volume", volume},
                                   {"pwv", pwv},
                                   {"mask", mask},
                                   {"time_s", r.scene_time_s},
                                   {"n_matched_points", r.n_matched_points},
                                   {"provenance", r.provenance}});
  }
  std::ofstream f(dir + "/dataset.json");
  if (!f) throw IoError("cannot write dataset manifest in " + dir);
  f << manifest.dump(2) << "\n";
}

std::vector<MatchRecord> load_records(const std::string& dir) {
  std::ifstream f(dir + "/dataset.json");
  if (!f) throw IoError("missing dataset manifest: " + dir + "/dataset.json");
  nlohmann::json manifest;
  try {
    f >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad dataset manifest: ") + e.what());
  }

  std::vector<MatchRecord> out;
  for (const auto& s : manifest.at("samples")) {
    MatchRecord r;
    r.scene = fields::scene_from_raw_stack(read_tensor(dir + "/" + s.at("scene").get<std::string>()));
    r.volume.rate = read_tensor(dir + "/" + s.at("volume").get<std::string>());
    r.pwv.pwv = read_tensor(dir + "/" + s.at("pwv").get<std::string>());
    r.mask = read_tensor(dir + "/" + s.at("mask").get<std::string>());
    r.scene_time_s = s.at("time_s").get<double>();
    r.n_matched_points = s.at("n_matched_points").get<int>();
    r.provenance = s.value("provenance", "");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ObsPoint> load_points_jsonl(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open points file: " + path);
  std::vector<ObsPoint> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IoError("bad point on line " + std::to_string(lineno) + ": " + e.what());
    }
    ObsPoint p;
    p.lat_deg = j.at("lat").get<double>();
    p.lon_deg = j.at("lon").get<double>();
    p.time_s = j.at("time").get<double>();
    p.heights_m = j.at("heights_m").get<std::vector<double>>();
    p.rates = j.at("rates").get<std::vector<double>>();
    p.validate();
    out.push_back(std::move(p));
  }
  return out;
}

void save_points_jsonl(const std::string& path, std::span<const ObsPoint> points) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write points file: " + path);
  for (const ObsPoint& p : points) {
    nlohmann::json j{{"lat", p.lat_deg},
                     {"lon", p.lon_deg},
                     {"time", p.time_s},
                     {"heights_m", p.heights_m},
                     {"rates", p.rates}};
    f << j.dump() << "\n";
  }
}

}  // namespace precip::collocate
