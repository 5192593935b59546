#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "precip/fields.hpp"
#include "precip/tensor.hpp"

namespace precip::collocate {

// One radar profile observation: location, time, and precipitation rates at
// native heights.
struct ObsPoint {
  double lat_deg = 0, lon_deg = 0;
  double time_s = 0;
  std::vector<double> heights_m;  // strictly increasing
  std::vector<double> rates;      // mm/h, >= 0
  void validate() const;
};

struct MatchConfig {
  double radius_deg = 0.1;  // great-circle angular separation
  double window_s = 600.0;  // temporal half-width: |dt| <= window_s
  void validate() const;
};

double great_circle_deg(double lat1, double lon1, double lat2, double lon2);

// KD-tree over unit-sphere coordinates; an angular radius query is run as a
// chordal-distance ball query (chord = 2 sin(radius/2)).
class SphereIndex {
 public:
  explicit SphereIndex(std::span<const ObsPoint> points);

  // ids of all points within radius_deg great-circle distance, ascending
  std::vector<int> query_radius(double lat_deg, double lon_deg, double radius_deg) const;

  int size() const { return static_cast<int>(coords_.size()); }

 private:
  struct Node {
    int axis = -1;          // -1 marks a leaf
    double split = 0;
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf range into order_
  };

  int build(int begin, int end);
  void query(int node, const std::array<double, 3>& q, double chord_sq,
             std::vector<int>& out) const;

  std::vector<std::array<double, 3>> coords_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

// A point matches a cell iff great-circle distance <= radius AND
// |t_point - t_cell| <= window. Returns per-cell match lists, row-major.
std::vector<std::vector<int>> match(const Tensor& cell_lat, const Tensor& cell_lon,
                                    double cell_time_s, std::span<const ObsPoint> points,
                                    const SphereIndex& index, const MatchConfig& config);

// Linear interpolation of a native-height profile onto the 72 layer midpoints
// (125 m, 375 m, ...). Outside the native span the value is 0; negatives clip
// to 0.
std::array<double, fields::kVolumeLayers> interpolate_profile(std::span<const double> heights_m,
                                                              std::span<const double> rates);

// One collocated training sample. mask is 1 where the volume is supervised.
struct MatchRecord {
  fields::SpectralScene scene;
  fields::PrecipVolume volume;
  fields::PWVStack pwv;
  Tensor mask;  // H x W in {0, 1}
  double scene_time_s = 0;
  int n_matched_points = 0;
  std::string provenance;
};

struct SceneSample {
  fields::SpectralScene scene;
  fields::PWVStack pwv;
  double time_s = 0;
};

// One record per scene with >= 1 matched point; pixels with multiple matches
// average their interpolated profiles; unmatched pixels are masked out.
// Output is ordered by scene time.
std::vector<MatchRecord> build_dataset(std::vector<SceneSample> scenes,
                                       std::span<const ObsPoint> points,
                                       const MatchConfig& config);

// Dataset directory: dataset.json plus per-record tensor files.
void save_records(const std::string& dir, const std::vector<MatchRecord>& records);
std::vector<MatchRecord> load_records(const std::string& dir);

// JSON-lines point files: one ObsPoint object per line.
std::vector<ObsPoint> load_points_jsonl(const std::string& path);
void save_points_jsonl(const std::string& path, std::span<const ObsPoint> points);

}  // namespace precip::collocate
