#pragma once

#include <span>
#include <vector>

#include "cbrec/geometry.hpp"
#include "cbrec/volume.hpp"

namespace cbrec {

// N-view line-integral measurements with their acquisition geometry.
// data is view-major: index = u + W*(v + H*view).
struct ProjectionSet {
  ScanGeometry geom;
  std::vector<float> data;

  int64_t view_stride() const { return int64_t(geom.det_w) * geom.det_h; }
  std::span<float> view_data(int view) {
    return {data.data() + view * view_stride(), size_t(view_stride())};
  }
  std::span<const float> view_data(int view) const {
    return {data.data() + view * view_stride(), size_t(view_stride())};
  }
  float& at(int view, int v, int u) {
    return data[u + int64_t(geom.det_w) * (v + int64_t(geom.det_h) * view)];
  }
  float at(int view, int v, int u) const {
    return data[u + int64_t(geom.det_w) * (v + int64_t(geom.det_h) * view)];
  }
  void validate() const;
};

// Per-view 2D feature maps sharing one channel count and resolution.
// Each view is stored [C][h][w], w fastest.
struct FeatureMaps {
  int channels = 0;
  int height = 0;
  int width = 0;
  int scale = 1; // 1-based scale tag
  std::vector<std::vector<float>> views;
};

// C-channel voxel grid over a cube of side extent_mm centered on the origin.
// Layout [C][r][r][r], x fastest within a channel.
struct FeatureVolume {
  int channels = 0;
  int resolution = 0;
  double extent_mm = 0.0;
  std::vector<float> grid;

  // World position of the centroid of cell (x,y,z).
  Vec3 cell_center(int x, int y, int z) const {
    const double step = extent_mm / resolution;
    return {-0.5 * extent_mm + (x + 0.5) * step,
            -0.5 * extent_mm + (y + 0.5) * step,
            -0.5 * extent_mm + (z + 0.5) * step};
  }
  // Continuous grid index of a world point for trilinear queries.
  Vec3 world_to_grid(const Vec3& p) const {
    const double step = extent_mm / resolution;
    return {(p.x + 0.5 * extent_mm) / step - 0.5,
            (p.y + 0.5 * extent_mm) / step - 0.5,
            (p.z + 0.5 * extent_mm) / step - 0.5};
  }
};

struct FeatureVolumeSpec {
  int resolution = 16;
  double extent_mm = 0.0;
};

// Integration step for rays through `vol`: half the smallest voxel pitch.
double ray_step_mm(const Volume& vol);

// Map a detector pixel coordinate to feature-map pixels (resolution w vs
// full detector W); centers map to centers.
inline double rescale_detector_coord(double coord, int full, int reduced) {
  return (coord + 0.5) * (double(reduced) / double(full)) - 0.5;
}

// Discretized line integrals from each source through each detector pixel
// center, sampled with trilinear interpolation at the fixed ray step.
ProjectionSet forward_project(const Volume& vol, const ScanGeometry& geom);

// Single-view A_i * vol, written into out (size det_w*det_h).
void forward_project_view(const Volume& vol, const ScanGeometry& geom, int view,
                          std::span<float> out);

// Exact adjoint of forward_project onto a centered dims/spacing grid: splats
// every ray sample into its 8 surrounding voxels with the same trilinear
// weights and step length used by the forward pass.
Volume ray_backproject(const ProjectionSet& proj, std::array<int, 3> dims,
                       std::array<double, 3> spacing);

// Single-view adjoint accumulation: accum += A_i^T * proj_view.
void backproject_view_add(std::span<const float> proj_view, const ScanGeometry& geom,
                          int view, Volume& accum);

// Voxel-aligned feature aggregation: each cell centroid is projected into
// every view, the per-view maps are sampled bilinearly (zero outside), and
// the results are combined by elementwise max over views.
FeatureVolume backproject_features(const FeatureMaps& maps, const FeatureVolumeSpec& space,
                                   const ScanGeometry& geom);

} // namespace cbrec
