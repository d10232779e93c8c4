#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cbrec/vec3.hpp"

namespace cbrec {

// Multilinear interpolation over a C-channel grid with zero extension: grid
// nodes outside the array contribute zero, so values taper linearly to zero
// within one cell of the border and vanish beyond it. Coordinates are
// continuous node indices; x runs along the fastest axis.
void interp2(std::span<const float> field, int channels, int h, int w,
             double x, double y, std::span<double> out);
void interp3(std::span<const float> field, int channels, int d, int h, int w,
             double x, double y, double z, std::span<double> out);

// 3D attenuation grid. data is x-fastest: index = x + nx*(y + ny*z).
// origin is the world position of the center of voxel (0,0,0).
struct Volume {
  std::array<int, 3> dims{0, 0, 0};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  std::vector<float> data;

  // Zero volume whose physical box is centered on the world origin.
  static Volume centered(std::array<int, 3> dims, std::array<double, 3> spacing);

  int64_t voxel_count() const {
    return int64_t(dims[0]) * dims[1] * dims[2];
  }
  float& at(int x, int y, int z) {
    return data[x + int64_t(dims[0]) * (y + int64_t(dims[1]) * z)];
  }
  float at(int x, int y, int z) const {
    return data[x + int64_t(dims[0]) * (y + int64_t(dims[1]) * z)];
  }

  Vec3 index_to_world(double ix, double iy, double iz) const {
    return {origin[0] + ix * spacing[0], origin[1] + iy * spacing[1],
            origin[2] + iz * spacing[2]};
  }
  Vec3 world_to_index(const Vec3& p) const {
    return {(p.x - origin[0]) / spacing[0], (p.y - origin[1]) / spacing[1],
            (p.z - origin[2]) / spacing[2]};
  }
  // Physical box size per axis, dims*spacing (half a voxel beyond the
  // outermost voxel centers on each side).
  std::array<double, 3> extent_mm() const {
    return {dims[0] * spacing[0], dims[1] * spacing[1], dims[2] * spacing[2]};
  }
  Vec3 center() const {
    return index_to_world((dims[0] - 1) * 0.5, (dims[1] - 1) * 0.5, (dims[2] - 1) * 0.5);
  }
  double diagonal_mm() const {
    const auto e = extent_mm();
    return std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
  }

  // Trilinear sample at a world position; zero outside.
  double sample_world(const Vec3& p) const;

  void validate() const;
};

// Points in world mm with optional per-point attenuation values.
struct PointBatch {
  std::vector<Vec3> points;
  std::vector<float> values; // empty or same length as points

  bool has_values() const { return !values.empty(); }
};

// values[i] = trilinear sample of vol at points[i] (zero outside the extent).
PointBatch sample_field(const Volume& vol, const PointBatch& points);

enum class PhantomKind { Shepp3d, Spheres, Constant };

PhantomKind phantom_kind_from_string(const std::string& s);

// shepp3d: the standard 10-ellipsoid 3D head phantom, clamped to [0,1].
// spheres: seeded non-overlapping random spheres on a zero background.
// constant: uniform constant_value everywhere.
Volume make_phantom(PhantomKind kind, std::array<int, 3> dims,
                    std::array<double, 3> spacing, uint64_t seed = 17,
                    float constant_value = 0.3f);

// Trilinear resample onto a size^3 grid with isotropic spacing, centered on
// the input volume's center; missing data padded with zero.
Volume resample_to_cube(const Volume& vol, int size, double iso_spacing_mm);

} // namespace cbrec
