#include "cbrec/volume.hpp"

#include <cmath>
#include <string>

#include "cbrec/errors.hpp"

namespace cbrec {

void interp2(std::span<const float> field, int channels, int h, int w,
             double x, double y, std::span<double> out) {
  const double fx = std::floor(x), fy = std::floor(y);
  const int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
  const double tx = x - fx, ty = y - fy;
  for (int c = 0; c < channels; ++c) out[c] = 0.0;
  const double wts[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
  const int xs[4] = {ix, ix + 1, ix, ix + 1};
  const int ys[4] = {iy, iy, iy + 1, iy + 1};
  for (int k = 0; k < 4; ++k) {
    if (xs[k] < 0 || xs[k] >= w || ys[k] < 0 || ys[k] >= h || wts[k] == 0.0) continue;
    const int64_t base = xs[k] + int64_t(w) * ys[k];
    for (int c = 0; c < channels; ++c)
      out[c] += wts[k] * field[base + int64_t(c) * w * h];
  }
}

void interp3(std::span<const float> field, int channels, int d, int h, int w,
             double x, double y, double z, std::span<double> out) {
  const double fx = std::floor(x), fy = std::floor(y), fz = std::floor(z);
  const int ix = static_cast<int>(fx), iy = static_cast<int>(fy), iz = static_cast<int>(fz);
  const double tx = x - fx, ty = y - fy, tz = z - fz;
  for (int c = 0; c < channels; ++c) out[c] = 0.0;
  for (int k = 0; k < 8; ++k) {
    const int dx = k & 1, dy = (k >> 1) & 1, dz = (k >> 2) & 1;
    const int xi = ix + dx, yi = iy + dy, zi = iz + dz;
    if (xi < 0 || xi >= w || yi < 0 || yi >= h || zi < 0 || zi >= d) continue;
    const double wt = (dx ? tx : 1 - tx) * (dy ? ty : 1 - ty) * (dz ? tz : 1 - tz);
    if (wt == 0.0) continue;
    const int64_t base = xi + int64_t(w) * (yi + int64_t(h) * zi);
    for (int c = 0; c < channels; ++c)
      out[c] += wt * field[base + int64_t(c) * w * h * d];
  }
}

Volume Volume::centered(std::array<int, 3> dims, std::array<double, 3> spacing) {
  Volume v;
  v.dims = dims;
  v.spacing = spacing;
  for (int a = 0; a < 3; ++a) v.origin[a] = -0.5 * (dims[a] - 1) * spacing[a];
  v.data.assign(size_t(v.voxel_count()), 0.0f);
  v.validate();
  return v;
}

void Volume::validate() const {
  for (int a = 0; a < 3; ++a) {
    if (dims[a] < 1) throw ValidationError("volume: dims must be >= 1");
    if (!(spacing[a] > 0.0)) throw ValidationError("volume: spacing must be positive");
    if (!std::isfinite(origin[a])) throw ValidationError("volume: non-finite origin");
  }
  if (int64_t(data.size()) != voxel_count())
    throw ValidationError("volume: data length " + std::to_string(data.size()) +
                          " does not match dims");
}

double Volume::sample_world(const Vec3& p) const {
  const Vec3 idx = world_to_index(p);
  double out = 0.0;
  interp3(data, 1, dims[2], dims[1], dims[0], idx.x, idx.y, idx.z, {&out, 1});
  return out;
}

PointBatch sample_field(const Volume& vol, const PointBatch& points) {
  PointBatch out;
  out.points = points.points;
  out.values.resize(points.points.size());
  for (size_t i = 0; i < points.points.size(); ++i)
    out.values[i] = static_cast<float>(vol.sample_world(points.points[i]));
  return out;
}

Volume resample_to_cube(const Volume& vol, int size, double iso_spacing_mm) {
  if (size < 2) throw ValidationError("resample_to_cube: size must be >= 2");
  if (!(iso_spacing_mm > 0.0))
    throw ValidationError("resample_to_cube: spacing must be positive");
  Volume out;
  out.dims = {size, size, size};
  out.spacing = {iso_spacing_mm, iso_spacing_mm, iso_spacing_mm};
  const Vec3 c = vol.center();
  out.origin = {c.x - 0.5 * (size - 1) * iso_spacing_mm,
                c.y - 0.5 * (size - 1) * iso_spacing_mm,
                c.z - 0.5 * (size - 1) * iso_spacing_mm};
  out.data.resize(size_t(out.voxel_count()));
  for (int z = 0; z < size; ++z)
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x)
        out.at(x, y, z) =
            static_cast<float>(vol.sample_world(out.index_to_world(x, y, z)));
  return out;
}

} // namespace cbrec
