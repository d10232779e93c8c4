#include "cbrec/projector.hpp"

#include <algorithm>
#include <cmath>

#include "cbrec/errors.hpp"

namespace cbrec {

void ProjectionSet::validate() const {
  validate_geometry(geom);
  if (int64_t(data.size()) != view_stride() * geom.n_views)
    throw ValidationError("projections: data length does not match geometry");
}

double ray_step_mm(const Volume& vol) {
  return 0.5 * std::min({vol.spacing[0], vol.spacing[1], vol.spacing[2]});
}

namespace {

// Clip ray p + t*d against the interpolation support box of the volume
// (one voxel beyond the outermost centers, where zero extension tapers off).
bool clip_ray(const Volume& vol, const Vec3& p, const Vec3& d, double* t0, double* t1) {
  double lo = 0.0, hi = 1e300;
  const double ps[3] = {p.x, p.y, p.z};
  const double ds[3] = {d.x, d.y, d.z};
  for (int a = 0; a < 3; ++a) {
    const double box_lo = vol.origin[a] - vol.spacing[a];
    const double box_hi = vol.origin[a] + vol.dims[a] * vol.spacing[a];
    if (std::abs(ds[a]) < 1e-12) {
      if (ps[a] < box_lo || ps[a] > box_hi) return false;
      continue;
    }
    double ta = (box_lo - ps[a]) / ds[a];
    double tb = (box_hi - ps[a]) / ds[a];
    if (ta > tb) std::swap(ta, tb);
    lo = std::max(lo, ta);
    hi = std::min(hi, tb);
  }
  if (hi <= lo) return false;
  *t0 = lo;
  *t1 = hi;
  return true;
}

Vec3 pixel_world(const ScanGeometry& geom, int view, int u, int v) {
  return geom.det_center(view) +
         (u - (geom.det_w - 1) * 0.5) * geom.du_mm * geom.det_u_axis(view) +
         (v - (geom.det_h - 1) * 0.5) * geom.dv_mm * geom.det_v_axis(view);
}

// How many row-chunks a deterministic parallel backprojection uses. Fixed so
// the reduction order (and thus the result) does not depend on thread count.
constexpr int kBackprojChunks = 8;
// Above this accumulator footprint fall back to serial per-view splatting.
constexpr int64_t kMaxChunkBytes = int64_t(1) << 30;

void splat_ray(Volume& vol, const ScanGeometry& geom, int view, int u, int v,
               float ray_value, double step) {
  if (ray_value == 0.0f) return;
  const Vec3 s = geom.source(view);
  const Vec3 px = pixel_world(geom, view, u, v);
  Vec3 dir = px - s;
  const double len = dir.norm();
  dir = dir * (1.0 / len);
  double t0, t1;
  if (!clip_ray(vol, s, dir, &t0, &t1)) return;
  const int n = static_cast<int>((t1 - t0) / step);
  const double w = double(ray_value) * step;
  const int nx = vol.dims[0], ny = vol.dims[1], nz = vol.dims[2];
  for (int k = 0; k < n; ++k) {
    const double t = t0 + (k + 0.5) * step;
    const Vec3 q = vol.world_to_index(s + t * dir);
    const double fx = std::floor(q.x), fy = std::floor(q.y), fz = std::floor(q.z);
    const int ix = int(fx), iy = int(fy), iz = int(fz);
    const double tx = q.x - fx, ty = q.y - fy, tz = q.z - fz;
    for (int c = 0; c < 8; ++c) {
      const int dx = c & 1, dy = (c >> 1) & 1, dz = (c >> 2) & 1;
      const int xi = ix + dx, yi = iy + dy, zi = iz + dz;
      if (xi < 0 || xi >= nx || yi < 0 || yi >= ny || zi < 0 || zi >= nz) continue;
      const double wt = (dx ? tx : 1 - tx) * (dy ? ty : 1 - ty) * (dz ? tz : 1 - tz);
      vol.at(xi, yi, zi) += static_cast<float>(w * wt);
    }
  }
}

} // namespace

void forward_project_view(const Volume& vol, const ScanGeometry& geom, int view,
                          std::span<float> out) {
  const double step = ray_step_mm(vol);
  const Vec3 s = geom.source(view);
  const int W = geom.det_w, H = geom.det_h;
#pragma omp parallel for schedule(static)
  for (int v = 0; v < H; ++v) {
    for (int u = 0; u < W; ++u) {
      const Vec3 px = pixel_world(geom, view, u, v);
      Vec3 dir = px - s;
      dir = dir * (1.0 / dir.norm());
      double t0, t1, acc = 0.0;
      if (clip_ray(vol, s, dir, &t0, &t1)) {
        const int n = static_cast<int>((t1 - t0) / step);
        for (int k = 0; k < n; ++k) {
          const double t = t0 + (k + 0.5) * step;
          const Vec3 q = vol.world_to_index(s + t * dir);
          double val;
          interp3(vol.data, 1, vol.dims[2], vol.dims[1], vol.dims[0], q.x, q.y,
                  q.z, {&val, 1});
          acc += val;
        }
      }
      out[u + int64_t(W) * v] = static_cast<float>(acc * step);
    }
  }
}

ProjectionSet forward_project(const Volume& vol, const ScanGeometry& geom) {
  validate_geometry(geom);
  vol.validate();
  ProjectionSet proj;
  proj.geom = geom;
  proj.data.resize(size_t(proj.view_stride()) * geom.n_views);
  for (int i = 0; i < geom.n_views; ++i)
    forward_project_view(vol, geom, i, proj.view_data(i));
  return proj;
}

void backproject_view_add(std::span<const float> proj_view, const ScanGeometry& geom,
                          int view, Volume& accum) {
  const double step = ray_step_mm(accum);
  const int W = geom.det_w, H = geom.det_h;
  const int64_t chunk_bytes = accum.voxel_count() * int64_t(sizeof(float)) * kBackprojChunks;
  if (chunk_bytes > kMaxChunkBytes) {
    for (int v = 0; v < H; ++v)
      for (int u = 0; u < W; ++u)
        splat_ray(accum, geom, view, u, v, proj_view[u + int64_t(W) * v], step);
    return;
  }
  std::vector<Volume> parts(kBackprojChunks);
#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < kBackprojChunks; ++c) {
    parts[c] = Volume::centered(accum.dims, accum.spacing);
    parts[c].origin = accum.origin;
    const int v_begin = int(int64_t(H) * c / kBackprojChunks);
    const int v_end = int(int64_t(H) * (c + 1) / kBackprojChunks);
    for (int v = v_begin; v < v_end; ++v)
      for (int u = 0; u < W; ++u)
        splat_ray(parts[c], geom, view, u, v, proj_view[u + int64_t(W) * v], step);
  }
  for (int c = 0; c < kBackprojChunks; ++c)
    for (int64_t i = 0; i < accum.voxel_count(); ++i)
      accum.data[i] += parts[c].data[i];
}

Volume ray_backproject(const ProjectionSet& proj, std::array<int, 3> dims,
                       std::array<double, 3> spacing) {
  proj.validate();
  Volume vol = Volume::centered(dims, spacing);
  for (int i = 0; i < proj.geom.n_views; ++i)
    backproject_view_add(proj.view_data(i), proj.geom, i, vol);
  return vol;
}

FeatureVolume backproject_features(const FeatureMaps& maps, const FeatureVolumeSpec& space,
                                   const ScanGeometry& geom) {
  if (static_cast<int>(maps.views.size()) != geom.n_views)
    throw ValidationError("backproject_features: view count mismatch");
  if (space.resolution < 1 || !(space.extent_mm > 0.0))
    throw ValidationError("backproject_features: bad grid spec");
  FeatureVolume out;
  out.channels = maps.channels;
  out.resolution = space.resolution;
  out.extent_mm = space.extent_mm;
  const int r = space.resolution, C = maps.channels;
  const int64_t cells = int64_t(r) * r * r;
  out.grid.assign(size_t(cells) * C, 0.0f);
#pragma omp parallel for schedule(static)
  for (int64_t cell = 0; cell < cells; ++cell) {
    const int x = int(cell % r), y = int((cell / r) % r), z = int(cell / (int64_t(r) * r));
    const Vec3 q = out.cell_center(x, y, z);
    std::vector<double> best(C, 0.0), cur(C, 0.0);
    bool first = true;
    for (int i = 0; i < geom.n_views; ++i) {
      DetectorPoint dp;
      std::fill(cur.begin(), cur.end(), 0.0);
      if (try_project_point(geom, i, q, &dp)) {
        const double uf = rescale_detector_coord(dp.u, geom.det_w, maps.width);
        const double vf = rescale_detector_coord(dp.v, geom.det_h, maps.height);
        interp2(maps.views[i], C, maps.height, maps.width, uf, vf, cur);
      }
      if (first) {
        best = cur;
        first = false;
      } else {
        for (int c = 0; c < C; ++c) best[c] = std::max(best[c], cur[c]);
      }
    }
    for (int c = 0; c < C; ++c)
      out.grid[cell + int64_t(c) * cells] = static_cast<float>(best[c]);
  }
  return out;
}

} // namespace cbrec
