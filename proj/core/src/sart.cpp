#include <algorithm>
#include <cmath>

#include "cbrec/classical.hpp"
#include "cbrec/errors.hpp"

namespace cbrec {

namespace {
constexpr double kNormFloor = 1e-8;
}

Volume sart_reconstruct(const ProjectionSet& proj, const SartConfig& cfg) {
  proj.validate();
  if (cfg.iterations < 1) throw ValidationError("sart: iterations must be >= 1");
  if (!(cfg.relaxation > 0.0) || !(cfg.relaxation < 2.0))
    throw ValidationError("sart: relaxation must lie in (0, 2)");

  const ScanGeometry& geom = proj.geom;
  const int N = geom.n_views;
  const int64_t pixels = proj.view_stride();

  Volume recon;
  if (cfg.init == SartInit::Fdk) {
    FdkConfig fdk;
    fdk.dims = cfg.dims;
    fdk.spacing = cfg.spacing;
    recon = fdk_reconstruct(proj, fdk);
  } else {
    recon = Volume::centered(cfg.dims, cfg.spacing);
  }

  // Row sums A_i*1 (ray chord lengths) and column sums A_i^T*1, cached per view.
  Volume ones = Volume::centered(cfg.dims, cfg.spacing);
  std::fill(ones.data.begin(), ones.data.end(), 1.0f);
  std::vector<std::vector<float>> row_sums(N);
  std::vector<Volume> col_sums(N);
  for (int i = 0; i < N; ++i) {
    row_sums[i].resize(size_t(pixels));
    forward_project_view(ones, geom, i, row_sums[i]);
    col_sums[i] = Volume::centered(cfg.dims, cfg.spacing);
    std::vector<float> unit(size_t(pixels), 1.0f);
    backproject_view_add(unit, geom, i, col_sums[i]);
  }

  std::vector<float> ray(size_t(pixels));
  for (int sweep = 0; sweep < cfg.iterations; ++sweep) {
    for (int i = 0; i < N; ++i) {
      forward_project_view(recon, geom, i, ray);
      const std::span<const float> b = proj.view_data(i);
      for (int64_t k = 0; k < pixels; ++k) {
        const double denom = std::max(double(row_sums[i][k]), kNormFloor);
        ray[k] = static_cast<float>((b[k] - ray[k]) / denom);
      }
      Volume update = Volume::centered(cfg.dims, cfg.spacing);
      backproject_view_add(ray, geom, i, update);
      const int64_t voxels = recon.voxel_count();
#pragma omp parallel for schedule(static)
      for (int64_t k = 0; k < voxels; ++k) {
        const double denom = std::max(double(col_sums[i].data[k]), kNormFloor);
        recon.data[k] += static_cast<float>(cfg.relaxation * update.data[k] / denom);
      }
    }
    if (cfg.nonneg_clamp)
      for (float& v : recon.data) v = std::max(v, 0.0f);
  }
  return recon;
}

} // namespace cbrec
