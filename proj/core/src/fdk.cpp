#include <cmath>

#include "cbrec/classical.hpp"
#include "cbrec/errors.hpp"

namespace cbrec {

RampFilter ramp_filter_from_string(const std::string& s) {
  if (s == "ramlak" || s == "ram-lak") return RampFilter::RamLak;
  if (s == "hann") return RampFilter::Hann;
  throw ValidationError("unknown ramp filter: " + s);
}

namespace detail {

void fft_pow2(std::vector<double>& re, std::vector<double>& im, bool inverse) {
  const size_t n = re.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw ValidationError("fft_pow2: length must be a power of two");
  // Bit-reversal permutation.
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / double(len);
    const double wr = std::cos(ang), wi = std::sin(ang);
    for (size_t i = 0; i < n; i += len) {
      double cur_r = 1.0, cur_i = 0.0;
      for (size_t k = 0; k < len / 2; ++k) {
        const size_t a = i + k, b = i + k + len / 2;
        const double tr = re[b] * cur_r - im[b] * cur_i;
        const double ti = re[b] * cur_i + im[b] * cur_r;
        re[b] = re[a] - tr;
        im[b] = im[a] - ti;
        re[a] += tr;
        im[a] += ti;
        const double nr = cur_r * wr - cur_i * wi;
        cur_i = cur_r * wi + cur_i * wr;
        cur_r = nr;
      }
    }
  }
  if (inverse) {
    for (size_t i = 0; i < n; ++i) {
      re[i] /= double(n);
      im[i] /= double(n);
    }
  }
}

} // namespace detail

namespace {

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Frequency response of the discrete ramp kernel (band-limited |f|), built by
// transforming the standard spatial-domain impulse response. The kernel is
// unitless here; detector pitch scaling is applied by the caller.
std::vector<double> ramp_response(size_t padded, RampFilter filter) {
  std::vector<double> re(padded, 0.0), im(padded, 0.0);
  re[0] = 0.25;
  for (size_t j = 1; j < padded; ++j) {
    const size_t dist = std::min(j, padded - j);
    if (dist % 2 == 1) re[j] = -1.0 / (M_PI * M_PI * double(dist) * double(dist));
  }
  detail::fft_pow2(re, im, false);
  // The response of a real symmetric kernel is real; drop rounding residue.
  std::vector<double> resp(padded);
  for (size_t j = 0; j < padded; ++j) {
    double w = 1.0;
    if (filter == RampFilter::Hann)
      w = 0.5 * (1.0 + std::cos(2.0 * M_PI * double(j) / double(padded)));
    resp[j] = re[j] * w;
  }
  return resp;
}

} // namespace

Volume fdk_reconstruct(const ProjectionSet& proj, const FdkConfig& cfg) {
  proj.validate();
  const ScanGeometry& geom = proj.geom;
  const int N = geom.n_views, W = geom.det_w, H = geom.det_h;
  const size_t padded = next_pow2(size_t(2) * W);
  const std::vector<double> resp = ramp_response(padded, cfg.filter);

  // Cosine-weight and ramp-filter every detector row of every view.
  std::vector<float> filtered(size_t(N) * H * W);
  const double row_scale = geom.dsd_mm / (geom.dso_mm * geom.du_mm);
#pragma omp parallel for collapse(2) schedule(static)
  for (int i = 0; i < N; ++i) {
    for (int v = 0; v < H; ++v) {
      std::vector<double> re(padded, 0.0), im(padded, 0.0);
      const double v_mm = (v - (H - 1) * 0.5) * geom.dv_mm;
      for (int u = 0; u < W; ++u) {
        const double u_mm = (u - (W - 1) * 0.5) * geom.du_mm;
        const double cosw =
            geom.dsd_mm / std::sqrt(geom.dsd_mm * geom.dsd_mm + u_mm * u_mm + v_mm * v_mm);
        re[u] = cosw * proj.at(i, v, u);
      }
      detail::fft_pow2(re, im, false);
      for (size_t j = 0; j < padded; ++j) {
        re[j] *= resp[j];
        im[j] *= resp[j];
      }
      detail::fft_pow2(re, im, true);
      for (int u = 0; u < W; ++u)
        filtered[u + size_t(W) * (v + size_t(H) * i)] =
            static_cast<float>(re[u] * row_scale);
    }
  }

  // Distance-weighted voxel-driven backprojection.
  Volume out = Volume::centered(cfg.dims, cfg.spacing);
  const double dbeta = M_PI / N;
  const int nx = cfg.dims[0], ny = cfg.dims[1], nz = cfg.dims[2];
#pragma omp parallel for schedule(static)
  for (int z = 0; z < nz; ++z) {
    std::vector<double> sample(1);
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) {
        const Vec3 p = out.index_to_world(x, y, z);
        double acc = 0.0;
        for (int i = 0; i < N; ++i) {
          DetectorPoint dp;
          if (!try_project_point(geom, i, p, &dp)) continue;
          const double depth = geom.dso_mm - p.dot(geom.axis(i));
          if (depth <= 0.0) continue;
          const float* view = filtered.data() + size_t(i) * H * W;
          interp2({view, size_t(H) * W}, 1, H, W, dp.u, dp.v, sample);
          const double weight = (geom.dso_mm / depth) * (geom.dso_mm / depth);
          acc += weight * sample[0];
        }
        out.at(x, y, z) = static_cast<float>(acc * dbeta);
      }
  }
  return out;
}

} // namespace cbrec
