#include "cbrec/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cbrec/errors.hpp"

namespace cbrec {

namespace {

void require_same_dims(const Volume& x, const Volume& y, const char* op) {
  if (x.dims != y.dims)
    throw ValidationError(std::string(op) + ": volume dimensions differ");
}

// Sliding-window sums over a w^3 box, valid positions only. Separable: one
// running-sum pass per axis.
std::vector<double> box_sums(const std::vector<double>& in, int nx, int ny, int nz,
                             int w, int* ox, int* oy, int* oz) {
  *ox = nx - w + 1;
  *oy = ny - w + 1;
  *oz = nz - w + 1;
  std::vector<double> a(size_t(*ox) * ny * nz);
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y) {
      const double* row = in.data() + size_t(nx) * (y + size_t(ny) * z);
      double* orow = a.data() + size_t(*ox) * (y + size_t(ny) * z);
      double run = 0.0;
      for (int x = 0; x < w; ++x) run += row[x];
      orow[0] = run;
      for (int x = 1; x < *ox; ++x) {
        run += row[x + w - 1] - row[x - 1];
        orow[x] = run;
      }
    }
  std::vector<double> b(size_t(*ox) * *oy * nz);
  for (int z = 0; z < nz; ++z)
    for (int x = 0; x < *ox; ++x) {
      double run = 0.0;
      for (int y = 0; y < w; ++y) run += a[x + size_t(*ox) * (y + size_t(ny) * z)];
      b[x + size_t(*ox) * (0 + size_t(*oy) * z)] = run;
      for (int y = 1; y < *oy; ++y) {
        run += a[x + size_t(*ox) * (y + w - 1 + size_t(ny) * z)] -
               a[x + size_t(*ox) * (y - 1 + size_t(ny) * z)];
        b[x + size_t(*ox) * (y + size_t(*oy) * z)] = run;
      }
    }
  std::vector<double> c(size_t(*ox) * *oy * *oz);
  for (int y = 0; y < *oy; ++y)
    for (int x = 0; x < *ox; ++x) {
      double run = 0.0;
      for (int z = 0; z < w; ++z) run += b[x + size_t(*ox) * (y + size_t(*oy) * z)];
      c[x + size_t(*ox) * (y + size_t(*oy) * 0)] = run;
      for (int z = 1; z < *oz; ++z) {
        run += b[x + size_t(*ox) * (y + size_t(*oy) * (z + w - 1))] -
               b[x + size_t(*ox) * (y + size_t(*oy) * (z - 1))];
        c[x + size_t(*ox) * (y + size_t(*oy) * z)] = run;
      }
    }
  return c;
}

} // namespace

double psnr(const Volume& x, const Volume& y) {
  require_same_dims(x, y, "psnr");
  double sq = 0.0;
  for (size_t i = 0; i < x.data.size(); ++i) {
    const double d = double(x.data[i]) - double(y.data[i]);
    sq += d * d;
  }
  const double mse = sq / double(x.data.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const Volume& x, const Volume& y) {
  require_same_dims(x, y, "ssim");
  constexpr int kWin = 7;
  constexpr double kC1 = 0.01 * 0.01; // (K1*L)^2
  constexpr double kC2 = 0.03 * 0.03; // (K2*L)^2
  for (int a = 0; a < 3; ++a)
    if (x.dims[a] < kWin)
      throw ValidationError("ssim: volume smaller than the 7^3 window");

  const int nx = x.dims[0], ny = x.dims[1], nz = x.dims[2];
  const size_t n = x.data.size();
  std::vector<double> xs(n), ys(n), xx(n), yy(n), xy(n);
  for (size_t i = 0; i < n; ++i) {
    const double a = x.data[i], b = y.data[i];
    xs[i] = a;
    ys[i] = b;
    xx[i] = a * a;
    yy[i] = b * b;
    xy[i] = a * b;
  }
  int ox, oy, oz;
  const auto sx = box_sums(xs, nx, ny, nz, kWin, &ox, &oy, &oz);
  const auto sy = box_sums(ys, nx, ny, nz, kWin, &ox, &oy, &oz);
  const auto sxx = box_sums(xx, nx, ny, nz, kWin, &ox, &oy, &oz);
  const auto syy = box_sums(yy, nx, ny, nz, kWin, &ox, &oy, &oz);
  const auto sxy = box_sums(xy, nx, ny, nz, kWin, &ox, &oy, &oz);

  const double inv_n = 1.0 / double(kWin * kWin * kWin);
  double acc = 0.0;
  for (size_t i = 0; i < sx.size(); ++i) {
    const double mx = sx[i] * inv_n, my = sy[i] * inv_n;
    const double vx = sxx[i] * inv_n - mx * mx;
    const double vy = syy[i] * inv_n - my * my;
    const double cov = sxy[i] * inv_n - mx * my;
    const double num = (2.0 * mx * my + kC1) * (2.0 * cov + kC2);
    const double den = (mx * mx + my * my + kC1) * (vx + vy + kC2);
    acc += num / den;
  }
  return acc / double(sx.size());
}

double MetricReport::mean_psnr() const {
  double s = 0.0;
  for (const auto& c : cases) s += c.psnr_db;
  return cases.empty() ? 0.0 : s / double(cases.size());
}

double MetricReport::mean_ssim() const {
  double s = 0.0;
  for (const auto& c : cases) s += c.ssim;
  return cases.empty() ? 0.0 : s / double(cases.size());
}

double MetricReport::stddev_psnr() const {
  if (cases.size() < 2) return 0.0;
  const double m = mean_psnr();
  double s = 0.0;
  for (const auto& c : cases) s += (c.psnr_db - m) * (c.psnr_db - m);
  return std::sqrt(s / double(cases.size() - 1));
}

double MetricReport::stddev_ssim() const {
  if (cases.size() < 2) return 0.0;
  const double m = mean_ssim();
  double s = 0.0;
  for (const auto& c : cases) s += (c.ssim - m) * (c.ssim - m);
  return std::sqrt(s / double(cases.size() - 1));
}

std::string MetricReport::to_csv() const {
  std::ostringstream os;
  os << "label,psnr_db,ssim\n";
  for (const auto& c : cases) os << c.label << "," << c.psnr_db << "," << c.ssim << "\n";
  if (!cases.empty()) {
    os << "mean," << mean_psnr() << "," << mean_ssim() << "\n";
    os << "stddev," << stddev_psnr() << "," << stddev_ssim() << "\n";
  }
  return os.str();
}

std::string MetricReport::to_text() const {
  std::ostringstream os;
  os << "  label                 PSNR (dB)      SSIM\n";
  char buf[128];
  for (const auto& c : cases) {
    std::snprintf(buf, sizeof(buf), "  %-20s %9.2f  %8.4f\n", c.label.c_str(),
                  c.psnr_db, c.ssim);
    os << buf;
  }
  if (!cases.empty()) {
    std::snprintf(buf, sizeof(buf), "  %-20s %9.2f  %8.4f\n", "mean", mean_psnr(),
                  mean_ssim());
    os << buf;
  }
  return os.str();
}

} // namespace cbrec
