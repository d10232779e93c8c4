#pragma once

#include <string>
#include <vector>

#include "cbrec/volume.hpp"

namespace cbrec {

// 10*log10(1/MSE) for values on a unit data range; identical inputs give +inf.
double psnr(const Volume& x, const Volume& y);

// Volumetric SSIM with a 7^3 uniform window, K1=0.01, K2=0.03, L=1, averaged
// over all fully-interior window positions.
double ssim(const Volume& x, const Volume& y);

struct MetricCase {
  std::string label;
  double psnr_db = 0.0;
  double ssim = 0.0;
};

struct MetricReport {
  std::vector<MetricCase> cases;

  double mean_psnr() const;
  double stddev_psnr() const;
  double mean_ssim() const;
  double stddev_ssim() const;

  std::string to_csv() const;
  std::string to_text() const;
};

} // namespace cbrec
