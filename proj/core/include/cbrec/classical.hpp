#pragma once

#include <array>

#include "cbrec/projector.hpp"
#include "cbrec/volume.hpp"

namespace cbrec {

enum class RampFilter { RamLak, Hann };

RampFilter ramp_filter_from_string(const std::string& s);

struct FdkConfig {
  RampFilter filter = RampFilter::RamLak;
  std::array<int, 3> dims{64, 64, 64};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
};

enum class SartInit { Zero, Fdk };

struct SartConfig {
  int iterations = 30;        // full sweeps over all views
  double relaxation = 0.5;    // in (0, 2)
  SartInit init = SartInit::Zero;
  bool nonneg_clamp = true;
  std::array<int, 3> dims{64, 64, 64};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
};

// Feldkamp reconstruction: cosine weighting, per-row ramp filtering in the
// frequency domain (zero-padded to the next power of two >= 2W), then
// distance-weighted voxel-driven backprojection with angular step pi/N.
Volume fdk_reconstruct(const ProjectionSet& proj, const FdkConfig& cfg);

// Cyclic view-by-view relaxed updates with row/column normalization using the
// matched projector pair; division guarded by an epsilon floor.
Volume sart_reconstruct(const ProjectionSet& proj, const SartConfig& cfg);

namespace detail {
// In-place power-of-two FFT used by the ramp filter; exposed for tests.
void fft_pow2(std::vector<double>& re, std::vector<double>& im, bool inverse);
} // namespace detail

} // namespace cbrec
