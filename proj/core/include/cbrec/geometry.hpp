#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbrec/vec3.hpp"

namespace cbrec {

// Circular-orbit cone-beam scan. The source orbits in the z = 0 plane at
// radius dso_mm; the flat detector sits dsd_mm from the source, perpendicular
// to the source-origin axis. All distances in millimetres, angles in radians.
struct ScanGeometry {
  int n_views = 0;
  std::vector<double> angles;
  double dso_mm = 0.0;
  double dsd_mm = 0.0;
  int det_w = 0;
  int det_h = 0;
  double du_mm = 0.0;
  double dv_mm = 0.0;

  Vec3 source(int view) const;
  // Unit vector from the origin toward the source.
  Vec3 axis(int view) const;
  Vec3 det_center(int view) const;
  Vec3 det_u_axis(int view) const;
  Vec3 det_v_axis(int view) const; // always +z

  std::string to_json() const;
  static ScanGeometry from_json(const std::string& text);
};

// Continuous detector pixel coordinates; (0,0) is the center of pixel (0,0).
// May lie outside [0,W-1]x[0,H-1].
struct DetectorPoint {
  double u = 0.0;
  double v = 0.0;
};

struct AnglePerturbation {
  double offset_rad = 0.0;      // applied to every view
  double noise_bound_rad = 0.0; // per-view uniform noise in [-b, +b]
  double dso_noise_bound_mm = 0.0;
  uint64_t seed = 0;
};

struct DetectorSpec {
  int width = 256;
  int height = 256;
  double du_mm = 1.0;
  double dv_mm = 1.0;
};

// N source angles uniformly covering a half rotation, endpoint excluded:
// angle[i] = i*pi/N.
ScanGeometry make_uniform_geometry(int n_views, double dso_mm, double dsd_mm,
                                   const DetectorSpec& det);

void validate_geometry(const ScanGeometry& geom);

// Perspective projection of world point p onto the detector of `view`.
// Throws GeometryError when the ray cannot hit the detector going away from
// the source (p at/behind the source, or ray parallel to the detector plane).
DetectorPoint project_point(const ScanGeometry& geom, int view, const Vec3& p);

// Non-throwing variant for bulk loops; returns false on degenerate rays.
bool try_project_point(const ScanGeometry& geom, int view, const Vec3& p,
                       DetectorPoint* out);

// Shifted/noised copy; the input is left untouched.
ScanGeometry perturb_geometry(const ScanGeometry& geom, const AnglePerturbation& pert);

} // namespace cbrec
