#include "cbrec/geometry.hpp"

#include <cmath>

#include "cbrec/errors.hpp"
#include "cbrec/rng.hpp"
#include <nlohmann/json.hpp>

namespace cbrec {

Vec3 ScanGeometry::source(int view) const {
  const double a = angles[view];
  return {dso_mm * std::cos(a), dso_mm * std::sin(a), 0.0};
}

Vec3 ScanGeometry::axis(int view) const {
  const double a = angles[view];
  return {std::cos(a), std::sin(a), 0.0};
}

Vec3 ScanGeometry::det_center(int view) const {
  return source(view) - dsd_mm * axis(view);
}

Vec3 ScanGeometry::det_u_axis(int view) const {
  const double a = angles[view];
  return {-std::sin(a), std::cos(a), 0.0};
}

Vec3 ScanGeometry::det_v_axis(int) const { return {0.0, 0.0, 1.0}; }

void validate_geometry(const ScanGeometry& geom) {
  if (geom.n_views < 1) throw ValidationError("geometry: n_views must be >= 1");
  if (static_cast<int>(geom.angles.size()) != geom.n_views)
    throw ValidationError("geometry: angles length does not match n_views");
  for (double a : geom.angles)
    if (!std::isfinite(a)) throw ValidationError("geometry: non-finite angle");
  if (!(geom.dso_mm > 0.0) || !(geom.dsd_mm > geom.dso_mm))
    throw ValidationError("geometry: need dsd > dso > 0");
  if (geom.det_w < 1 || geom.det_h < 1)
    throw ValidationError("geometry: detector must be at least 1x1 pixels");
  if (!(geom.du_mm > 0.0) || !(geom.dv_mm > 0.0))
    throw ValidationError("geometry: detector pitch must be positive");
}

ScanGeometry make_uniform_geometry(int n_views, double dso_mm, double dsd_mm,
                                   const DetectorSpec& det) {
  ScanGeometry g;
  g.n_views = n_views;
  g.dso_mm = dso_mm;
  g.dsd_mm = dsd_mm;
  g.det_w = det.width;
  g.det_h = det.height;
  g.du_mm = det.du_mm;
  g.dv_mm = det.dv_mm;
  if (n_views >= 1) {
    g.angles.resize(n_views);
    for (int i = 0; i < n_views; ++i) g.angles[i] = i * M_PI / n_views;
  }
  validate_geometry(g);
  return g;
}

bool try_project_point(const ScanGeometry& geom, int view, const Vec3& p,
                       DetectorPoint* out) {
  const Vec3 s = geom.source(view);
  const Vec3 w = geom.axis(view);
  const Vec3 d = p - s;
  const double dw = d.dot(w);
  // The detector plane is at s - dsd*w; the ray s + t*d meets it at
  // t = -dsd/dw, which must be positive (point on the source side).
  if (!(dw < 0.0)) return false;
  const double t = -geom.dsd_mm / dw;
  const Vec3 x = s + t * d;
  const Vec3 c = geom.det_center(view);
  const Vec3 rel = x - c;
  out->u = rel.dot(geom.det_u_axis(view)) / geom.du_mm + (geom.det_w - 1) * 0.5;
  out->v = rel.dot(geom.det_v_axis(view)) / geom.dv_mm + (geom.det_h - 1) * 0.5;
  return true;
}

DetectorPoint project_point(const ScanGeometry& geom, int view, const Vec3& p) {
  if (view < 0 || view >= geom.n_views)
    throw ValidationError("project_point: view index out of range");
  DetectorPoint dp;
  if (!try_project_point(geom, view, p, &dp))
    throw GeometryError("project_point: point at or behind the source");
  return dp;
}

ScanGeometry perturb_geometry(const ScanGeometry& geom, const AnglePerturbation& pert) {
  if (pert.noise_bound_rad < 0.0 || pert.dso_noise_bound_mm < 0.0)
    throw ValidationError("perturb_geometry: noise bounds must be >= 0");
  ScanGeometry g = geom;
  Rng rng(pert.seed);
  for (double& a : g.angles) {
    double eta = 0.0;
    if (pert.noise_bound_rad > 0.0)
      eta = rng.uniform(-pert.noise_bound_rad, pert.noise_bound_rad);
    a += pert.offset_rad + eta;
  }
  if (pert.dso_noise_bound_mm > 0.0) {
    const double shift = rng.uniform(-pert.dso_noise_bound_mm, pert.dso_noise_bound_mm);
    g.dso_mm += shift;
    g.dsd_mm += shift; // keep the source-detector distance fixed
  }
  return g;
}

std::string ScanGeometry::to_json() const {
  nlohmann::json j;
  j["n_views"] = n_views;
  std::vector<double> deg(angles.size());
  for (size_t i = 0; i < angles.size(); ++i) deg[i] = angles[i] * 180.0 / M_PI;
  j["angles_deg"] = deg;
  j["dso_mm"] = dso_mm;
  j["dsd_mm"] = dsd_mm;
  j["det_w"] = det_w;
  j["det_h"] = det_h;
  j["du_mm"] = du_mm;
  j["dv_mm"] = dv_mm;
  return j.dump(2);
}

ScanGeometry ScanGeometry::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("geometry json: ") + e.what());
  }
  ScanGeometry g;
  try {
    g.n_views = j.at("n_views").get<int>();
    const auto deg = j.at("angles_deg").get<std::vector<double>>();
    g.angles.resize(deg.size());
    for (size_t i = 0; i < deg.size(); ++i) g.angles[i] = deg[i] * M_PI / 180.0;
    g.dso_mm = j.at("dso_mm").get<double>();
    g.dsd_mm = j.at("dsd_mm").get<double>();
    g.det_w = j.at("det_w").get<int>();
    g.det_h = j.at("det_h").get<int>();
    g.du_mm = j.at("du_mm").get<double>();
    g.dv_mm = j.at("dv_mm").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("geometry json: ") + e.what());
  }
  validate_geometry(g);
  return g;
}

} // namespace cbrec
