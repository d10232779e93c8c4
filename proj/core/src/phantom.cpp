#include <algorithm>
#include <cmath>

#include "cbrec/errors.hpp"
#include "cbrec/rng.hpp"
#include "cbrec/volume.hpp"

namespace cbrec {

namespace {

struct Ellipsoid {
  double value;      // additive attenuation
  double a, b, c;    // semi-axes in the [-1,1] cube
  double x0, y0, z0; // center
  double phi_deg;    // rotation about z
};

// Standard 10-ellipsoid 3D head phantom (high-contrast variant).
constexpr Ellipsoid kHeadPhantom[] = {
    {1.0, 0.6900, 0.920, 0.810, 0.0, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.874, 0.780, 0.0, -0.0184, 0.0, 0.0},
    {-0.2, 0.1100, 0.310, 0.220, 0.22, 0.0, 0.0, -18.0},
    {-0.2, 0.1600, 0.410, 0.280, -0.22, 0.0, 0.0, 18.0},
    {0.1, 0.2100, 0.250, 0.410, 0.0, 0.35, -0.15, 0.0},
    {0.1, 0.0460, 0.046, 0.050, 0.0, 0.1, 0.25, 0.0},
    {0.1, 0.0460, 0.046, 0.050, 0.0, -0.1, 0.25, 0.0},
    {0.1, 0.0460, 0.023, 0.050, -0.08, -0.605, 0.0, 0.0},
    {0.1, 0.0230, 0.023, 0.020, 0.0, -0.606, 0.0, 0.0},
    {0.1, 0.0230, 0.046, 0.020, 0.06, -0.605, 0.0, 0.0},
};

double head_phantom_value(double x, double y, double z) {
  double v = 0.0;
  for (const Ellipsoid& e : kHeadPhantom) {
    const double phi = e.phi_deg * M_PI / 180.0;
    const double cx = x - e.x0, cy = y - e.y0, cz = z - e.z0;
    const double rx = std::cos(phi) * cx + std::sin(phi) * cy;
    const double ry = -std::sin(phi) * cx + std::cos(phi) * cy;
    const double q = (rx * rx) / (e.a * e.a) + (ry * ry) / (e.b * e.b) +
                     (cz * cz) / (e.c * e.c);
    if (q <= 1.0) v += e.value;
  }
  return std::clamp(v, 0.0, 1.0);
}

struct Sphere {
  Vec3 center;
  double radius;
  float value;
};

Volume make_spheres(std::array<int, 3> dims, std::array<double, 3> spacing,
                    uint64_t seed) {
  Volume vol = Volume::centered(dims, spacing);
  const auto ext = vol.extent_mm();
  const double min_ext = std::min({ext[0], ext[1], ext[2]});
  Rng rng(seed);
  std::vector<Sphere> spheres;
  const int target = 6;
  int attempts = 0;
  while (static_cast<int>(spheres.size()) < target && attempts < 1000) {
    ++attempts;
    Sphere s;
    s.radius = rng.uniform(0.07, 0.16) * min_ext;
    s.center = {rng.uniform(-0.5 * ext[0] + s.radius, 0.5 * ext[0] - s.radius),
                rng.uniform(-0.5 * ext[1] + s.radius, 0.5 * ext[1] - s.radius),
                rng.uniform(-0.5 * ext[2] + s.radius, 0.5 * ext[2] - s.radius)};
    s.value = static_cast<float>(rng.uniform(0.3, 1.0));
    bool overlaps = false;
    for (const Sphere& o : spheres)
      if ((s.center - o.center).norm() < s.radius + o.radius + 0.02 * min_ext) {
        overlaps = true;
        break;
      }
    if (!overlaps) spheres.push_back(s);
  }
  for (int z = 0; z < dims[2]; ++z)
    for (int y = 0; y < dims[1]; ++y)
      for (int x = 0; x < dims[0]; ++x) {
        const Vec3 p = vol.index_to_world(x, y, z);
        for (const Sphere& s : spheres)
          if ((p - s.center).norm() <= s.radius) {
            vol.at(x, y, z) = s.value;
            break;
          }
      }
  return vol;
}

} // namespace

PhantomKind phantom_kind_from_string(const std::string& s) {
  if (s == "shepp3d") return PhantomKind::Shepp3d;
  if (s == "spheres") return PhantomKind::Spheres;
  if (s == "constant") return PhantomKind::Constant;
  throw ValidationError("unsupported phantom kind: " + s);
}

Volume make_phantom(PhantomKind kind, std::array<int, 3> dims,
                    std::array<double, 3> spacing, uint64_t seed,
                    float constant_value) {
  switch (kind) {
    case PhantomKind::Constant: {
      Volume vol = Volume::centered(dims, spacing);
      std::fill(vol.data.begin(), vol.data.end(), constant_value);
      return vol;
    }
    case PhantomKind::Spheres:
      return make_spheres(dims, spacing, seed);
    case PhantomKind::Shepp3d: {
      if (dims[0] < 8 || dims[1] < 8 || dims[2] < 8)
        throw ValidationError("shepp3d phantom needs dims >= 8 per axis");
      Volume vol = Volume::centered(dims, spacing);
      const auto ext = vol.extent_mm();
      for (int z = 0; z < dims[2]; ++z)
        for (int y = 0; y < dims[1]; ++y)
          for (int x = 0; x < dims[0]; ++x) {
            const Vec3 p = vol.index_to_world(x, y, z);
            vol.at(x, y, z) = static_cast<float>(head_phantom_value(
                2.0 * p.x / ext[0], 2.0 * p.y / ext[1], 2.0 * p.z / ext[2]));
          }
      return vol;
    }
  }
  throw ValidationError("unsupported phantom kind");
}

} // namespace cbrec
