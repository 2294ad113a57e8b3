#pragma once

// Planar scene construction from rectangular strip primitives, and the
// support-mask helpers used to score reconstructions against a scene.

#include <cmath>
#include <complex>
#include <vector>

#include "mwholo/field.hpp"
#include "mwholo/wave.hpp"

namespace mwholo {

/// Rectangle centred at (cx, cy) mm relative to the aperture centre, of size
/// length x width mm, rotated counter-clockwise by angle_deg.
template <typename T>
struct RectStrip {
  T cx{};
  T cy{};
  T length{};
  T width{};
  T angle_deg{};
  std::complex<T> reflectivity{1};
};

/// Physical coordinate (mm) of sample index i on an axis, origin at the aperture centre.
inline double sample_coordinate(Index i, Index n, double d) { return (static_cast<double>(i) - (n - 1) / 2.0) * d; }

template <typename T>
bool contains(const RectStrip<T>& r, T x, T y) {
  const T a = r.angle_deg * T(EIGEN_PI) / T(180);
  const T u = (x - r.cx) * std::cos(a) + (y - r.cy) * std::sin(a);
  const T v = -(x - r.cx) * std::sin(a) + (y - r.cy) * std::cos(a);
  return std::abs(u) <= r.length / T(2) && std::abs(v) <= r.width / T(2);
}

/// Paints a strip over existing content; a pixel belongs to it when its centre does.
template <typename T>
void paint(ComplexField<T>& reflectivity, const RectStrip<T>& strip) {
  const ScanGrid& g = reflectivity.grid();
  for (Index n = 0; n < g.ny; ++n) {
    const T y = static_cast<T>(sample_coordinate(n, g.ny, g.dy));
    for (Index m = 0; m < g.nx; ++m) {
      if (contains(strip, static_cast<T>(sample_coordinate(m, g.nx, g.dx)), y)) reflectivity(m, n) = strip.reflectivity;
    }
  }
}

template <typename T>
ComplexField<T> rasterize(const ScanGrid& grid, const std::vector<RectStrip<T>>& strips) {
  ComplexField<T> r(grid);
  for (const auto& s : strips) paint(r, s);
  return r;
}

/// Two 185 mm x 25 mm strips crossed at +/-45 degrees about the aperture centre.
template <typename T>
std::vector<RectStrip<T>> x_strips() {
  return {{T(0), T(0), T(185), T(25), T(45)}, {T(0), T(0), T(185), T(25), T(-45)}};
}

using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
Mask support_mask(const ComplexField<T>& reflectivity) {
  return reflectivity.samples().abs() > T(0);
}

/// 8-connected dilation by `pixels`.
inline Mask dilate(const Mask& mask, Index pixels = 1) {
  Mask out = mask;
  for (Index r = 0; r < mask.rows(); ++r) {
    for (Index c = 0; c < mask.cols(); ++c) {
      if (!mask(r, c)) continue;
      for (Index dr = -pixels; dr <= pixels; ++dr) {
        for (Index dc = -pixels; dc <= pixels; ++dc) {
          const Index rr = r + dr;
          const Index cc = c + dc;
          if (rr >= 0 && rr < mask.rows() && cc >= 0 && cc < mask.cols()) out(rr, cc) = true;
        }
      }
    }
  }
  return out;
}

/// Fraction of sum(amplitude^2) falling inside `mask`; 0 for an all-zero image.
template <typename T>
T energy_fraction_in(const RealField<T>& amplitude, const Mask& mask) {
  const auto energy = amplitude.samples().square();
  const T total = energy.sum();
  if (!(total > T(0))) return T(0);
  return mask.select(energy, T(0)).sum() / total;
}

}  // namespace mwholo
