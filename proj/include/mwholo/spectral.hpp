#pragma once

// Hologram spectrum, diffraction-order location and +1 order demodulation.
//
// All spectra exchanged here use the centered layout (DC at index
// (floor(nx/2), floor(ny/2))); bin coordinates are signed offsets from DC.
// With the forward exp(-j...) transform, the O R* term of a reference
// E0 exp(-j kr (x + y)) sits at bin +kr N d / 2pi on each axis.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>

#include "mwholo/field.hpp"
#include "mwholo/hologram.hpp"
#include "mwholo/reference.hpp"

namespace mwholo {

struct BinIndex {
  Index x = 0;
  Index y = 0;

  Index chebyshev() const { return std::max(std::abs(x), std::abs(y)); }
  friend bool operator==(const BinIndex&, const BinIndex&) = default;
};

inline std::string to_string(const BinIndex& b) {
  return "(" + std::to_string(b.x) + ", " + std::to_string(b.y) + ")";
}

template <typename T>
struct BinOffset {
  T x{};
  T y{};
};

template <typename T>
struct OrderMap {
  BinIndex dc{};
  BinIndex plus_one{};
  BinIndex minus_one{};
  BinOffset<T> predicted_plus_one{};
};

template <typename T>
ComplexField<T> hologram_spectrum(const Hologram<T>& h) {
  return center_spectrum(fft2(to_complex(h.data)));
}

/// Analytic +1 order position kr N d / (2 pi) per axis, in bins.
template <typename T>
BinOffset<T> predicted_plus_one(const ReferenceWaveSpec<T>& spec) {
  return {spec.kr_x() * static_cast<T>(spec.grid.extent_x()) / T(2 * EIGEN_PI),
          spec.kr_y() * static_cast<T>(spec.grid.extent_y()) / T(2 * EIGEN_PI)};
}

template <typename T>
const std::complex<T>& at_bin(const ComplexField<T>& centered, const BinIndex& b) {
  const ScanGrid& g = centered.grid();
  return centered.samples()(centered_position(b.y, g.ny), centered_position(b.x, g.nx));
}

/// Finds the strongest bin within +/-2 bins of the predicted +1 order,
/// ignoring the DC neighbourhood.
template <typename T>
OrderMap<T> locate_orders(const ComplexField<T>& spectrum, const ReferenceWaveSpec<T>& spec) {
  validate(spec);
  require_same_grid(spectrum.grid(), spec.grid, "locate_orders");
  const ScanGrid& g = spectrum.grid();
  OrderMap<T> map;
  map.predicted_plus_one = predicted_plus_one(spec);
  const auto& p = map.predicted_plus_one;
  if (p.x >= static_cast<T>(g.nx) / T(2) || p.y >= static_cast<T>(g.ny) / T(2)) {
    throw ContractError("locate_orders: predicted +1 order (" + std::to_string(static_cast<double>(p.x)) + ", " +
                        std::to_string(static_cast<double>(p.y)) +
                        ") bins is at or beyond Nyquist; the configuration aliases");
  }

  const Index cx = static_cast<Index>(std::lround(p.x));
  const Index cy = static_cast<Index>(std::lround(p.y));
  bool found = false;
  T best = T(-1);
  for (Index oy = -2; oy <= 2; ++oy) {
    for (Index ox = -2; ox <= 2; ++ox) {
      const BinIndex b{wrap_bin(cx + ox, g.nx), wrap_bin(cy + oy, g.ny)};
      if (std::abs(b.x) <= 1 && std::abs(b.y) <= 1) continue;
      const T mag = std::abs(at_bin(spectrum, b));
      if (mag > best) {
        best = mag;
        map.plus_one = b;
        found = true;
      }
    }
  }
  require(found, "locate_orders: search window collapsed onto DC");
  map.minus_one = {wrap_bin(-map.plus_one.x, g.nx), wrap_bin(-map.plus_one.y, g.ny)};
  return map;
}

/// Largest window radius that stays clear of DC, capped at N/6.
template <typename T>
Index default_filter_radius(const OrderMap<T>& map, const ScanGrid& grid) {
  const double cap = static_cast<double>(std::min(grid.nx, grid.ny)) / 6.0;
  return static_cast<Index>(std::floor(std::min(static_cast<double>(map.plus_one.chebyshev() - 1), cap)));
}

template <typename T>
struct OrderExtraction {
  ComplexField<T> baseband;  // centered spectrum
  Index radius = 0;
  BinIndex shift{};            // bins moved to DC
  BinOffset<T> residual{};     // fractional carrier left after the integer shift
  bool residual_corrected = false;
};

/// Moves the order at `center` to DC and keeps a hard circular window of
/// `radius` bins there. With `correct_residual` the spectrum is demodulated
/// by the exact (fractional) `carrier` before windowing, so the window cuts a
/// centred order; otherwise only the integer shift to `center` is applied.
template <typename T>
OrderExtraction<T> extract_order(const ComplexField<T>& spectrum, const BinIndex& center,
                                 const BinOffset<T>& carrier, Index radius, bool correct_residual) {
  const ScanGrid& g = spectrum.grid();
  require(radius >= 1, "extract_order: window radius must be a positive number of bins");
  require(radius < center.chebyshev(), "extract_order: window of radius " + std::to_string(radius) +
                                           " around " + to_string(center) + " overlaps DC");
  const BinOffset<T> residual{carrier.x - T(center.x), carrier.y - T(center.y)};
  // Carriers within rounding of a whole bin are shifted exactly.
  const T eps = T(1e-9);
  const bool fractional = correct_residual && (std::abs(residual.x) > eps || std::abs(residual.y) > eps);

  ComplexField<T> demodulated(g);
  if (fractional) {
    ComplexField<T> spatial = ifft2(uncenter_spectrum(spectrum));
    const T fx = T(2 * EIGEN_PI) * carrier.x / static_cast<T>(g.nx);
    const T fy = T(2 * EIGEN_PI) * carrier.y / static_cast<T>(g.ny);
    for (Index n = 0; n < g.ny; ++n) {
      for (Index m = 0; m < g.nx; ++m) {
        spatial(m, n) *= std::polar(T(1), -(fx * static_cast<T>(m) + fy * static_cast<T>(n)));
      }
    }
    demodulated = center_spectrum(fft2(spatial));
  } else {
    for (Index n = 0; n < g.ny; ++n) {
      const Index dy = wrap_bin(centered_bin(n, g.ny) - center.y, g.ny);
      for (Index m = 0; m < g.nx; ++m) {
        const Index dx = wrap_bin(centered_bin(m, g.nx) - center.x, g.nx);
        demodulated.samples()(centered_position(dy, g.ny), centered_position(dx, g.nx)) = spectrum.samples()(n, m);
      }
    }
  }

  ComplexField<T> baseband(g);
  for (Index n = 0; n < g.ny; ++n) {
    const Index by = centered_bin(n, g.ny);
    for (Index m = 0; m < g.nx; ++m) {
      const Index bx = centered_bin(m, g.nx);
      if (bx * bx + by * by <= radius * radius) baseband.samples()(n, m) = demodulated.samples()(n, m);
    }
  }
  return {std::move(baseband), radius, center, residual, fractional};
}

template <typename T>
OrderExtraction<T> extract_plus_one_detailed(const ComplexField<T>& spectrum, const OrderMap<T>& map, Index radius,
                                             bool correct_residual = true) {
  return extract_order(spectrum, map.plus_one, map.predicted_plus_one, radius, correct_residual);
}

/// Baseband spectrum of the +1 order (residual carrier removed).
template <typename T>
ComplexField<T> extract_plus_one(const ComplexField<T>& spectrum, const OrderMap<T>& map, Index radius) {
  return extract_plus_one_detailed(spectrum, map, radius).baseband;
}

/// Twin-image counterpart of extract_plus_one, demodulated from the -1 order.
template <typename T>
OrderExtraction<T> extract_minus_one_detailed(const ComplexField<T>& spectrum, const OrderMap<T>& map, Index radius,
                                              bool correct_residual = true) {
  const BinOffset<T> carrier{-map.predicted_plus_one.x, -map.predicted_plus_one.y};
  return extract_order(spectrum, map.minus_one, carrier, radius, correct_residual);
}

}  // namespace mwholo
