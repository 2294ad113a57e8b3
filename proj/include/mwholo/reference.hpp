#pragma once

// Synthesized reference wave R(x, y) = E0 exp(-j kr (x + y)), realized by
// stepping the reference phase by a fixed increment per scan sample.

#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "mwholo/field.hpp"
#include "mwholo/wave.hpp"

namespace mwholo {

template <typename T>
struct ReferenceWaveSpec {
  T amplitude{};   // E0
  T phase_step{};  // rad per scan sample, same on both axes
  ScanGrid grid{};

  /// Offset wave vector along x and y, rad/mm.
  T kr_x() const { return phase_step / static_cast<T>(grid.dx); }
  T kr_y() const { return phase_step / static_cast<T>(grid.dy); }

  friend bool operator==(const ReferenceWaveSpec&, const ReferenceWaveSpec&) = default;
};

template <typename T>
void validate(const ReferenceWaveSpec<T>& spec) {
  validate(spec.grid);
  require(std::isfinite(spec.amplitude) && spec.amplitude > T(0), "reference amplitude E0 must be positive");
  require(std::isfinite(spec.phase_step) && spec.phase_step > T(0) && spec.phase_step < T(2 * EIGEN_PI),
          "reference phase step must lie in (0, 2pi)");
}

template <typename T>
ReferenceWaveSpec<T> reference_spec(T amplitude, T phase_step, const ScanGrid& grid) {
  ReferenceWaveSpec<T> spec{amplitude, phase_step, grid};
  validate(spec);
  return spec;
}

/// Sample (m, n) = E0 exp(-j phase_step (m + n)).
template <typename T>
ComplexField<T> synthesize_reference(const ReferenceWaveSpec<T>& spec) {
  validate(spec);
  ComplexField<T> r(spec.grid);
  for (Index n = 0; n < spec.grid.ny; ++n) {
    for (Index m = 0; m < spec.grid.nx; ++m) {
      const T phase = std::fmod(spec.phase_step * static_cast<T>(m + n), T(2 * EIGEN_PI));
      r(m, n) = std::polar(spec.amplitude, -phase);
    }
  }
  return r;
}

/// Outcome of the carrier-offset check. Passing requires kr >= 2k (orders
/// clear of the object halo) and kr <= pi/d (carrier below Nyquist) on both axes.
template <typename T>
struct OffsetReport {
  T kr_x{};
  T kr_y{};
  T two_k{};
  T nyquist_x{};
  T nyquist_y{};
  T wavelength{};
  T dx{};
  T dy{};
  bool offset_ok = false;
  bool nyquist_ok = false;

  bool passes() const { return offset_ok && nyquist_ok; }
  /// Sample spacing giving a 2pi/3 step per lambda/6.
  T lambda_over_6() const { return wavelength / T(6); }

  std::string describe() const {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << "kr_x=" << kr_x << " kr_y=" << kr_y << " rad/mm, 2k=" << two_k
       << " rad/mm, nyquist_x=" << nyquist_x << " nyquist_y=" << nyquist_y << " rad/mm ("
       << (offset_ok ? "kr>=2k" : "kr<2k") << ", " << (nyquist_ok ? "below Nyquist" : "aliased") << ")";
    return os.str();
  }
};

template <typename T>
OffsetReport<T> validate_offset(const ReferenceWaveSpec<T>& spec, T k) {
  validate(spec);
  require(std::isfinite(k) && k > T(0), "wavenumber must be positive");
  // Boundaries are inclusive; the slack absorbs rounding in kr = dphi/dx.
  constexpr T slack = T(1e-12);
  OffsetReport<T> r;
  r.kr_x = spec.kr_x();
  r.kr_y = spec.kr_y();
  r.two_k = T(2) * k;
  r.nyquist_x = T(EIGEN_PI) / static_cast<T>(spec.grid.dx);
  r.nyquist_y = T(EIGEN_PI) / static_cast<T>(spec.grid.dy);
  r.wavelength = T(2 * EIGEN_PI) / k;
  r.dx = static_cast<T>(spec.grid.dx);
  r.dy = static_cast<T>(spec.grid.dy);
  r.offset_ok = r.kr_x >= r.two_k * (T(1) - slack) && r.kr_y >= r.two_k * (T(1) - slack);
  r.nyquist_ok = r.kr_x <= r.nyquist_x * (T(1) + slack) && r.kr_y <= r.nyquist_y * (T(1) + slack);
  return r;
}

}  // namespace mwholo
