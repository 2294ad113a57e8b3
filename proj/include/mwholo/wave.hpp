#pragma once

// Forward model: angular-spectrum propagation, the scene-to-field model and
// the transmit/receive antenna placement geometry.

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <type_traits>

#include "mwholo/field.hpp"

namespace mwholo {

/// Speed of light in mm/ns, so that GHz frequencies give rad/mm wavenumbers.
inline constexpr double kSpeedOfLight = 299.792458;

template <typename T>
T wavenumber(T frequency_ghz) {
  require(std::isfinite(frequency_ghz) && frequency_ghz > T(0),
          "frequency must be positive, got " + std::to_string(static_cast<double>(frequency_ghz)) + " GHz");
  return T(2 * EIGEN_PI) * frequency_ghz / T(kSpeedOfLight);
}

/// Monostatic uses the round-trip wavenumber 2k under the square root; one-way uses k.
enum class PropagationMode { Monostatic, OneWay };

template <typename T>
struct PropagationParams {
  T frequency_ghz{};
  T k{};
  PropagationMode mode = PropagationMode::Monostatic;

  /// Radius of the propagating disc in k-space.
  T kappa() const { return mode == PropagationMode::Monostatic ? T(2) * k : k; }

  friend bool operator==(const PropagationParams&, const PropagationParams&) = default;
};

template <typename T>
PropagationParams<T> propagation_params(T frequency_ghz, PropagationMode mode = PropagationMode::Monostatic) {
  return {frequency_ghz, wavenumber(frequency_ghz), mode};
}

/// How spectral components outside the propagating disc are treated.
///  - DampForward: exp(-z*sqrt(kx^2+ky^2-kappa^2)) for z > 0, zeroed for z < 0.
///  - Zero: always zeroed.
enum class EvanescentPolicy { DampForward, Zero };

/// Distance between the two antennas such that both beams, tilted by
/// beam_angle from the aperture normal, meet at the object plane ds away.
template <typename T>
T antenna_separation(T ds, T beam_angle_deg) {
  require(std::isfinite(ds) && ds > T(0), "antenna distance ds must be positive");
  require(beam_angle_deg > T(0) && beam_angle_deg < T(90),
          "beam angle must lie in (0, 90) degrees, got " + std::to_string(static_cast<double>(beam_angle_deg)));
  return T(2) * ds * std::tan(beam_angle_deg * T(EIGEN_PI) / T(180));
}

template <typename T>
struct AntennaGeometry {
  T ds{};
  T beam_angle_deg{};
  T da{};

  /// Slant path from each antenna to the common spot (d1 == d2).
  T slant_path() const { return std::hypot(ds, da / T(2)); }
};

template <typename T>
AntennaGeometry<T> antenna_geometry(T ds, T beam_angle_deg) {
  return {ds, beam_angle_deg, antenna_separation(ds, beam_angle_deg)};
}

namespace detail {

/// Multiplies a natural-layout spectrum in place by the ASM transfer function.
template <typename T>
void apply_asm_kernel(ComplexField<T>& spectrum, T distance, T kappa, EvanescentPolicy policy) {
  const ScanGrid& g = spectrum.grid();
  const T dkx = T(2 * EIGEN_PI) / static_cast<T>(g.extent_x());
  const T dky = T(2 * EIGEN_PI) / static_cast<T>(g.extent_y());
  const T kappa2 = kappa * kappa;
  const bool damp = policy == EvanescentPolicy::DampForward && distance > T(0);
  auto& s = spectrum.samples();
  for (Index n = 0; n < g.ny; ++n) {
    const T ky = dky * static_cast<T>(natural_bin(n, g.ny));
    for (Index m = 0; m < g.nx; ++m) {
      const T kx = dkx * static_cast<T>(natural_bin(m, g.nx));
      const T arg = kappa2 - kx * kx - ky * ky;
      if (arg >= T(0)) {
        s(n, m) *= std::polar(T(1), -distance * std::sqrt(arg));
      } else if (damp) {
        s(n, m) *= std::exp(-distance * std::sqrt(-arg));
      } else {
        s(n, m) = std::complex<T>(0);
      }
    }
  }
}

}  // namespace detail

/// Angular-spectrum propagation by `distance` mm (negative back-propagates).
/// Propagating bins get exp(-j*distance*sqrt(kappa^2 - kx^2 - ky^2)).
template <typename T>
ComplexField<T> asm_propagate(const ComplexField<T>& field, T distance, const PropagationParams<T>& params,
                              EvanescentPolicy policy = EvanescentPolicy::DampForward) {
  require(std::isfinite(distance), "propagation distance must be finite");
  ComplexField<T> spectrum = fft2(field);
  detail::apply_asm_kernel(spectrum, distance, params.kappa(), policy);
  return ifft2(spectrum);
}

/// Boolean mask (natural layout) of bins inside the propagating disc.
template <typename T>
Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> propagating_mask(const ScanGrid& g, T kappa) {
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> mask(g.ny, g.nx);
  const T dkx = T(2 * EIGEN_PI) / static_cast<T>(g.extent_x());
  const T dky = T(2 * EIGEN_PI) / static_cast<T>(g.extent_y());
  for (Index n = 0; n < g.ny; ++n) {
    const T ky = dky * static_cast<T>(natural_bin(n, g.ny));
    for (Index m = 0; m < g.nx; ++m) {
      const T kx = dkx * static_cast<T>(natural_bin(m, g.nx));
      mask(n, m) = kx * kx + ky * ky <= kappa * kappa;
    }
  }
  return mask;
}

/// Removes every component outside the propagating disc.
template <typename T>
ComplexField<T> bandlimit(const ComplexField<T>& field, T kappa) {
  ComplexField<T> spectrum = fft2(field);
  spectrum.samples() = propagating_mask(field.grid(), kappa).select(spectrum.samples(), std::complex<T>(0));
  return ifft2(spectrum);
}

// ---------------------------------------------------------------------------
// Scene model

/// Planar reflectivity at standoff z0 (mm) from the recording aperture.
template <typename T>
struct SceneSpec {
  ComplexField<T> reflectivity;
  T z0{};

  const ScanGrid& grid() const { return reflectivity.grid(); }
};

template <typename T>
void validate(const SceneSpec<T>& scene) {
  require(std::isfinite(scene.z0) && scene.z0 > T(0), "scene standoff z0 must be positive");
  require_finite(scene.reflectivity, "scene reflectivity");
}

/// Object wave at the recording plane under unit plane-wave illumination,
/// optionally weighted by a nonnegative antenna footprint taper.
template <typename T>
ComplexField<T> simulate_scattered_field(const SceneSpec<T>& scene, const PropagationParams<T>& params,
                                         const std::optional<RealField<std::type_identity_t<T>>>& gain_taper = std::nullopt) {
  validate(scene);
  ComplexField<T> object = asm_propagate(scene.reflectivity, scene.z0, params);
  if (gain_taper) {
    require_same_grid(gain_taper->grid(), scene.grid(), "simulate_scattered_field taper");
    require_finite(*gain_taper, "gain taper");
    require((gain_taper->samples() >= T(0)).all(), "gain taper must be nonnegative");
    object.samples() *= gain_taper->samples().template cast<std::complex<T>>();
  }
  return object;
}

/// Gaussian footprint of a tilted beam centred on the grid: 1 at the centre,
/// falling to 1/e at a radius equal to the antenna slant path.
template <typename T>
RealField<T> beam_taper(const ScanGrid& grid, const AntennaGeometry<T>& geometry) {
  RealField<T> taper(grid);
  const T radius = geometry.slant_path();
  const T cx = T(grid.nx - 1) / T(2);
  const T cy = T(grid.ny - 1) / T(2);
  for (Index n = 0; n < grid.ny; ++n) {
    for (Index m = 0; m < grid.nx; ++m) {
      const T x = (T(m) - cx) * T(grid.dx);
      const T y = (T(n) - cy) * T(grid.dy);
      taper(m, n) = std::exp(-(x * x + y * y) / (radius * radius));
    }
  }
  return taper;
}

}  // namespace mwholo
