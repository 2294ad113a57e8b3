#pragma once

#include <cmath>
#include <complex>

#include "mwholo/field.hpp"
#include "mwholo/wave.hpp"

namespace mwholo {

/// Refocuses a centered baseband spectrum from the recording plane onto the
/// object plane z0 away. Inverts asm_propagate(+z0) on propagating content;
/// evanescent bins are dropped.
template <typename T>
ComplexField<T> backpropagate(const ComplexField<T>& baseband_spectrum, T z0, const PropagationParams<T>& params) {
  require(std::isfinite(z0) && z0 >= T(0), "backpropagate: z0 must be >= 0");
  require_finite(baseband_spectrum, "backpropagate");
  ComplexField<T> spectrum = uncenter_spectrum(baseband_spectrum);
  detail::apply_asm_kernel(spectrum, -z0, params.kappa(), EvanescentPolicy::Zero);
  return ifft2(spectrum);
}

template <typename T>
RealField<T> amplitude_image(const ComplexField<T>& e) {
  return RealField<T>(e.grid(), e.samples().abs());
}

/// Four-quadrant phase in (-pi, pi]; exactly-zero samples map to 0.
template <typename T>
RealField<T> wrapped_phase(const ComplexField<T>& e) {
  RealField<T> phase(e.grid());
  for (Index n = 0; n < e.grid().ny; ++n) {
    for (Index m = 0; m < e.grid().nx; ++m) {
      const std::complex<T> v = e(m, n);
      T p = (v.real() == T(0) && v.imag() == T(0)) ? T(0) : std::atan2(v.imag(), v.real());
      if (p <= -T(EIGEN_PI)) p = T(EIGEN_PI);
      phase(m, n) = p;
    }
  }
  return phase;
}

template <typename T>
struct ReconstructionResult {
  ComplexField<T> field;
  RealField<T> amplitude;
  RealField<T> wrapped_phase;
  T z0{};
  PropagationParams<T> params{};
};

template <typename T>
ReconstructionResult<T> reconstruct(const ComplexField<T>& baseband_spectrum, T z0,
                                    const PropagationParams<T>& params) {
  ComplexField<T> e = backpropagate(baseband_spectrum, z0, params);
  RealField<T> amp = amplitude_image(e);
  RealField<T> phase = wrapped_phase(e);
  return {std::move(e), std::move(amp), std::move(phase), z0, params};
}

}  // namespace mwholo
