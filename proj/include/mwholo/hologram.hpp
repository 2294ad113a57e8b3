#pragma once

// Power-only hologram formation H = |O +/- R|^2 at the sum/difference ports
// of a hybrid tee, plus the port-differencing and background subtraction
// used to suppress the zero order.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include "mwholo/field.hpp"
#include "mwholo/reference.hpp"

namespace mwholo {

enum class Port { Sum, Difference, Combined };

inline std::string to_string(Port p) {
  switch (p) {
    case Port::Sum: return "sum";
    case Port::Difference: return "difference";
    case Port::Combined: return "combined";
  }
  return "unknown";
}

template <typename T>
struct HologramMeta {
  T frequency_ghz{};
  T z0{};
  ReferenceWaveSpec<T> reference{};

  friend bool operator==(const HologramMeta&, const HologramMeta&) = default;
};

template <typename T>
struct Hologram {
  RealField<T> data;
  Port port = Port::Sum;
  HologramMeta<T> meta{};
};

template <typename T>
Hologram<T> record(const ComplexField<T>& object, const ComplexField<T>& reference, Port port,
                   const HologramMeta<T>& meta = {}) {
  require_same_grid(object.grid(), reference.grid(), "record");
  require(port != Port::Combined, "record: a single detector port is either sum or difference");
  const T sign = port == Port::Sum ? T(1) : T(-1);
  RealField<T> data(object.grid(), (object.samples() + sign * reference.samples()).abs2());
  return {std::move(data), port, meta};
}

/// H+ - H- = 4 Re(O R*); the |O|^2 and |R|^2 terms cancel.
template <typename T>
Hologram<T> combine_ports(const Hologram<T>& plus, const Hologram<T>& minus) {
  require(plus.port == Port::Sum && minus.port == Port::Difference,
          "combine_ports expects (sum, difference), got (" + to_string(plus.port) + ", " +
              to_string(minus.port) + ")");
  require(plus.meta == minus.meta, "combine_ports: hologram metadata differs");
  require_same_grid(plus.data.grid(), minus.data.grid(), "combine_ports");
  return {RealField<T>(plus.data.grid(), plus.data.samples() - minus.data.samples()), Port::Combined, plus.meta};
}

template <typename T>
Hologram<T> subtract_background(const Hologram<T>& h, const Hologram<T>& background) {
  require(h.port == background.port, "subtract_background: port mismatch (" + to_string(h.port) + " vs " +
                                         to_string(background.port) + ")");
  require(h.meta == background.meta, "subtract_background: hologram metadata differs");
  require_same_grid(h.data.grid(), background.data.grid(), "subtract_background");
  return {RealField<T>(h.data.grid(), h.data.samples() - background.data.samples()), Port::Combined, h.meta};
}

/// Sentinel for "no noise".
template <typename T>
inline constexpr T kNoiseFree = std::numeric_limits<T>::infinity();

/// Additive zero-mean Gaussian noise at the requested SNR, where signal power
/// is the mean squared sample. Detector-port readings are clamped at zero.
template <typename T>
Hologram<T> add_noise(const Hologram<T>& h, T snr_db, std::uint64_t seed) {
  require(!std::isnan(snr_db), "add_noise: snr must not be NaN");
  if (std::isinf(snr_db) && snr_db > T(0)) return h;
  require(std::isfinite(snr_db), "add_noise: snr must be finite or +inf");

  const T signal_power = h.data.samples().square().mean();
  const T sigma = std::sqrt(signal_power / std::pow(T(10), snr_db / T(10)));
  std::mt19937_64 rng(seed);
  std::normal_distribution<T> noise(T(0), sigma);

  Hologram<T> out = h;
  auto& s = out.data.samples();
  for (Index n = 0; n < s.rows(); ++n) {
    for (Index m = 0; m < s.cols(); ++m) s(n, m) += noise(rng);
  }
  if (out.port != Port::Combined) s = s.max(T(0));
  return out;
}

}  // namespace mwholo
