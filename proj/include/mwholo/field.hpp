#pragma once

// Sampled scan-plane fields and the 2D transform machinery shared by the
// rest of the library. Samples are stored row-major with x as the fastest
// axis: row index = y sample n, column index = x sample m.

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "mwholo/error.hpp"

namespace mwholo {

using Eigen::Index;

/// Regularly sampled 2D aperture. Spacings are in millimetres.
struct ScanGrid {
  Index nx = 0;
  Index ny = 0;
  double dx = 0.0;
  double dy = 0.0;

  Index size() const { return nx * ny; }
  double extent_x() const { return static_cast<double>(nx) * dx; }
  double extent_y() const { return static_cast<double>(ny) * dy; }

  friend bool operator==(const ScanGrid&, const ScanGrid&) = default;
};

inline std::string to_string(const ScanGrid& g) {
  return std::to_string(g.nx) + "x" + std::to_string(g.ny) + " @ " + std::to_string(g.dx) + "x" +
         std::to_string(g.dy) + " mm";
}

inline void validate(const ScanGrid& g) {
  require(g.nx >= 2 && g.ny >= 2, "grid needs at least 2 samples per axis, got " + to_string(g));
  require(std::isfinite(g.dx) && std::isfinite(g.dy) && g.dx > 0.0 && g.dy > 0.0,
          "grid spacing must be positive and finite, got " + to_string(g));
}

inline ScanGrid make_grid(Index nx, Index ny, double dx, double dy) {
  ScanGrid g{nx, ny, dx, dy};
  validate(g);
  return g;
}

/// A scalar field sampled on a ScanGrid.
template <typename Scalar>
class Field {
 public:
  using Samples = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Field() = default;

  explicit Field(const ScanGrid& grid) : grid_(grid), samples_(Samples::Zero(grid.ny, grid.nx)) {
    validate(grid_);
  }

  Field(const ScanGrid& grid, Samples samples) : grid_(grid), samples_(std::move(samples)) {
    validate(grid_);
    require(samples_.rows() == grid_.ny && samples_.cols() == grid_.nx,
            "sample array shape does not match grid " + to_string(grid_));
  }

  const ScanGrid& grid() const { return grid_; }
  Samples& samples() { return samples_; }
  const Samples& samples() const { return samples_; }

  /// Sample at x index m, y index n.
  Scalar& operator()(Index m, Index n) { return samples_(n, m); }
  const Scalar& operator()(Index m, Index n) const { return samples_(n, m); }

 private:
  ScanGrid grid_{};
  Samples samples_;
};

template <typename T>
using RealField = Field<T>;
template <typename T>
using ComplexField = Field<std::complex<T>>;

using RealFieldd = RealField<double>;
using ComplexFieldd = ComplexField<double>;

namespace detail {

template <typename T>
bool finite(const T& v) {
  return std::isfinite(v);
}
template <typename T>
bool finite(const std::complex<T>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

}  // namespace detail

/// Throws ContractError naming the first non-finite sample.
template <typename Scalar>
void require_finite(const Field<Scalar>& f, const std::string& context) {
  const auto& s = f.samples();
  for (Index n = 0; n < s.rows(); ++n) {
    for (Index m = 0; m < s.cols(); ++m) {
      if (!detail::finite(s(n, m))) {
        throw ContractError(context + ": non-finite sample at (x=" + std::to_string(m) +
                            ", y=" + std::to_string(n) + ")");
      }
    }
  }
}

inline void require_same_grid(const ScanGrid& a, const ScanGrid& b, const std::string& context) {
  require(a == b, context + ": grid mismatch (" + to_string(a) + " vs " + to_string(b) + ")");
}

template <typename T>
ComplexField<T> to_complex(const RealField<T>& f) {
  return ComplexField<T>(f.grid(), f.samples().template cast<std::complex<T>>());
}

// ---------------------------------------------------------------------------
// Transforms

enum class Direction { Forward, Inverse };

/// 2D DFT. Forward is unscaled (kernel exp(-j...)), inverse scales by 1/(nx*ny).
template <typename T>
ComplexField<T> dft2(const ComplexField<T>& field, Direction direction) {
  require_finite(field, "dft2");
  const Index nx = field.grid().nx;
  const Index ny = field.grid().ny;
  typename ComplexField<T>::Samples out = field.samples();

  Eigen::FFT<T> fft;
  std::vector<std::complex<T>> src;
  std::vector<std::complex<T>> dst;
  auto run = [&](std::vector<std::complex<T>>& d, const std::vector<std::complex<T>>& s) {
    if (direction == Direction::Forward) {
      fft.fwd(d, s);
    } else {
      fft.inv(d, s);
    }
  };

  src.resize(static_cast<std::size_t>(nx));
  for (Index n = 0; n < ny; ++n) {
    for (Index m = 0; m < nx; ++m) src[static_cast<std::size_t>(m)] = out(n, m);
    run(dst, src);
    for (Index m = 0; m < nx; ++m) out(n, m) = dst[static_cast<std::size_t>(m)];
  }
  src.resize(static_cast<std::size_t>(ny));
  for (Index m = 0; m < nx; ++m) {
    for (Index n = 0; n < ny; ++n) src[static_cast<std::size_t>(n)] = out(n, m);
    run(dst, src);
    for (Index n = 0; n < ny; ++n) out(n, m) = dst[static_cast<std::size_t>(n)];
  }
  return ComplexField<T>(field.grid(), std::move(out));
}

template <typename T>
ComplexField<T> fft2(const ComplexField<T>& field) {
  return dft2(field, Direction::Forward);
}

template <typename T>
ComplexField<T> ifft2(const ComplexField<T>& field) {
  return dft2(field, Direction::Inverse);
}

namespace detail {

template <typename Scalar>
Field<Scalar> roll(const Field<Scalar>& f, Index shift_x, Index shift_y) {
  const Index nx = f.grid().nx;
  const Index ny = f.grid().ny;
  typename Field<Scalar>::Samples out(ny, nx);
  for (Index n = 0; n < ny; ++n) {
    const Index nn = ((n + shift_y) % ny + ny) % ny;
    for (Index m = 0; m < nx; ++m) {
      out(nn, ((m + shift_x) % nx + nx) % nx) = f.samples()(n, m);
    }
  }
  return Field<Scalar>(f.grid(), std::move(out));
}

}  // namespace detail

/// Quadrant swap: natural index m moves to (m + floor(n/2)) mod n, putting DC
/// at the grid centre. Involutive for even sizes.
template <typename Scalar>
Field<Scalar> center_spectrum(const Field<Scalar>& spectrum) {
  return detail::roll(spectrum, spectrum.grid().nx / 2, spectrum.grid().ny / 2);
}

/// Inverse of center_spectrum for any size.
template <typename Scalar>
Field<Scalar> uncenter_spectrum(const Field<Scalar>& spectrum) {
  return detail::roll(spectrum, -(spectrum.grid().nx / 2), -(spectrum.grid().ny / 2));
}

/// Sum of squared magnitudes.
template <typename T>
T total_power(const ComplexField<T>& field) {
  return field.samples().abs2().sum();
}

// ---------------------------------------------------------------------------
// Spectral coordinates

/// Signed frequency index of centered array position i on an axis of n bins.
inline Index centered_bin(Index i, Index n) { return i - n / 2; }

/// Centered array position holding signed frequency index b (wrapped).
inline Index centered_position(Index b, Index n) { return ((b + n / 2) % n + n) % n; }

/// Wrap a signed bin index into the centered range [-floor(n/2), n - floor(n/2)).
inline Index wrap_bin(Index b, Index n) { return centered_bin(centered_position(b, n), n); }

/// Signed frequency index of natural (uncentered) FFT position i.
inline Index natural_bin(Index i, Index n) { return i < n - n / 2 ? i : i - n; }

/// Angular spatial frequencies (rad/mm) of the centered spectrum layout.
template <typename T>
struct SpectralGrid {
  ScanGrid grid;
  Eigen::Array<T, Eigen::Dynamic, 1> kx;
  Eigen::Array<T, Eigen::Dynamic, 1> ky;

  T bin_spacing_x() const { return T(2 * EIGEN_PI) / static_cast<T>(grid.extent_x()); }
  T bin_spacing_y() const { return T(2 * EIGEN_PI) / static_cast<T>(grid.extent_y()); }
};

template <typename T = double>
SpectralGrid<T> spectral_grid(const ScanGrid& grid) {
  validate(grid);
  SpectralGrid<T> s{grid, {}, {}};
  s.kx.resize(grid.nx);
  s.ky.resize(grid.ny);
  for (Index i = 0; i < grid.nx; ++i) {
    s.kx(i) = s.bin_spacing_x() * static_cast<T>(centered_bin(i, grid.nx));
  }
  for (Index i = 0; i < grid.ny; ++i) {
    s.ky(i) = s.bin_spacing_y() * static_cast<T>(centered_bin(i, grid.ny));
  }
  return s;
}

}  // namespace mwholo
