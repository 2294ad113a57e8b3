#pragma once

// Image quality scores: speckle index (local std / local mean), its
// reciprocal SNR, and windowed SSIM. Local statistics use a uniform square
// window with symmetric reflection (d c b a | a b c d) at the borders.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>

#include "mwholo/field.hpp"

namespace mwholo {

inline constexpr Index kDefaultSpeckleWindow = 7;
inline constexpr Index kDefaultSsimWindow = 7;

namespace detail {

inline Index reflect_index(Index i, Index n) {
  if (i < 0) return -i - 1;
  if (i >= n) return 2 * n - i - 1;
  return i;
}

template <typename T>
using Image = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
Image<T> reflect_pad(const Image<T>& img, Index half) {
  Image<T> out(img.rows() + 2 * half, img.cols() + 2 * half);
  for (Index r = 0; r < out.rows(); ++r) {
    const Index sr = reflect_index(r - half, img.rows());
    for (Index c = 0; c < out.cols(); ++c) out(r, c) = img(sr, reflect_index(c - half, img.cols()));
  }
  return out;
}

inline void require_window(Index window, const ScanGrid& g, const std::string& context) {
  require(window >= 3 && window % 2 == 1, context + ": window must be odd and >= 3, got " + std::to_string(window));
  require(window <= std::min(g.nx, g.ny), context + ": window " + std::to_string(window) + " exceeds image size");
}

/// Per-pixel windowed mean, variance and (optionally) covariance with a
/// second image. Deviations are taken from the window's first sample so
/// constant windows give exactly zero variance.
template <typename T>
struct LocalMoments {
  Image<T> mean_x, mean_y, var_x, var_y, cov_xy;
};

template <typename T>
LocalMoments<T> local_moments(const Image<T>& x, const Image<T>* y, Index window) {
  const Index half = window / 2;
  const Image<T> px = reflect_pad(x, half);
  const Image<T> py = y ? reflect_pad(*y, half) : Image<T>();
  const T count = static_cast<T>(window * window);
  LocalMoments<T> lm;
  lm.mean_x.resize(x.rows(), x.cols());
  lm.var_x.resize(x.rows(), x.cols());
  if (y) {
    lm.mean_y.resize(x.rows(), x.cols());
    lm.var_y.resize(x.rows(), x.cols());
    lm.cov_xy.resize(x.rows(), x.cols());
  }
  for (Index r = 0; r < x.rows(); ++r) {
    for (Index c = 0; c < x.cols(); ++c) {
      const auto bx = px.block(r, c, window, window);
      const Image<T> ex = bx - bx(0, 0);
      const T sx = ex.sum() / count;
      lm.mean_x(r, c) = bx(0, 0) + sx;
      lm.var_x(r, c) = std::max(T(0), ex.square().sum() / count - sx * sx);
      if (y) {
        const auto by = py.block(r, c, window, window);
        const Image<T> ey = by - by(0, 0);
        const T sy = ey.sum() / count;
        lm.mean_y(r, c) = by(0, 0) + sy;
        lm.var_y(r, c) = std::max(T(0), ey.square().sum() / count - sy * sy);
        lm.cov_xy(r, c) = (ex * ey).sum() / count - sx * sy;
      }
    }
  }
  return lm;
}

}  // namespace detail

template <typename T>
struct SpeckleStats {
  T index{};
  Index valid_pixels = 0;
  Index excluded_pixels = 0;  // windows with zero mean
};

template <typename T>
SpeckleStats<T> speckle_stats(const RealField<T>& img, Index window = kDefaultSpeckleWindow) {
  detail::require_window(window, img.grid(), "speckle_index");
  require_finite(img, "speckle_index");
  require((img.samples() >= T(0)).all(), "speckle_index: image must be nonnegative");
  require((img.samples() > T(0)).any(), "speckle_index: undefined for an all-zero image");
  const auto lm = detail::local_moments<T>(img.samples(), nullptr, window);
  SpeckleStats<T> s;
  T acc = T(0);
  for (Index r = 0; r < lm.mean_x.rows(); ++r) {
    for (Index c = 0; c < lm.mean_x.cols(); ++c) {
      if (lm.mean_x(r, c) > T(0)) {
        acc += std::sqrt(lm.var_x(r, c)) / lm.mean_x(r, c);
        ++s.valid_pixels;
      } else {
        ++s.excluded_pixels;
      }
    }
  }
  s.index = acc / static_cast<T>(s.valid_pixels);
  return s;
}

template <typename T>
T speckle_index(const RealField<T>& img, Index window = kDefaultSpeckleWindow) {
  return speckle_stats(img, window).index;
}

/// Reciprocal speckle index; `unbounded` when the index is zero.
template <typename T>
struct Snr {
  T value{};
  bool unbounded = false;
};

template <typename T>
Snr<T> snr_from_speckle(T speckle) {
  if (speckle == T(0)) return {std::numeric_limits<T>::infinity(), true};
  return {T(1) / speckle, false};
}

template <typename T>
Snr<T> snr(const RealField<T>& img, Index window = kDefaultSpeckleWindow) {
  return snr_from_speckle(speckle_index(img, window));
}

template <typename T>
struct SsimConstants {
  T c1{};
  T c2{};
};

template <typename T>
SsimConstants<T> ssim_constants(T dynamic_range) {
  require(std::isfinite(dynamic_range) && dynamic_range > T(0), "ssim: dynamic range must be positive");
  const T l1 = T(0.01) * dynamic_range;
  const T l2 = T(0.03) * dynamic_range;
  return {l1 * l1, l2 * l2};
}

/// Per-pixel SSIM map.
template <typename T>
RealField<T> ssim_map(const RealField<T>& x, const RealField<T>& y, Index window, T dynamic_range) {
  require_same_grid(x.grid(), y.grid(), "ssim");
  detail::require_window(window, x.grid(), "ssim");
  require_finite(x, "ssim");
  require_finite(y, "ssim");
  const auto [c1, c2] = ssim_constants(dynamic_range);
  const auto lm = detail::local_moments<T>(x.samples(), &y.samples(), window);
  RealField<T> out(x.grid());
  out.samples() = ((T(2) * lm.mean_x * lm.mean_y + c1) * (T(2) * lm.cov_xy + c2)) /
                  ((lm.mean_x.square() + lm.mean_y.square() + c1) * (lm.var_x + lm.var_y + c2));
  return out;
}

template <typename T>
T ssim(const RealField<T>& x, const RealField<T>& y, Index window = kDefaultSsimWindow, T dynamic_range = T(1)) {
  return ssim_map(x, y, window, dynamic_range).samples().mean();
}

template <typename T>
struct QualityReport {
  T speckle_index{};
  Snr<T> snr{};
  std::optional<T> ssim;
  Index window = kDefaultSpeckleWindow;
  T c1{};
  T c2{};
  Index excluded_pixels = 0;
};

/// Speckle/SNR of `img`, plus SSIM against `reference` when given. The SSIM
/// dynamic range is the reference's value range (1 if flat).
template <typename T>
QualityReport<T> quality_report(const RealField<T>& img, const RealField<std::type_identity_t<T>>* reference = nullptr,
                                Index window = kDefaultSpeckleWindow) {
  QualityReport<T> q;
  const SpeckleStats<T> s = speckle_stats(img, window);
  q.speckle_index = s.index;
  q.snr = snr_from_speckle(s.index);
  q.window = window;
  q.excluded_pixels = s.excluded_pixels;
  if (reference) {
    T range = reference->samples().maxCoeff() - reference->samples().minCoeff();
    if (!(range > T(0))) range = T(1);
    const auto [c1, c2] = ssim_constants(range);
    q.c1 = c1;
    q.c2 = c2;
    q.ssim = ssim(*reference, img, window, range);
  }
  return q;
}

}  // namespace mwholo
