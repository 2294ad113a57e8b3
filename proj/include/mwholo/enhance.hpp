#pragma once

// Resolution enhancement of amplitude images: an interpolating upscale plus
// an additive high-frequency residual. The residual either comes from a
// deterministic unsharp estimate or from an external predictor's output.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "mwholo/field.hpp"
#include "mwholo/metrics.hpp"

namespace mwholo {

enum class EnhancerKind { Bicubic, ResidualSharpen, External };

inline std::string to_string(EnhancerKind k) {
  switch (k) {
    case EnhancerKind::Bicubic: return "bicubic";
    case EnhancerKind::ResidualSharpen: return "residual-sharpen";
    case EnhancerKind::External: return "external";
  }
  return "unknown";
}

template <typename T>
struct Enhancer {
  EnhancerKind kind = EnhancerKind::ResidualSharpen;
  Index scale_factor = 4;
  T residual_gain = T(1);
  std::optional<RealField<T>> external_residual;  // External kind only
};

template <typename T>
void validate(const Enhancer<T>& e) {
  require(e.scale_factor >= 1, "enhancer scale factor must be >= 1");
  require(std::isfinite(e.residual_gain) && e.residual_gain >= T(0), "enhancer residual gain must be >= 0");
  if (e.kind == EnhancerKind::External) {
    require(e.external_residual.has_value(), "external enhancer needs a residual field");
  }
}

inline ScanGrid upscaled_grid(const ScanGrid& g, Index factor) {
  return {g.nx * factor, g.ny * factor, g.dx / static_cast<double>(factor), g.dy / static_cast<double>(factor)};
}

namespace detail {

// Catmull-Rom weights (Keys, a = -0.5) for fractional offset s in [0, 1).
template <typename T>
void cubic_weights(T s, T (&w)[4]) {
  const T s2 = s * s;
  const T s3 = s2 * s;
  w[0] = (-s3 + T(2) * s2 - s) / T(2);
  w[1] = (T(3) * s3 - T(5) * s2 + T(2)) / T(2);
  w[2] = (T(-3) * s3 + T(4) * s2 + s) / T(2);
  w[3] = (s3 - s2) / T(2);
}

// Sample j of a line, linearly extrapolated outside [0, n).
template <typename Line>
auto extrapolated(const Line& line, Index j) {
  const Index n = line.size();
  if (j < 0) return line(0) + static_cast<double>(j) * (line(1) - line(0));
  if (j >= n) return line(n - 1) + static_cast<double>(j - n + 1) * (line(n - 1) - line(n - 2));
  return line(j);
}

template <typename T>
Eigen::Array<T, Eigen::Dynamic, 1> upscale_line(const Eigen::Array<T, Eigen::Dynamic, 1>& line, Index factor) {
  Eigen::Array<T, Eigen::Dynamic, 1> out(line.size() * factor);
  for (Index i = 0; i < out.size(); ++i) {
    // Pixel-centre alignment: output centre i maps to input coordinate t.
    const T t = (static_cast<T>(i) + T(0.5)) / static_cast<T>(factor) - T(0.5);
    const T base = std::floor(t);
    const Index m = static_cast<Index>(base);
    T w[4];
    cubic_weights(t - base, w);
    T acc = T(0);
    for (Index j = 0; j < 4; ++j) acc += w[j] * static_cast<T>(extrapolated(line, m - 1 + j));
    out(i) = acc;
  }
  return out;
}

}  // namespace detail

/// Separable bicubic upscale by an integer factor. Output pixel centres sit
/// at the sub-pixel centres of the input, so block-averaging the result
/// realigns with the input grid. Linear ramps are reproduced exactly.
template <typename T>
RealField<T> upscale_bicubic(const RealField<T>& img, Index factor) {
  require(factor >= 1, "upscale factor must be >= 1");
  if (factor == 1) return img;
  const ScanGrid& g = img.grid();
  require(g.nx >= 2 && g.ny >= 2, "upscale needs at least 2 samples per axis");
  using Line = Eigen::Array<T, Eigen::Dynamic, 1>;

  detail::Image<T> rows(g.ny, g.nx * factor);
  for (Index n = 0; n < g.ny; ++n) {
    const Line line = img.samples().row(n).transpose();
    rows.row(n) = detail::upscale_line(line, factor).transpose();
  }
  detail::Image<T> out(g.ny * factor, g.nx * factor);
  for (Index m = 0; m < rows.cols(); ++m) {
    const Line line = rows.col(m);
    out.col(m) = detail::upscale_line(line, factor);
  }
  return RealField<T>(upscaled_grid(g, factor), std::move(out));
}

/// Pixel replication.
template <typename T>
RealField<T> upscale_nearest(const RealField<T>& img, Index factor) {
  require(factor >= 1, "upscale factor must be >= 1");
  const ScanGrid& g = img.grid();
  detail::Image<T> out(g.ny * factor, g.nx * factor);
  for (Index r = 0; r < out.rows(); ++r) {
    for (Index c = 0; c < out.cols(); ++c) out(r, c) = img.samples()(r / factor, c / factor);
  }
  return RealField<T>(upscaled_grid(g, factor), std::move(out));
}

/// Mean over factor x factor blocks.
template <typename T>
RealField<T> block_average(const RealField<T>& img, Index factor) {
  const ScanGrid& g = img.grid();
  require(factor >= 1 && g.nx % factor == 0 && g.ny % factor == 0,
          "block_average: grid " + to_string(g) + " is not divisible by " + std::to_string(factor));
  const ScanGrid out_grid{g.nx / factor, g.ny / factor, g.dx * static_cast<double>(factor),
                          g.dy * static_cast<double>(factor)};
  detail::Image<T> out(out_grid.ny, out_grid.nx);
  for (Index r = 0; r < out.rows(); ++r) {
    for (Index c = 0; c < out.cols(); ++c) {
      out(r, c) = img.samples().block(r * factor, c * factor, factor, factor).mean();
    }
  }
  return RealField<T>(out_grid, std::move(out));
}

/// 3x3 uniform lowpass with reflected borders.
template <typename T>
RealField<T> box3(const RealField<T>& img) {
  const detail::Image<T> padded = detail::reflect_pad(img.samples(), Index(1));
  RealField<T> out(img.grid());
  for (Index r = 0; r < img.grid().ny; ++r) {
    for (Index c = 0; c < img.grid().nx; ++c) out.samples()(r, c) = padded.block(r, c, 3, 3).mean();
  }
  return out;
}

template <typename T>
RealField<T> enhance(const RealField<T>& img, const Enhancer<T>& enhancer) {
  validate(enhancer);
  require_finite(img, "enhance");
  RealField<T> up = upscale_bicubic(img, enhancer.scale_factor);
  switch (enhancer.kind) {
    case EnhancerKind::Bicubic:
      return up;
    case EnhancerKind::ResidualSharpen: {
      if (enhancer.residual_gain == T(0)) return up;
      const RealField<T> low = box3(up);
      up.samples() = (up.samples() + enhancer.residual_gain * (up.samples() - low.samples()))
                         .max(img.samples().minCoeff())
                         .min(img.samples().maxCoeff());
      return up;
    }
    case EnhancerKind::External: {
      const RealField<T>& residual = *enhancer.external_residual;
      require_same_grid(residual.grid(), up.grid(), "external residual");
      require_finite(residual, "external residual");
      up.samples() += residual.samples();
      return up;
    }
  }
  return up;
}

/// SSIM between the original and the enhanced image block-averaged back onto
/// the original grid.
template <typename T>
T structural_fidelity_check(const RealField<T>& original, const RealField<T>& enhanced,
                            Index window = kDefaultSsimWindow) {
  const ScanGrid& a = original.grid();
  const ScanGrid& b = enhanced.grid();
  require(b.nx % a.nx == 0 && b.ny % a.ny == 0 && b.nx / a.nx == b.ny / a.ny,
          "structural_fidelity_check: enhanced grid " + to_string(b) + " is not an integer multiple of " +
              to_string(a));
  const RealField<T> down = block_average(enhanced, b.nx / a.nx);
  T range = original.samples().maxCoeff() - original.samples().minCoeff();
  if (!(range > T(0))) range = T(1);
  const RealField<T> aligned(a, down.samples());
  return ssim(original, aligned, window, range);
}

}  // namespace mwholo
