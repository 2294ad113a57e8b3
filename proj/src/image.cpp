#include <algorithm>
#include <cmath>
#include <fstream>

#include "mwholo/io.hpp"

namespace mwholo::io {

std::vector<std::uint8_t> to_grayscale(const RealFieldd& field, GrayMapping mapping) {
  require_finite(field, "export_grayscale");
  const auto& s = field.samples();
  std::vector<std::uint8_t> pixels;
  pixels.reserve(static_cast<std::size_t>(s.size()));

  double lo = -EIGEN_PI;
  double span = 2.0 * EIGEN_PI;
  if (mapping == GrayMapping::MinMax) {
    lo = s.minCoeff();
    span = s.maxCoeff() - lo;
  }
  for (Index n = 0; n < s.rows(); ++n) {
    for (Index m = 0; m < s.cols(); ++m) {
      if (!(span > 0.0)) {
        pixels.push_back(128);
        continue;
      }
      const double v = std::clamp((s(n, m) - lo) / span, 0.0, 1.0);
      pixels.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
    }
  }
  return pixels;
}

void export_grayscale(const std::filesystem::path& path, const RealFieldd& field, GrayMapping mapping) {
  const auto pixels = to_grayscale(field, mapping);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os << "P5\n" << field.grid().nx << ' ' << field.grid().ny << "\n255\n";
  os.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace mwholo::io
