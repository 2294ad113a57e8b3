#pragma once

// On-disk formats: binary grid files, text scene files and 8-bit grayscale
// image export.
//
// Grid file layout (little-endian, 32-byte header, then payload):
//   0  char[4]  magic "MWHG"
//   4  uint16   version (1)
//   6  uint8    dtype (1 = real float64, 2 = complex float64 interleaved re, im)
//   7  uint8    reserved (0)
//   8  uint32   nx
//  12  uint32   ny
//  16  float64  dx (mm)
//  24  float64  dy (mm)
//  32  payload  nx*ny samples, row-major, x fastest

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mwholo/field.hpp"
#include "mwholo/scene.hpp"

namespace mwholo::io {

inline constexpr char kGridMagic[4] = {'M', 'W', 'H', 'G'};
inline constexpr std::uint16_t kGridVersion = 1;
inline constexpr std::size_t kGridHeaderSize = 32;

enum class GridDtype : std::uint8_t { Real = 1, Complex = 2 };

using GridData = std::variant<RealFieldd, ComplexFieldd>;

std::vector<std::uint8_t> encode_grid(const RealFieldd& field);
std::vector<std::uint8_t> encode_grid(const ComplexFieldd& field);
GridData decode_grid(std::span<const std::uint8_t> bytes);

void write_grid(const std::filesystem::path& path, const RealFieldd& field);
void write_grid(const std::filesystem::path& path, const ComplexFieldd& field);
GridData read_grid(const std::filesystem::path& path);
RealFieldd read_real_grid(const std::filesystem::path& path);
ComplexFieldd read_complex_grid(const std::filesystem::path& path);

/// Parsed scene file.
///
///   # comment
///   grid <nx> <ny> <dx_mm> <dy_mm>
///   rect <cx> <cy> <length> <width> <angle_deg> [<re> [<im>]]
///   data
///   <re> <im>   (nx*ny lines, row-major, x fastest)
///
/// Primitives are painted in order onto a zero background; a `data` block
/// replaces the whole reflectivity and cannot be combined with primitives.
struct SceneDescription {
  ScanGrid grid;
  std::vector<RectStrip<double>> strips;
  ComplexFieldd reflectivity;
};

SceneDescription parse_scene(std::string_view text);
SceneDescription load_scene(const std::filesystem::path& path);
std::string format_scene(const SceneDescription& scene);

enum class GrayMapping { MinMax, Phase };

/// 8-bit grayscale pixels, row-major. MinMax maps [min, max] to [0, 255]
/// (constant images become 128); Phase maps (-pi, pi] linearly to [0, 255].
std::vector<std::uint8_t> to_grayscale(const RealFieldd& field, GrayMapping mapping);

/// Writes a binary PGM (P5).
void export_grayscale(const std::filesystem::path& path, const RealFieldd& field, GrayMapping mapping);

}  // namespace mwholo::io
