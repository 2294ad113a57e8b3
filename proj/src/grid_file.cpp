#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <span>

#include "mwholo/io.hpp"

namespace mwholo::io {
namespace {

template <typename U>
void put_le(std::vector<std::uint8_t>& out, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

template <typename U>
U get_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(static_cast<U>(bytes[offset + i]) << (8 * i));
  return value;
}

void put_f64(std::vector<std::uint8_t>& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

double get_f64(std::span<const std::uint8_t> bytes, std::size_t offset) {
  return std::bit_cast<double>(get_le<std::uint64_t>(bytes, offset));
}

std::vector<std::uint8_t> header(const ScanGrid& g, GridDtype dtype) {
  std::vector<std::uint8_t> out;
  out.reserve(kGridHeaderSize + static_cast<std::size_t>(g.size()) * 16);
  out.insert(out.end(), std::begin(kGridMagic), std::end(kGridMagic));
  put_le(out, kGridVersion);
  out.push_back(static_cast<std::uint8_t>(dtype));
  out.push_back(0);
  put_le(out, static_cast<std::uint32_t>(g.nx));
  put_le(out, static_cast<std::uint32_t>(g.ny));
  put_f64(out, g.dx);
  put_f64(out, g.dy);
  return out;
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

std::vector<std::uint8_t> encode_grid(const RealFieldd& field) {
  require_finite(field, "write_grid");
  auto out = header(field.grid(), GridDtype::Real);
  for (Index n = 0; n < field.grid().ny; ++n) {
    for (Index m = 0; m < field.grid().nx; ++m) put_f64(out, field(m, n));
  }
  return out;
}

std::vector<std::uint8_t> encode_grid(const ComplexFieldd& field) {
  require_finite(field, "write_grid");
  auto out = header(field.grid(), GridDtype::Complex);
  for (Index n = 0; n < field.grid().ny; ++n) {
    for (Index m = 0; m < field.grid().nx; ++m) {
      put_f64(out, field(m, n).real());
      put_f64(out, field(m, n).imag());
    }
  }
  return out;
}

GridData decode_grid(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kGridHeaderSize) {
    throw ParseError("truncated grid header: " + std::to_string(bytes.size()) + " of " +
                         std::to_string(kGridHeaderSize) + " bytes",
                     bytes.size());
  }
  if (std::memcmp(bytes.data(), kGridMagic, sizeof(kGridMagic)) != 0) throw ParseError("bad grid magic", 0);
  if (const auto version = get_le<std::uint16_t>(bytes, 4); version != kGridVersion) {
    throw ParseError("unsupported grid version " + std::to_string(version), 4);
  }
  const std::uint8_t dtype = bytes[6];
  if (dtype != static_cast<std::uint8_t>(GridDtype::Real) && dtype != static_cast<std::uint8_t>(GridDtype::Complex)) {
    throw ParseError("unknown grid dtype tag " + std::to_string(dtype), 6);
  }
  const auto nx = get_le<std::uint32_t>(bytes, 8);
  const auto ny = get_le<std::uint32_t>(bytes, 12);
  if (nx < 2) throw ParseError("grid nx must be >= 2, got " + std::to_string(nx), 8);
  if (ny < 2) throw ParseError("grid ny must be >= 2, got " + std::to_string(ny), 12);
  const double dx = get_f64(bytes, 16);
  const double dy = get_f64(bytes, 24);
  if (!(std::isfinite(dx) && dx > 0)) throw ParseError("grid dx must be positive", 16);
  if (!(std::isfinite(dy) && dy > 0)) throw ParseError("grid dy must be positive", 24);

  const ScanGrid grid{nx, ny, dx, dy};
  const std::size_t per_sample = dtype == static_cast<std::uint8_t>(GridDtype::Real) ? 1 : 2;
  const std::size_t values = static_cast<std::size_t>(nx) * ny * per_sample;
  const std::size_t expected = kGridHeaderSize + values * 8;
  if (bytes.size() < expected) {
    const std::size_t complete = (bytes.size() - kGridHeaderSize) / 8;
    throw ParseError("truncated grid payload: expected " + std::to_string(expected) + " bytes, got " +
                         std::to_string(bytes.size()),
                     kGridHeaderSize + complete * 8);
  }
  if (bytes.size() > expected) {
    throw ParseError("trailing bytes after grid payload", expected);
  }

  auto value = [&](std::size_t i) {
    const std::size_t offset = kGridHeaderSize + i * 8;
    const double v = get_f64(bytes, offset);
    if (!std::isfinite(v)) throw ParseError("non-finite grid sample", offset);
    return v;
  };
  if (per_sample == 1) {
    RealFieldd f(grid);
    for (Index n = 0; n < grid.ny; ++n) {
      for (Index m = 0; m < grid.nx; ++m) f(m, n) = value(static_cast<std::size_t>(n * grid.nx + m));
    }
    return f;
  }
  ComplexFieldd f(grid);
  for (Index n = 0; n < grid.ny; ++n) {
    for (Index m = 0; m < grid.nx; ++m) {
      const auto i = static_cast<std::size_t>(n * grid.nx + m);
      f(m, n) = {value(2 * i), value(2 * i + 1)};
    }
  }
  return f;
}

void write_grid(const std::filesystem::path& path, const RealFieldd& field) { write_bytes(path, encode_grid(field)); }

void write_grid(const std::filesystem::path& path, const ComplexFieldd& field) {
  write_bytes(path, encode_grid(field));
}

GridData read_grid(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  try {
    return decode_grid(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.message(), e.offset());
  }
}

RealFieldd read_real_grid(const std::filesystem::path& path) {
  auto data = read_grid(path);
  if (auto* f = std::get_if<RealFieldd>(&data)) return std::move(*f);
  throw ParseError(path.string() + ": expected a real grid, found complex", 6);
}

ComplexFieldd read_complex_grid(const std::filesystem::path& path) {
  auto data = read_grid(path);
  if (auto* f = std::get_if<ComplexFieldd>(&data)) return std::move(*f);
  return to_complex(std::get<RealFieldd>(data));
}

}  // namespace mwholo::io
