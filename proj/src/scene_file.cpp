#include <fstream>
#include <iomanip>
#include <sstream>

#include "mwholo/io.hpp"

namespace mwholo::io {
namespace {

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw ContractError("scene line " + std::to_string(line) + ": " + message);
}

}  // namespace

SceneDescription parse_scene(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  bool have_grid = false;
  bool have_data = false;
  SceneDescription scene;

  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream line(raw);
    std::string keyword;
    if (!(line >> keyword)) continue;

    if (keyword == "grid") {
      if (have_grid) fail(line_no, "duplicate grid line");
      Index nx = 0, ny = 0;
      double dx = 0, dy = 0;
      if (!(line >> nx >> ny >> dx >> dy)) fail(line_no, "expected 'grid <nx> <ny> <dx> <dy>'");
      try {
        scene.grid = make_grid(nx, ny, dx, dy);
      } catch (const ContractError& e) {
        fail(line_no, e.what());
      }
      scene.reflectivity = ComplexFieldd(scene.grid);
      have_grid = true;
    } else if (keyword == "rect") {
      if (!have_grid) fail(line_no, "rect before grid");
      if (have_data) fail(line_no, "rect cannot follow a data block");
      RectStrip<double> r;
      if (!(line >> r.cx >> r.cy >> r.length >> r.width >> r.angle_deg)) {
        fail(line_no, "expected 'rect <cx> <cy> <length> <width> <angle_deg> [re [im]]'");
      }
      double re = 1.0, im = 0.0;
      if (line >> re) line >> im;
      if (!(r.length > 0 && r.width > 0)) fail(line_no, "rect size must be positive");
      r.reflectivity = {re, im};
      scene.strips.push_back(r);
      paint(scene.reflectivity, r);
    } else if (keyword == "data") {
      if (!have_grid) fail(line_no, "data before grid");
      if (!scene.strips.empty() || have_data) fail(line_no, "data block cannot be combined with primitives");
      for (Index n = 0; n < scene.grid.ny; ++n) {
        for (Index m = 0; m < scene.grid.nx; ++m) {
          double re = 0, im = 0;
          do {
            if (!std::getline(in, raw)) fail(line_no, "data block ended early");
            ++line_no;
            if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
          } while (raw.find_first_not_of(" \t\r") == std::string::npos);
          std::istringstream sample(raw);
          if (!(sample >> re >> im)) fail(line_no, "expected '<re> <im>'");
          scene.reflectivity(m, n) = {re, im};
        }
      }
      have_data = true;
    } else {
      fail(line_no, "unknown keyword '" + keyword + "'");
    }
  }
  if (!have_grid) fail(line_no, "missing grid line");
  require_finite(scene.reflectivity, "scene reflectivity");
  return scene;
}

SceneDescription load_scene(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open scene file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << is.rdbuf();
  return parse_scene(buffer.str());
}

std::string format_scene(const SceneDescription& scene) {
  std::ostringstream os;
  os << std::setprecision(17);
  const ScanGrid& g = scene.grid;
  os << "grid " << g.nx << ' ' << g.ny << ' ' << g.dx << ' ' << g.dy << '\n';
  if (!scene.strips.empty()) {
    for (const auto& r : scene.strips) {
      os << "rect " << r.cx << ' ' << r.cy << ' ' << r.length << ' ' << r.width << ' ' << r.angle_deg << ' '
         << r.reflectivity.real() << ' ' << r.reflectivity.imag() << '\n';
    }
    return os.str();
  }
  os << "data\n";
  for (Index n = 0; n < g.ny; ++n) {
    for (Index m = 0; m < g.nx; ++m) os << scene.reflectivity(m, n).real() << ' ' << scene.reflectivity(m, n).imag() << '\n';
  }
  return os.str();
}

}  // namespace mwholo::io
