#include <cmath>
#include <fstream>
#include <utility>

#include "mwholo/io.hpp"
#include "mwholo/pipeline.hpp"
#include "mwholo/scene.hpp"

namespace mwholo {
namespace {

template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os << text;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, bool write_artifacts) {
  PipelineResult result;
  Report& report = result.report;

  stage("config", [&] { validate(config); });
  const io::SceneDescription scene_file = stage("scene", [&] { return io::load_scene(config.scene); });
  const ScanGrid grid = config.grid.value_or(scene_file.grid);
  // Primitives are in mm and re-rasterize onto any grid; sampled data cannot.
  const bool sampled = scene_file.strips.empty() && (scene_file.reflectivity.samples().abs() > 0.0).any();
  const ComplexFieldd reflectivity = stage("scene", [&] {
    if (grid == scene_file.grid) return scene_file.reflectivity;
    require(!sampled, "scene data block is sampled on " + to_string(scene_file.grid) + " but the config grid is " +
                          to_string(grid));
    return rasterize(grid, scene_file.strips);
  });

  const auto params = stage("config", [&] { return propagation_params(config.frequency_ghz, config.mode); });
  const auto ref_spec = stage("reference", [&] { return reference_spec(config.amplitude, config.phase_step, grid); });

  const OffsetReport<double> offset = validate_offset(ref_spec, params.k);
  add_offset_report(report, offset);
  if (!offset.passes()) throw StageError("validate", offset.describe());

  report.add("config", "frequency_ghz", config.frequency_ghz);
  report.add("config", "grid", nlohmann::json::array({grid.nx, grid.ny, grid.dx, grid.dy}));
  report.add("config", "z0_mm", config.z0);
  report.add("config", "phase_step_rad", config.phase_step);
  report.add("config", "amplitude", config.amplitude);
  report.add("config", "propagation_mode", to_string(config.mode));
  report.add("config", "port_strategy", to_string(config.port_strategy));
  report.add("config", "evanescent_forward", "damped");
  report.add("config", "evanescent_backward", "zeroed");

  // Forward model
  const SceneSpec<double> scene{reflectivity, config.z0};
  std::optional<RealFieldd> taper;
  if (config.taper) {
    taper = stage("simulate", [&] {
      return beam_taper(grid, antenna_geometry(config.taper->ds, config.taper->beam_angle_deg));
    });
    report.add("simulate", "taper_ds_mm", config.taper->ds);
    report.add("simulate", "taper_beam_angle_deg", config.taper->beam_angle_deg);
  }
  result.object = stage("simulate", [&] { return simulate_scattered_field(scene, params, taper); });
  const double object_power = total_power(result.object);
  report.add("simulate", "object_power", object_power);
  if (!(object_power > 0.0)) report.warn("no object energy: the scene produces a zero object wave");

  // Recording
  const ComplexFieldd reference = synthesize_reference(ref_spec);
  const HologramMeta<double> meta{config.frequency_ghz, config.z0, ref_spec};
  auto noisy = [&](const Hologram<double>& h, std::uint64_t offset_seed) {
    return config.noise ? add_noise(h, config.noise->snr_db, config.noise->seed + offset_seed) : h;
  };
  Hologram<double> first, second;
  result.hologram = stage("record", [&] {
    if (config.port_strategy == PortStrategy::TwoPort) {
      first = noisy(record(result.object, reference, Port::Sum, meta), 0);
      second = noisy(record(result.object, reference, Port::Difference, meta), 1);
      return combine_ports(first, second);
    }
    first = noisy(record(result.object, reference, Port::Sum, meta), 0);
    second = noisy(record(ComplexFieldd(grid), reference, Port::Sum, meta), 1);
    return subtract_background(first, second);
  });
  if (config.noise) {
    report.add("record", "noise_snr_db", config.noise->snr_db);
    report.add("record", "noise_seed", config.noise->seed);
  }

  // Spectrum and order filtering
  const ComplexFieldd spectrum = hologram_spectrum(result.hologram);
  result.orders = stage("spectrum", [&] { return locate_orders(spectrum, ref_spec); });
  add_order_map(report, result.orders);
  const Index radius = config.filter_radius.value_or(default_filter_radius(result.orders, grid));
  report.add("filter", "radius_source", config.filter_radius ? "config" : "auto");
  const OrderExtraction<double> extraction = stage("filter", [&] {
    return extract_plus_one_detailed(spectrum, result.orders, radius, config.residual_correction);
  });
  add_extraction(report, extraction);

  // Reconstruction
  result.reconstruction = stage("reconstruct", [&] { return reconstruct(extraction.baseband, config.z0, params); });
  const RealFieldd& amplitude = result.reconstruction.amplitude;
  const Mask support = dilate(support_mask(scene.reflectivity), 1);
  if (support.any()) {
    result.energy_in_mask = energy_fraction_in(amplitude, support);
    report.add("reconstruct", "energy_in_dilated_mask", *result.energy_in_mask);
  }
  report.add("reconstruct", "amplitude_max", amplitude.samples().maxCoeff());

  // Enhancement (amplitude only; wrapped phase is never resampled)
  result.enhanced = stage("enhance", [&] {
    Enhancer<double> e{config.enhancer, config.scale_factor, config.residual_gain, std::nullopt};
    if (config.enhancer == EnhancerKind::External) e.external_residual = io::read_real_grid(*config.residual_file);
    return enhance(amplitude, e);
  });
  report.add("enhance", "kind", to_string(config.enhancer));
  report.add("enhance", "scale_factor", config.scale_factor);
  report.add("enhance", "residual_gain", config.residual_gain);

  const bool has_amplitude = (amplitude.samples() > 0.0).any();
  if (has_amplitude) {
    stage("metrics", [&] {
      const Index window = std::min({config.metrics_window, grid.nx, grid.ny});
      add_quality(report, "quality_before", quality_report(amplitude, nullptr, window));
      add_quality(report, "quality_after", quality_report(result.enhanced, nullptr, window));
      report.add("quality_after", "structural_fidelity", structural_fidelity_check(amplitude, result.enhanced, window));
    });
  } else {
    report.warn("no object energy: reconstructed amplitude is identically zero, quality metrics skipped");
  }

  if (!write_artifacts) return result;

  stage("write", [&] {
    const auto& dir = config.output_dir;
    std::filesystem::create_directories(dir);
    auto grid_out = [&](const std::string& name, const auto& field) {
      io::write_grid(dir / name, field);
      result.artifacts.push_back(dir / name);
    };
    auto image_out = [&](const std::string& name, const RealFieldd& field, io::GrayMapping mapping) {
      io::export_grayscale(dir / name, field, mapping);
      result.artifacts.push_back(dir / name);
    };

    grid_out("object_field.grid", result.object);
    if (config.port_strategy == PortStrategy::TwoPort) {
      grid_out("hologram_sum.grid", first.data);
      grid_out("hologram_difference.grid", second.data);
    } else {
      grid_out("hologram_sum.grid", first.data);
      grid_out("background.grid", second.data);
    }
    grid_out("hologram.grid", result.hologram.data);
    const RealFieldd magnitude(grid, spectrum.samples().abs());
    grid_out("spectrum_magnitude.grid", magnitude);
    grid_out("reconstruction.grid", result.reconstruction.field);
    grid_out("amplitude.grid", amplitude);
    grid_out("phase.grid", result.reconstruction.wrapped_phase);
    grid_out("enhanced.grid", result.enhanced);

    image_out("hologram.pgm", result.hologram.data, io::GrayMapping::MinMax);
    image_out("spectrum.pgm", RealFieldd(grid, magnitude.samples().log1p()), io::GrayMapping::MinMax);
    image_out("amplitude.pgm", amplitude, io::GrayMapping::MinMax);
    image_out("phase.pgm", result.reconstruction.wrapped_phase, io::GrayMapping::Phase);
    image_out("enhanced.pgm", result.enhanced, io::GrayMapping::MinMax);

    write_text(dir / "config.json", to_json(config).dump(2) + "\n");
    write_text(dir / "report.txt", report.text());
    write_text(dir / "report.jsonl", report.json_lines());
    result.artifacts.push_back(dir / "config.json");
    result.artifacts.push_back(dir / "report.txt");
    result.artifacts.push_back(dir / "report.jsonl");
  });
  return result;
}

}  // namespace mwholo
