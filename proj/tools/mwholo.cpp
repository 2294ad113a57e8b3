// mwholo: command-line front end for simulating, recording and
// reconstructing indirect microwave holograms.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mwholo/io.hpp"
#include "mwholo/pipeline.hpp"

namespace fs = std::filesystem;
using namespace mwholo;

namespace {

// Flags mirroring PipelineConfig; applied after the config file.
struct Overrides {
  std::optional<std::string> config;
  std::optional<double> frequency;
  std::optional<double> z0;
  std::optional<double> phase_step;
  std::optional<double> amplitude;
  std::optional<std::string> mode;
  std::optional<std::string> port_strategy;
  std::optional<std::string> radius;
  bool no_residual_correction = false;
  std::optional<std::string> enhancer;
  std::optional<Index> scale;
  std::optional<double> gain;
  std::optional<std::string> residual_file;
  std::optional<double> snr_db;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scene;
  std::optional<std::string> out_dir;
  std::optional<Index> window;
};

void add_physics_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "JSON pipeline config (flags override it)");
  cmd->add_option("--frequency", o.frequency, "Source frequency, GHz");
  cmd->add_option("--z0", o.z0, "Object standoff, mm");
  cmd->add_option("--phase-step", o.phase_step, "Reference phase increment per sample, rad");
  cmd->add_option("--amplitude", o.amplitude, "Reference amplitude E0");
  cmd->add_option("--mode", o.mode, "monostatic | one-way");
}

void add_filter_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--radius", o.radius, "Filter radius in bins, or 'auto'");
  cmd->add_flag("--no-residual-correction", o.no_residual_correction, "Skip fractional carrier removal");
}

void add_noise_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--snr-db", o.snr_db, "Inject Gaussian hologram noise at this SNR (dB)");
  cmd->add_option("--seed", o.seed, "Noise seed");
}

void add_enhancer_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--enhancer", o.enhancer, "bicubic | residual-sharpen | external");
  cmd->add_option("--scale", o.scale, "Integer upscale factor");
  cmd->add_option("--gain", o.gain, "Residual gain (residual-sharpen)");
  cmd->add_option("--residual", o.residual_file, "Residual grid file (external)");
}

PipelineConfig build_config(const Overrides& o) {
  PipelineConfig c = o.config ? load_config(*o.config) : PipelineConfig{};
  nlohmann::json j = nlohmann::json::object();
  if (o.frequency) j["frequency_ghz"] = *o.frequency;
  if (o.z0) j["z0_mm"] = *o.z0;
  if (o.phase_step) j["phase_step_rad"] = *o.phase_step;
  if (o.amplitude) j["amplitude"] = *o.amplitude;
  if (o.mode) j["propagation_mode"] = *o.mode;
  if (o.port_strategy) j["port_strategy"] = *o.port_strategy;
  if (o.radius) {
    if (*o.radius == "auto") {
      j["filter_radius"] = "auto";
    } else {
      j["filter_radius"] = std::stoll(*o.radius);
    }
  }
  if (o.no_residual_correction) j["residual_correction"] = false;
  nlohmann::json e = nlohmann::json::object();
  if (o.enhancer) e["kind"] = *o.enhancer;
  if (o.scale) e["scale_factor"] = *o.scale;
  if (o.gain) e["residual_gain"] = *o.gain;
  if (o.residual_file) e["residual_file"] = *o.residual_file;
  if (!e.empty()) j["enhancer"] = e;
  if (o.snr_db || o.seed) {
    nlohmann::json n = nlohmann::json::object();
    n["snr_db"] = o.snr_db.value_or(c.noise ? c.noise->snr_db : NoiseConfig{}.snr_db);
    n["seed"] = o.seed.value_or(c.noise ? c.noise->seed : NoiseConfig{}.seed);
    j["noise"] = n;
  }
  if (o.scene) j["scene"] = *o.scene;
  if (o.out_dir) j["output_dir"] = *o.out_dir;
  if (o.window) j["metrics_window"] = *o.window;
  apply_config_json(c, j);
  return c;
}

ReferenceWaveSpec<double> checked_reference(const PipelineConfig& c, const ScanGrid& grid) {
  const auto spec = reference_spec(c.amplitude, c.phase_step, grid);
  const auto report = validate_offset(spec, wavenumber(c.frequency_ghz));
  std::cout << "offset: " << report.describe() << '\n';
  if (!report.passes()) throw StageError("validate", report.describe());
  return spec;
}

void print_report(const Report& r) {
  std::cout << r.text();
  for (const auto& w : r.warnings()) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indirect microwave holography: simulate, record, reconstruct and score holograms"};
  app.require_subcommand(1);

  // simulate
  Overrides sim;
  std::string sim_out = "object_field.grid";
  std::optional<double> taper_ds;
  double beam_angle = 45.0;
  auto* simulate = app.add_subcommand("simulate", "Scene file -> object wave at the recording plane");
  add_physics_flags(simulate, sim);
  simulate->add_option("-s,--scene", sim.scene, "Scene file");
  simulate->add_option("-o,--out", sim_out, "Output complex grid");
  simulate->add_option("--taper-ds", taper_ds, "Apply a beam footprint taper for antenna distance ds (mm)");
  simulate->add_option("--beam-angle", beam_angle, "Beam angle for the taper, degrees");

  // record
  Overrides rec;
  std::string rec_object;
  std::string rec_port = "both";
  std::string rec_out = ".";
  auto* record_cmd = app.add_subcommand("record", "Object wave -> power holograms");
  add_physics_flags(record_cmd, rec);
  add_noise_flags(record_cmd, rec);
  record_cmd->add_option("--object", rec_object, "Complex object grid")->required();
  record_cmd->add_option("--port", rec_port, "sum | difference | both | background")
      ->check(CLI::IsMember({"sum", "difference", "both", "background"}));
  record_cmd->add_option("-o,--out-dir", rec_out, "Output directory");

  // spectrum
  Overrides spec_o;
  std::string spec_holo;
  std::string spec_out = "spectrum_magnitude.grid";
  std::optional<std::string> spec_image;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Hologram -> centered spectrum magnitude and order map");
  add_physics_flags(spectrum_cmd, spec_o);
  spectrum_cmd->add_option("--hologram", spec_holo, "Real hologram grid")->required();
  spectrum_cmd->add_option("-o,--out", spec_out, "Output magnitude grid");
  spectrum_cmd->add_option("--image", spec_image, "Also write a log-magnitude PGM");

  // reconstruct
  Overrides recon;
  std::string recon_holo;
  std::string recon_out = ".";
  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Hologram -> object-plane amplitude and wrapped phase");
  add_physics_flags(reconstruct_cmd, recon);
  add_filter_flags(reconstruct_cmd, recon);
  reconstruct_cmd->add_option("--hologram", recon_holo, "Real hologram grid (combined or background-subtracted)")
      ->required();
  reconstruct_cmd->add_option("-o,--out-dir", recon_out, "Output directory");

  // metrics
  std::string met_image;
  std::optional<std::string> met_reference;
  Index met_window = kDefaultSpeckleWindow;
  auto* metrics_cmd = app.add_subcommand("metrics", "Speckle index, SNR and SSIM of an image grid");
  metrics_cmd->add_option("--image", met_image, "Real image grid")->required();
  metrics_cmd->add_option("--reference", met_reference, "Reference grid for SSIM");
  metrics_cmd->add_option("--window", met_window, "Odd window size");

  // enhance
  Overrides enh;
  std::string enh_image;
  std::string enh_out = "enhanced.grid";
  auto* enhance_cmd = app.add_subcommand("enhance", "Upscale an amplitude image with a residual stage");
  add_enhancer_flags(enhance_cmd, enh);
  enhance_cmd->add_option("--image", enh_image, "Real amplitude grid")->required();
  enhance_cmd->add_option("-o,--out", enh_out, "Output grid");

  // pipeline
  Overrides pipe;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Run every stage and write all artifacts");
  add_physics_flags(pipeline_cmd, pipe);
  add_filter_flags(pipeline_cmd, pipe);
  add_noise_flags(pipeline_cmd, pipe);
  add_enhancer_flags(pipeline_cmd, pipe);
  pipeline_cmd->add_option("-s,--scene", pipe.scene, "Scene file");
  pipeline_cmd->add_option("-o,--out-dir", pipe.out_dir, "Output directory");
  pipeline_cmd->add_option("--port-strategy", pipe.port_strategy, "two-port | single-port-background");
  pipeline_cmd->add_option("--window", pipe.window, "Metrics window");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      const PipelineConfig c = build_config(sim);
      require(!c.scene.empty(), "simulate: no scene given");
      const auto scene_file = io::load_scene(c.scene);
      const SceneSpec<double> scene{scene_file.reflectivity, c.z0};
      std::optional<RealFieldd> taper;
      if (taper_ds) taper = beam_taper(scene_file.grid, antenna_geometry(*taper_ds, beam_angle));
      const auto object = simulate_scattered_field(scene, propagation_params(c.frequency_ghz, c.mode), taper);
      io::write_grid(sim_out, object);
      std::cout << "wrote " << sim_out << " (" << to_string(object.grid()) << ", power " << total_power(object)
                << ")\n";
    } else if (*record_cmd) {
      const PipelineConfig c = build_config(rec);
      const ComplexFieldd object = io::read_complex_grid(rec_object);
      const auto spec = checked_reference(c, object.grid());
      const ComplexFieldd reference = synthesize_reference(spec);
      const HologramMeta<double> meta{c.frequency_ghz, c.z0, spec};
      auto noisy = [&](const Hologram<double>& h, std::uint64_t k) {
        return c.noise ? add_noise(h, c.noise->snr_db, c.noise->seed + k) : h;
      };
      fs::create_directories(rec_out);
      auto out = [&](const std::string& name, const Hologram<double>& h) {
        io::write_grid(fs::path(rec_out) / name, h.data);
        std::cout << "wrote " << (fs::path(rec_out) / name).string() << " (port " << to_string(h.port) << ")\n";
      };
      if (rec_port == "sum" || rec_port == "both") {
        const auto plus = noisy(record(object, reference, Port::Sum, meta), 0);
        out("hologram_sum.grid", plus);
        if (rec_port == "both") {
          const auto minus = noisy(record(object, reference, Port::Difference, meta), 1);
          out("hologram_difference.grid", minus);
          out("hologram.grid", combine_ports(plus, minus));
        }
      } else if (rec_port == "difference") {
        out("hologram_difference.grid", noisy(record(object, reference, Port::Difference, meta), 1));
      } else {
        const auto h = noisy(record(object, reference, Port::Sum, meta), 0);
        const auto bg = noisy(record(ComplexFieldd(object.grid()), reference, Port::Sum, meta), 1);
        out("hologram_sum.grid", h);
        out("background.grid", bg);
        out("hologram.grid", subtract_background(h, bg));
      }
    } else if (*spectrum_cmd) {
      const PipelineConfig c = build_config(spec_o);
      const RealFieldd data = io::read_real_grid(spec_holo);
      const auto spec = checked_reference(c, data.grid());
      const Hologram<double> h{data, Port::Combined, {}};
      const ComplexFieldd s = hologram_spectrum(h);
      const RealFieldd magnitude(data.grid(), s.samples().abs());
      io::write_grid(spec_out, magnitude);
      if (spec_image) {
        io::export_grayscale(*spec_image, RealFieldd(data.grid(), magnitude.samples().log1p()),
                             io::GrayMapping::MinMax);
      }
      Report r;
      add_order_map(r, locate_orders(s, spec));
      print_report(r);
    } else if (*reconstruct_cmd) {
      const PipelineConfig c = build_config(recon);
      const RealFieldd data = io::read_real_grid(recon_holo);
      const auto spec = checked_reference(c, data.grid());
      const ComplexFieldd s = hologram_spectrum(Hologram<double>{data, Port::Combined, {}});
      const auto orders = locate_orders(s, spec);
      const Index radius = c.filter_radius.value_or(default_filter_radius(orders, data.grid()));
      const auto extraction = extract_plus_one_detailed(s, orders, radius, c.residual_correction);
      const auto result = reconstruct(extraction.baseband, c.z0, propagation_params(c.frequency_ghz, c.mode));
      const fs::path dir(recon_out);
      fs::create_directories(dir);
      io::write_grid(dir / "reconstruction.grid", result.field);
      io::write_grid(dir / "amplitude.grid", result.amplitude);
      io::write_grid(dir / "phase.grid", result.wrapped_phase);
      io::export_grayscale(dir / "amplitude.pgm", result.amplitude, io::GrayMapping::MinMax);
      io::export_grayscale(dir / "phase.pgm", result.wrapped_phase, io::GrayMapping::Phase);
      Report r;
      add_order_map(r, orders);
      add_extraction(r, extraction);
      print_report(r);
    } else if (*metrics_cmd) {
      const RealFieldd img = io::read_real_grid(met_image);
      std::optional<RealFieldd> ref;
      if (met_reference) ref = io::read_real_grid(*met_reference);
      Report r;
      add_quality(r, "quality", quality_report(img, ref ? &*ref : nullptr, met_window));
      print_report(r);
      std::cout << r.json_lines();
    } else if (*enhance_cmd) {
      PipelineConfig c;
      {
        Overrides only = enh;
        nlohmann::json e = nlohmann::json::object();
        if (only.enhancer) e["kind"] = *only.enhancer;
        if (only.scale) e["scale_factor"] = *only.scale;
        if (only.gain) e["residual_gain"] = *only.gain;
        if (only.residual_file) e["residual_file"] = *only.residual_file;
        apply_config_json(c, {{"enhancer", e}});
      }
      const RealFieldd img = io::read_real_grid(enh_image);
      Enhancer<double> e{c.enhancer, c.scale_factor, c.residual_gain, std::nullopt};
      if (c.enhancer == EnhancerKind::External) {
        require(c.residual_file.has_value(), "external enhancer needs --residual");
        e.external_residual = io::read_real_grid(*c.residual_file);
      }
      const RealFieldd out = enhance(img, e);
      io::write_grid(enh_out, out);
      std::cout << "wrote " << enh_out << " (" << to_string(out.grid()) << ")\n"
                << "structural_fidelity = " << structural_fidelity_check(img, out) << '\n';
    } else if (*pipeline_cmd) {
      const PipelineConfig c = build_config(pipe);
      const PipelineResult result = run_pipeline(c);
      print_report(result.report);
      std::cout << "artifacts written to " << c.output_dir.string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
