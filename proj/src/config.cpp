#include <fstream>
#include <set>

#include "mwholo/pipeline.hpp"

namespace mwholo {
namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ContractError("config: unknown key '" + key + "' in " + where);
  }
}

}  // namespace

std::string to_string(PortStrategy s) {
  return s == PortStrategy::TwoPort ? "two-port" : "single-port-background";
}

PortStrategy parse_port_strategy(const std::string& s) {
  if (s == "two-port") return PortStrategy::TwoPort;
  if (s == "single-port-background") return PortStrategy::SinglePortBackground;
  throw ContractError("unknown port strategy '" + s + "' (two-port | single-port-background)");
}

std::string to_string(PropagationMode m) { return m == PropagationMode::Monostatic ? "monostatic" : "one-way"; }

PropagationMode parse_mode(const std::string& s) {
  if (s == "monostatic") return PropagationMode::Monostatic;
  if (s == "one-way") return PropagationMode::OneWay;
  throw ContractError("unknown propagation mode '" + s + "' (monostatic | one-way)");
}

EnhancerKind parse_enhancer_kind(const std::string& s) {
  if (s == "bicubic") return EnhancerKind::Bicubic;
  if (s == "residual-sharpen") return EnhancerKind::ResidualSharpen;
  if (s == "external") return EnhancerKind::External;
  throw ContractError("unknown enhancer '" + s + "' (bicubic | residual-sharpen | external)");
}

void apply_config_json(PipelineConfig& c, const json& j, const std::filesystem::path& base_dir) {
  require(j.is_object(), "config: top level must be a JSON object");
  reject_unknown(j,
                 {"frequency_ghz", "grid", "z0_mm", "phase_step_rad", "amplitude", "propagation_mode", "port_strategy",
                  "filter_radius", "residual_correction", "enhancer", "noise", "taper", "metrics_window", "scene",
                  "output_dir"},
                 "config");
  try {
    if (j.contains("frequency_ghz")) c.frequency_ghz = j.at("frequency_ghz").get<double>();
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      reject_unknown(g, {"nx", "ny", "dx", "dy"}, "grid");
      c.grid = ScanGrid{g.at("nx").get<Index>(), g.at("ny").get<Index>(), g.at("dx").get<double>(),
                        g.at("dy").get<double>()};
    }
    if (j.contains("z0_mm")) c.z0 = j.at("z0_mm").get<double>();
    if (j.contains("phase_step_rad")) c.phase_step = j.at("phase_step_rad").get<double>();
    if (j.contains("amplitude")) c.amplitude = j.at("amplitude").get<double>();
    if (j.contains("propagation_mode")) c.mode = parse_mode(j.at("propagation_mode").get<std::string>());
    if (j.contains("port_strategy")) c.port_strategy = parse_port_strategy(j.at("port_strategy").get<std::string>());
    if (j.contains("filter_radius")) {
      const json& r = j.at("filter_radius");
      if (r.is_string()) {
        require(r.get<std::string>() == "auto", "config: filter_radius must be \"auto\" or an integer");
        c.filter_radius.reset();
      } else {
        c.filter_radius = r.get<Index>();
      }
    }
    if (j.contains("residual_correction")) c.residual_correction = j.at("residual_correction").get<bool>();
    if (j.contains("enhancer")) {
      const json& e = j.at("enhancer");
      reject_unknown(e, {"kind", "scale_factor", "residual_gain", "residual_file"}, "enhancer");
      if (e.contains("kind")) c.enhancer = parse_enhancer_kind(e.at("kind").get<std::string>());
      if (e.contains("scale_factor")) c.scale_factor = e.at("scale_factor").get<Index>();
      if (e.contains("residual_gain")) c.residual_gain = e.at("residual_gain").get<double>();
      if (e.contains("residual_file")) {
        if (e.at("residual_file").is_null()) {
          c.residual_file.reset();
        } else {
          c.residual_file = resolve(e.at("residual_file").get<std::string>(), base_dir);
        }
      }
    }
    if (j.contains("noise")) {
      const json& n = j.at("noise");
      if (n.is_null()) {
        c.noise.reset();
      } else {
        reject_unknown(n, {"snr_db", "seed"}, "noise");
        NoiseConfig nc;
        if (n.contains("snr_db")) nc.snr_db = n.at("snr_db").get<double>();
        if (n.contains("seed")) nc.seed = n.at("seed").get<std::uint64_t>();
        c.noise = nc;
      }
    }
    if (j.contains("taper")) {
      const json& t = j.at("taper");
      if (t.is_null()) {
        c.taper.reset();
      } else {
        reject_unknown(t, {"ds_mm", "beam_angle_deg"}, "taper");
        TaperConfig tc;
        if (t.contains("ds_mm")) tc.ds = t.at("ds_mm").get<double>();
        if (t.contains("beam_angle_deg")) tc.beam_angle_deg = t.at("beam_angle_deg").get<double>();
        c.taper = tc;
      }
    }
    if (j.contains("metrics_window")) c.metrics_window = j.at("metrics_window").get<Index>();
    if (j.contains("scene")) c.scene = resolve(j.at("scene").get<std::string>(), base_dir);
    if (j.contains("output_dir")) c.output_dir = resolve(j.at("output_dir").get<std::string>(), base_dir);
  } catch (const json::exception& e) {
    throw ContractError(std::string("config: ") + e.what());
  }
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), e.byte);
  }
  PipelineConfig c;
  apply_config_json(c, j, path.parent_path());
  return c;
}

json to_json(const PipelineConfig& c) {
  json j;
  j["frequency_ghz"] = c.frequency_ghz;
  if (c.grid) j["grid"] = {{"nx", c.grid->nx}, {"ny", c.grid->ny}, {"dx", c.grid->dx}, {"dy", c.grid->dy}};
  j["z0_mm"] = c.z0;
  j["phase_step_rad"] = c.phase_step;
  j["amplitude"] = c.amplitude;
  j["propagation_mode"] = to_string(c.mode);
  j["port_strategy"] = to_string(c.port_strategy);
  j["filter_radius"] = c.filter_radius ? json(*c.filter_radius) : json("auto");
  j["residual_correction"] = c.residual_correction;
  j["enhancer"] = {{"kind", to_string(c.enhancer)},
                   {"scale_factor", c.scale_factor},
                   {"residual_gain", c.residual_gain},
                   {"residual_file", c.residual_file ? json(c.residual_file->string()) : json(nullptr)}};
  j["noise"] = c.noise ? json{{"snr_db", c.noise->snr_db}, {"seed", c.noise->seed}} : json(nullptr);
  j["taper"] = c.taper ? json{{"ds_mm", c.taper->ds}, {"beam_angle_deg", c.taper->beam_angle_deg}} : json(nullptr);
  j["metrics_window"] = c.metrics_window;
  j["scene"] = c.scene.string();
  j["output_dir"] = c.output_dir.string();
  return j;
}

void validate(const PipelineConfig& c) {
  require(std::isfinite(c.frequency_ghz) && c.frequency_ghz > 0, "config: frequency must be positive");
  if (c.grid) validate(*c.grid);
  require(std::isfinite(c.z0) && c.z0 > 0, "config: z0 must be positive");
  require(std::isfinite(c.amplitude) && c.amplitude > 0, "config: amplitude E0 must be positive");
  require(std::isfinite(c.phase_step) && c.phase_step > 0 && c.phase_step < 2 * EIGEN_PI,
          "config: phase step must lie in (0, 2pi)");
  require(!c.filter_radius || *c.filter_radius >= 1, "config: filter radius must be >= 1");
  require(c.scale_factor >= 1, "config: enhancer scale factor must be >= 1");
  require(std::isfinite(c.residual_gain) && c.residual_gain >= 0, "config: residual gain must be >= 0");
  require(c.metrics_window >= 3 && c.metrics_window % 2 == 1, "config: metrics window must be odd and >= 3");
  if (c.noise) require(!std::isnan(c.noise->snr_db), "config: noise snr_db must not be NaN");
  require(!c.scene.empty(), "config: no scene file given");
  require(std::filesystem::is_regular_file(c.scene), "config: scene file '" + c.scene.string() + "' not found");
  if (c.enhancer == EnhancerKind::External) {
    require(c.residual_file.has_value(), "config: external enhancer needs enhancer.residual_file");
  }
  if (c.residual_file) {
    require(std::filesystem::is_regular_file(*c.residual_file),
            "config: residual file '" + c.residual_file->string() + "' not found");
  }
}

}  // namespace mwholo
