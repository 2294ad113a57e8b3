#pragma once

// End-to-end run: scene -> object wave -> holograms -> spectrum -> +1 order
// -> object-plane reconstruction -> enhancement and quality scores, with
// every artifact and numeric decision written to an output directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mwholo/enhance.hpp"
#include "mwholo/hologram.hpp"
#include "mwholo/metrics.hpp"
#include "mwholo/reconstruct.hpp"
#include "mwholo/reference.hpp"
#include "mwholo/spectral.hpp"
#include "mwholo/wave.hpp"

namespace mwholo {

enum class PortStrategy { TwoPort, SinglePortBackground };

struct NoiseConfig {
  double snr_db = 20.0;
  std::uint64_t seed = 1;
};

struct TaperConfig {
  double ds = 25.0;
  double beam_angle_deg = 45.0;
};

struct PipelineConfig {
  double frequency_ghz = 9.1;
  std::optional<ScanGrid> grid;  // taken from the scene when absent
  double z0 = 25.0;
  double phase_step = 2.0 * EIGEN_PI / 3.0;
  double amplitude = 1.0;  // E0
  PropagationMode mode = PropagationMode::Monostatic;
  PortStrategy port_strategy = PortStrategy::TwoPort;
  std::optional<Index> filter_radius;  // "auto" when absent
  bool residual_correction = true;
  EnhancerKind enhancer = EnhancerKind::ResidualSharpen;
  Index scale_factor = 4;
  double residual_gain = 1.0;
  std::optional<std::filesystem::path> residual_file;
  std::optional<NoiseConfig> noise;
  std::optional<TaperConfig> taper;
  Index metrics_window = kDefaultSpeckleWindow;
  std::filesystem::path scene;
  std::filesystem::path output_dir = "mwholo-out";
};

/// Applies the keys present in `j` on top of `config`. Relative paths are
/// resolved against `base_dir`.
void apply_config_json(PipelineConfig& config, const nlohmann::json& j, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const PipelineConfig& config);

/// Checks the config and that referenced input files exist.
void validate(const PipelineConfig& config);

std::string to_string(PortStrategy s);
PortStrategy parse_port_strategy(const std::string& s);
PropagationMode parse_mode(const std::string& s);
std::string to_string(PropagationMode m);
EnhancerKind parse_enhancer_kind(const std::string& s);

/// Ordered key/value report, rendered as text and as JSON Lines.
class Report {
 public:
  struct Record {
    std::string section;
    std::string key;
    nlohmann::json value;
  };

  void add(std::string section, std::string key, nlohmann::json value);
  void warn(const std::string& message);

  const std::vector<Record>& records() const { return records_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const nlohmann::json* find(const std::string& section, const std::string& key) const;

  std::string text() const;
  std::string json_lines() const;

 private:
  std::vector<Record> records_;
  std::vector<std::string> warnings_;
};

void add_offset_report(Report& report, const OffsetReport<double>& r);
void add_order_map(Report& report, const OrderMap<double>& map);
void add_extraction(Report& report, const OrderExtraction<double>& e);
void add_quality(Report& report, const std::string& section, const QualityReport<double>& q);

struct PipelineResult {
  Report report;
  ComplexFieldd object;
  Hologram<double> hologram;
  OrderMap<double> orders;
  ReconstructionResult<double> reconstruction;
  RealFieldd enhanced;
  std::optional<double> energy_in_mask;
  std::vector<std::filesystem::path> artifacts;
};

/// Runs every stage; writes artifacts when `write_artifacts` is set.
/// Stage failures surface as StageError naming the stage.
PipelineResult run_pipeline(const PipelineConfig& config, bool write_artifacts = true);

}  // namespace mwholo
