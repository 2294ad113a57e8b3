#include <sstream>

#include "mwholo/pipeline.hpp"

namespace mwholo {

void Report::add(std::string section, std::string key, nlohmann::json value) {
  records_.push_back({std::move(section), std::move(key), std::move(value)});
}

void Report::warn(const std::string& message) { warnings_.push_back(message); }

const nlohmann::json* Report::find(const std::string& section, const std::string& key) const {
  for (const auto& r : records_) {
    if (r.section == section && r.key == key) return &r.value;
  }
  return nullptr;
}

std::string Report::text() const {
  std::ostringstream os;
  std::string current;
  for (const auto& r : records_) {
    if (r.section != current) {
      if (!current.empty()) os << '\n';
      os << '[' << r.section << "]\n";
      current = r.section;
    }
    os << "  " << r.key << " = " << (r.value.is_string() ? r.value.get<std::string>() : r.value.dump()) << '\n';
  }
  if (!warnings_.empty()) {
    os << "\n[warnings]\n";
    for (const auto& w : warnings_) os << "  " << w << '\n';
  }
  return os.str();
}

std::string Report::json_lines() const {
  std::ostringstream os;
  for (const auto& r : records_) {
    os << nlohmann::json{{"section", r.section}, {"key", r.key}, {"value", r.value}}.dump() << '\n';
  }
  for (const auto& w : warnings_) os << nlohmann::json{{"section", "warning"}, {"key", "message"}, {"value", w}}.dump() << '\n';
  return os.str();
}

void add_offset_report(Report& report, const OffsetReport<double>& r) {
  report.add("validation", "kr_x_rad_per_mm", r.kr_x);
  report.add("validation", "kr_y_rad_per_mm", r.kr_y);
  report.add("validation", "two_k_rad_per_mm", r.two_k);
  report.add("validation", "nyquist_x_rad_per_mm", r.nyquist_x);
  report.add("validation", "nyquist_y_rad_per_mm", r.nyquist_y);
  report.add("validation", "wavelength_mm", r.wavelength);
  report.add("validation", "lambda_over_6_mm", r.lambda_over_6());
  report.add("validation", "dx_mm", r.dx);
  report.add("validation", "dy_mm", r.dy);
  report.add("validation", "offset_ok", r.offset_ok);
  report.add("validation", "nyquist_ok", r.nyquist_ok);
  report.add("validation", "passes", r.passes());
}

void add_order_map(Report& report, const OrderMap<double>& map) {
  report.add("orders", "dc", nlohmann::json::array({map.dc.x, map.dc.y}));
  report.add("orders", "plus_one", nlohmann::json::array({map.plus_one.x, map.plus_one.y}));
  report.add("orders", "minus_one", nlohmann::json::array({map.minus_one.x, map.minus_one.y}));
  report.add("orders", "predicted_plus_one",
             nlohmann::json::array({map.predicted_plus_one.x, map.predicted_plus_one.y}));
}

void add_extraction(Report& report, const OrderExtraction<double>& e) {
  report.add("filter", "window", "hard-circular");
  report.add("filter", "radius_bins", e.radius);
  report.add("filter", "integer_shift_bins", nlohmann::json::array({e.shift.x, e.shift.y}));
  report.add("filter", "residual_carrier_bins", nlohmann::json::array({e.residual.x, e.residual.y}));
  report.add("filter", "residual_carrier_corrected", e.residual_corrected);
}

void add_quality(Report& report, const std::string& section, const QualityReport<double>& q) {
  report.add(section, "window", q.window);
  report.add(section, "speckle_index", q.speckle_index);
  report.add(section, "snr", q.snr.unbounded ? nlohmann::json("unbounded") : nlohmann::json(q.snr.value));
  report.add(section, "excluded_pixels", q.excluded_pixels);
  if (q.ssim) {
    report.add(section, "ssim", *q.ssim);
    report.add(section, "c1", q.c1);
    report.add(section, "c2", q.c2);
  }
}

}  // namespace mwholo
