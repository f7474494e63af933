#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vsl/model.hpp"

namespace vsl {

struct TelemetryRecord {
  double t = 0.0;
  std::array<double, kAxes> theta{};
  std::array<double, kAxes> alpha{};
  std::array<double, kAxes> theta_dot{};
  std::array<double, kAxes> alpha_dot{};
  double sigma_target = 0.0;
  double sigma_measured = 0.0;
  double k_s = 0.0;
  double c_s = 0.0;
  std::array<double, kAxes> tau_d{};
  std::array<double, kAxes> tau_w{};
  double load_cell = 0.0;
  double m_p = 0.0;
  double x_uav = 0.0;
  double y_uav = 0.0;
  double x_tip = 0.0;
  double y_tip = 0.0;
  bool valid = true;

  bool operator==(const TelemetryRecord&) const = default;
};

inline constexpr std::string_view kTelemetryHeader =
    "t,theta_x,theta_y,alpha_x,alpha_y,theta_dot_x,theta_dot_y,alpha_dot_x,alpha_dot_y,"
    "sigma_target,sigma_measured,k_s,c_s,tau_d_x,tau_d_y,tau_w_x,tau_w_y,load_cell,m_p,"
    "x_uav,y_uav,x_tip,y_tip,validity";

/// One CSV row (no newline), six decimals, negative zero printed as zero.
std::string format_record(const TelemetryRecord& r);

/// Header + rows, '\n' line endings. Throws ValidationError("no telemetry") when empty.
std::string telemetry_csv(const std::vector<TelemetryRecord>& records);

/// Throws IoError when the destination cannot be written.
void write_telemetry(const std::vector<TelemetryRecord>& records, const std::filesystem::path& destination);

/// Parses a CSV produced by write_telemetry (values carry only 6 decimals).
std::vector<TelemetryRecord> read_telemetry(const std::filesystem::path& source);

}  // namespace vsl
