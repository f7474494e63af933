#include "vsl/telemetry.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "vsl/errors.hpp"

namespace vsl {
namespace {

void put(std::string& out, double v) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.6f", v);
  if (n > 0 && std::strcmp(buf, "-0.000000") == 0) {
    out += "0.000000";
  } else {
    out.append(buf, static_cast<std::size_t>(n));
  }
}

}  // namespace

std::string format_record(const TelemetryRecord& r) {
  std::string out;
  out.reserve(320);
  const double fields[] = {r.t,          r.theta[0],     r.theta[1],          r.alpha[0],
                           r.alpha[1],   r.theta_dot[0], r.theta_dot[1],      r.alpha_dot[0],
                           r.alpha_dot[1], r.sigma_target, r.sigma_measured, r.k_s,
                           r.c_s,        r.tau_d[0],     r.tau_d[1],          r.tau_w[0],
                           r.tau_w[1],   r.load_cell,    r.m_p,               r.x_uav,
                           r.y_uav,      r.x_tip,        r.y_tip};
  for (double v : fields) {
    put(out, v);
    out += ',';
  }
  out += r.valid ? '1' : '0';
  return out;
}

std::string telemetry_csv(const std::vector<TelemetryRecord>& records) {
  if (records.empty()) throw ValidationError("no telemetry");
  std::string out;
  out.reserve((records.size() + 1) * 300);
  out += kTelemetryHeader;
  out += '\n';
  for (const auto& r : records) {
    out += format_record(r);
    out += '\n';
  }
  return out;
}

void write_telemetry(const std::vector<TelemetryRecord>& records, const std::filesystem::path& destination) {
  const std::string csv = telemetry_csv(records);
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write telemetry: " + destination.string());
  out.write(csv.data(), static_cast<std::streamsize>(csv.size()));
  if (!out) throw IoError("write failed: " + destination.string());
}

std::vector<TelemetryRecord> read_telemetry(const std::filesystem::path& source) {
  std::ifstream in(source);
  if (!in) throw IoError("cannot read telemetry: " + source.string());
  std::string line;
  std::getline(in, line);
  if (line != kTelemetryHeader) throw ValidationError("unexpected telemetry header in " + source.string());
  std::vector<TelemetryRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != 24) throw ValidationError("malformed telemetry row in " + source.string());
    TelemetryRecord r;
    r.t = v[0];
    r.theta = {v[1], v[2]};
    r.alpha = {v[3], v[4]};
    r.theta_dot = {v[5], v[6]};
    r.alpha_dot = {v[7], v[8]};
    r.sigma_target = v[9];
    r.sigma_measured = v[10];
    r.k_s = v[11];
    r.c_s = v[12];
    r.tau_d = {v[13], v[14]};
    r.tau_w = {v[15], v[16]};
    r.load_cell = v[17];
    r.m_p = v[18];
    r.x_uav = v[19];
    r.y_uav = v[20];
    r.x_tip = v[21];
    r.y_tip = v[22];
    r.valid = v[23] != 0.0;
    out.push_back(r);
  }
  return out;
}

}  // namespace vsl
