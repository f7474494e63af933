#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "vsl/errors.hpp"
#include "vsl/telemetry.hpp"

using namespace vsl;

TEST_CASE("header is the published column list") {
  CHECK(kTelemetryHeader ==
        "t,theta_x,theta_y,alpha_x,alpha_y,theta_dot_x,theta_dot_y,alpha_dot_x,alpha_dot_y,"
        "sigma_target,sigma_measured,k_s,c_s,tau_d_x,tau_d_y,tau_w_x,tau_w_y,load_cell,m_p,"
        "x_uav,y_uav,x_tip,y_tip,validity");
}

TEST_CASE("record formatting") {
  TelemetryRecord r;
  r.t = 1.5;
  r.theta[0] = -1e-12;
  r.alpha[1] = 0.1234567;
  r.m_p = 2.0;
  const std::string line = format_record(r);
  CHECK(line.rfind("1.500000,0.000000,0.000000,0.000000,0.123457,", 0) == 0);
  CHECK(line.find("-0.000000") == std::string::npos);
  CHECK(line.substr(line.size() - 2) == ",1");
  r.valid = false;
  CHECK(format_record(r).back() == '0');
  CHECK(std::count(line.begin(), line.end(), ',') == 23);
}

TEST_CASE("empty telemetry is refused") {
  CHECK_THROWS_AS(telemetry_csv({}), ValidationError);
  CHECK_THROWS_AS(write_telemetry({}, "/tmp/never.csv"), ValidationError);
}

TEST_CASE("write and read back") {
  std::vector<TelemetryRecord> recs(3);
  for (int i = 0; i < 3; ++i) {
    recs[i].t = i * 0.01;
    recs[i].theta[1] = 0.001 * i;
    recs[i].load_cell = 19.62;
  }
  recs[2].valid = false;
  const auto path = std::filesystem::temp_directory_path() / "vsl_test_telemetry.csv";
  write_telemetry(recs, path);
  const auto back = read_telemetry(path);
  REQUIRE(back.size() == 3);
  CHECK(back[2].theta[1] == doctest::Approx(0.002));
  CHECK(back[1].load_cell == doctest::Approx(19.62));
  CHECK_FALSE(back[2].valid);
  CHECK(telemetry_csv(back) == telemetry_csv(recs));
  std::filesystem::remove(path);
}

TEST_CASE("I/O failures") {
  std::vector<TelemetryRecord> recs(1);
  CHECK_THROWS_AS(write_telemetry(recs, "/nonexistent/dir/t.csv"), IoError);
  CHECK_THROWS_AS(read_telemetry("/nonexistent/t.csv"), IoError);
}
