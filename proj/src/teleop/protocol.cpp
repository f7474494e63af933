#include "vsl/teleop/protocol.hpp"

#include <array>
#include <cmath>

#include "json.hpp"

#include "vsl/errors.hpp"
#include "vsl/model.hpp"
#include "vsl/scenario.hpp"

namespace vsl::teleop {
namespace {

using json = nlohmann::json;

constexpr std::array<std::string_view, kCommandKinds> kKindNames{
    "set_sigma", "set_position", "inject_impulse", "set_payload", "pause", "resume", "reset"};

json parse(std::string_view bytes) {
  json j = json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (j.is_discarded()) throw DecodeError("<message>", "malformed message: not valid JSON");
  if (!j.is_object()) throw DecodeError("<message>", "malformed message: expected an object");
  return j;
}

const json& field(const json& obj, const char* name, const std::string& path) {
  const auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) {
    throw DecodeError(path + name, "missing required field '" + path + name + "'");
  }
  return *it;
}

double number(const json& obj, const char* name, const std::string& path) {
  const json& v = field(obj, name, path);
  if (!v.is_number()) throw DecodeError(path + name, "field '" + path + name + "' must be a number");
  return v.get<double>();
}

std::uint64_t unsigned_int(const json& obj, const char* name, const std::string& path) {
  const json& v = field(obj, name, path);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw DecodeError(path + name, "field '" + path + name + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string text(const json& obj, const char* name, const std::string& path) {
  const json& v = field(obj, name, path);
  if (!v.is_string()) throw DecodeError(path + name, "field '" + path + name + "' must be a string");
  return v.get<std::string>();
}

void check_envelope(const json& j, std::string_view expected_type) {
  const json& version = field(j, "version", "");
  if (!version.is_number_integer() || version.get<int>() != kProtocolVersion) {
    throw DecodeError("version", "unsupported protocol version (expected 1)");
  }
  if (!expected_type.empty() && text(j, "type", "") != expected_type) {
    throw DecodeError("type", "unexpected message type '" + text(j, "type", "") + "'");
  }
}

json axes(const std::array<double, kAxes>& v) { return json::array({v[0], v[1]}); }

std::array<double, kAxes> read_axes(const json& obj, const char* name) {
  const json& v = field(obj, name, "payload.record.");
  if (!v.is_array() || v.size() != kAxes || !v[0].is_number() || !v[1].is_number()) {
    throw DecodeError(std::string("payload.record.") + name, std::string("field '") + name + "' must be [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

std::string_view to_string(CommandKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<CommandKind> command_kind_from(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<CommandKind>(i);
  }
  return std::nullopt;
}

std::string encode_frame(const StateFrame& f) {
  const TelemetryRecord& r = f.record;
  json record = {
      {"t", r.t},
      {"theta", axes(r.theta)},
      {"alpha", axes(r.alpha)},
      {"theta_dot", axes(r.theta_dot)},
      {"alpha_dot", axes(r.alpha_dot)},
      {"sigma_target", r.sigma_target},
      {"sigma_measured", r.sigma_measured},
      {"k_s", r.k_s},
      {"c_s", r.c_s},
      {"tau_d", axes(r.tau_d)},
      {"tau_w", axes(r.tau_w)},
      {"load_cell", r.load_cell},
      {"m_p", r.m_p},
      {"x_uav", r.x_uav},
      {"y_uav", r.y_uav},
      {"x_tip", r.x_tip},
      {"y_tip", r.y_tip},
      {"validity", r.valid},
  };
  const StiffnessState& a = f.actuator;
  json actuator = {{"sigma_target", a.sigma_target}, {"sigma_measured", a.sigma_measured},
                   {"motor_pos", a.motor_pos},       {"motor_vel", a.motor_vel},
                   {"k_s", a.k_s},                   {"c_s", a.c_s},
                   {"error_integral", a.error_integral}};
  json j = {{"version", kProtocolVersion},
            {"type", "state"},
            {"seq", f.seq},
            {"t", f.t},
            {"payload",
             {{"record", record},
              {"actuator", actuator},
              {"disturbance",
               {{"active_impulses", f.disturbance.active_impulses},
                {"active_sustained", f.disturbance.active_sustained}}},
              {"paused", f.paused}}}};
  return j.dump();
}

StateFrame decode_frame(std::string_view bytes) {
  const json j = parse(bytes);
  check_envelope(j, "state");
  StateFrame f;
  f.seq = unsigned_int(j, "seq", "");
  f.t = number(j, "t", "");
  const json& p = field(j, "payload", "");
  const json& r = field(p, "record", "payload.");
  const std::string rp = "payload.record.";
  TelemetryRecord& rec = f.record;
  rec.t = number(r, "t", rp);
  rec.theta = read_axes(r, "theta");
  rec.alpha = read_axes(r, "alpha");
  rec.theta_dot = read_axes(r, "theta_dot");
  rec.alpha_dot = read_axes(r, "alpha_dot");
  rec.sigma_target = number(r, "sigma_target", rp);
  rec.sigma_measured = number(r, "sigma_measured", rp);
  rec.k_s = number(r, "k_s", rp);
  rec.c_s = number(r, "c_s", rp);
  rec.tau_d = read_axes(r, "tau_d");
  rec.tau_w = read_axes(r, "tau_w");
  rec.load_cell = number(r, "load_cell", rp);
  rec.m_p = number(r, "m_p", rp);
  rec.x_uav = number(r, "x_uav", rp);
  rec.y_uav = number(r, "y_uav", rp);
  rec.x_tip = number(r, "x_tip", rp);
  rec.y_tip = number(r, "y_tip", rp);
  const json& valid = field(r, "validity", rp);
  if (!valid.is_boolean()) throw DecodeError(rp + "validity", "field 'validity' must be a boolean");
  rec.valid = valid.get<bool>();

  const json& a = field(p, "actuator", "payload.");
  const std::string ap = "payload.actuator.";
  f.actuator.sigma_target = number(a, "sigma_target", ap);
  f.actuator.sigma_measured = number(a, "sigma_measured", ap);
  f.actuator.motor_pos = number(a, "motor_pos", ap);
  f.actuator.motor_vel = number(a, "motor_vel", ap);
  f.actuator.k_s = number(a, "k_s", ap);
  f.actuator.c_s = number(a, "c_s", ap);
  f.actuator.error_integral = number(a, "error_integral", ap);

  const json& d = field(p, "disturbance", "payload.");
  f.disturbance.active_impulses = unsigned_int(d, "active_impulses", "payload.disturbance.");
  f.disturbance.active_sustained = unsigned_int(d, "active_sustained", "payload.disturbance.");
  const json& paused = field(p, "paused", "payload.");
  if (!paused.is_boolean()) throw DecodeError("payload.paused", "field 'payload.paused' must be a boolean");
  f.paused = paused.get<bool>();
  return f;
}

std::string encode_command(const CommandMessage& c) {
  json payload = json::object();
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SetSigma>) {
          payload["sigma"] = p.sigma;
        } else if constexpr (std::is_same_v<P, SetPosition>) {
          payload["x"] = p.x;
          payload["y"] = p.y;
        } else if constexpr (std::is_same_v<P, InjectImpulse>) {
          payload["axis"] = vsl::to_string(p.axis);
          payload["magnitude"] = p.magnitude;
          payload["duration"] = p.duration;
          payload["target"] = vsl::to_string(p.target);
        } else if constexpr (std::is_same_v<P, SetPayload>) {
          payload["mass"] = p.mass;
        }
      },
      c.payload);
  json j = {{"version", kProtocolVersion},
            {"type", std::string(to_string(c.kind))},
            {"seq", c.seq},
            {"t", c.t},
            {"client_id", c.client_id},
            {"payload", payload}};
  return j.dump();
}

CommandMessage decode_command(std::string_view bytes) {
  const json j = parse(bytes);
  check_envelope(j, "");
  CommandMessage c;
  const std::string type = text(j, "type", "");
  const auto kind = command_kind_from(type);
  if (!kind) throw DecodeError("type", "unknown command type '" + type + "'");
  c.kind = *kind;
  c.seq = unsigned_int(j, "seq", "");
  c.client_id = text(j, "client_id", "");
  if (const auto it = j.find("t"); it != j.end() && it->is_number()) c.t = it->get<double>();

  const auto pit = j.find("payload");
  const json empty = json::object();
  const json& p = (pit == j.end() || pit->is_null()) ? empty : *pit;
  if (!p.is_object()) throw DecodeError("payload", "field 'payload' must be an object");
  switch (c.kind) {
    case CommandKind::set_sigma:
      c.payload = SetSigma{number(p, "sigma", "payload.")};
      break;
    case CommandKind::set_position:
      c.payload = SetPosition{number(p, "x", "payload."), number(p, "y", "payload.")};
      break;
    case CommandKind::inject_impulse: {
      InjectImpulse imp;
      const std::string axis = text(p, "axis", "payload.");
      if (axis == "x" || axis == "roll") imp.axis = Axis::x;
      else if (axis == "y" || axis == "pitch") imp.axis = Axis::y;
      else throw DecodeError("payload.axis", "field 'payload.axis' must be x|y");
      imp.magnitude = number(p, "magnitude", "payload.");
      if (p.contains("duration")) imp.duration = number(p, "duration", "payload.");
      if (p.contains("target")) {
        const std::string target = text(p, "target", "payload.");
        if (target == "tip") imp.target = TorqueTarget::tip;
        else if (target == "body") imp.target = TorqueTarget::body;
        else throw DecodeError("payload.target", "field 'payload.target' must be tip|body");
      }
      c.payload = imp;
      break;
    }
    case CommandKind::set_payload:
      c.payload = SetPayload{number(p, "mass", "payload.")};
      break;
    case CommandKind::pause:
    case CommandKind::resume:
    case CommandKind::reset:
      c.payload = NoPayload{};
      break;
  }
  return c;
}

void validate_command(const CommandMessage& c) {
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SetSigma>) {
          validate_sigma(p.sigma);
        } else if constexpr (std::is_same_v<P, SetPosition>) {
          if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DomainError("position setpoint must be finite");
        } else if constexpr (std::is_same_v<P, InjectImpulse>) {
          validate_impulse(p.magnitude, p.duration);
        } else if constexpr (std::is_same_v<P, SetPayload>) {
          validate_payload_mass(p.mass);
        }
      },
      c.payload);
}

std::string encode_error(std::uint64_t seq, std::string_view field_name, std::string_view message) {
  json j = {{"version", kProtocolVersion},
            {"type", "error"},
            {"seq", seq},
            {"t", 0.0},
            {"payload", {{"field", std::string(field_name)}, {"message", std::string(message)}}}};
  return j.dump();
}

std::string encode_ack(std::uint64_t seq, std::string_view client_id) {
  json j = {{"version", kProtocolVersion},
            {"type", "ack"},
            {"seq", seq},
            {"t", 0.0},
            {"payload", {{"client_id", std::string(client_id)}}}};
  return j.dump();
}

}  // namespace vsl::teleop
