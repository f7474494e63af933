// Teleop wire protocol, version 1. Every message is one JSON object
//   {"version": 1, "type": ..., "seq": ..., "t": ..., "payload": {...}}
// carried as a WebSocket text message. Unknown fields are ignored.
// See docs/protocol.md for the message catalog.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "vsl/actuator.hpp"
#include "vsl/disturbance.hpp"
#include "vsl/telemetry.hpp"

namespace vsl::teleop {

inline constexpr int kProtocolVersion = 1;

class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class CommandKind { set_sigma, set_position, inject_impulse, set_payload, pause, resume, reset };
inline constexpr std::size_t kCommandKinds = 7;

std::string_view to_string(CommandKind kind);
std::optional<CommandKind> command_kind_from(std::string_view name);

struct SetSigma {
  double sigma = 0.0;
  bool operator==(const SetSigma&) const = default;
};
struct SetPosition {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const SetPosition&) const = default;
};
struct InjectImpulse {
  Axis axis = Axis::x;
  double magnitude = 0.0;
  double duration = 0.05;
  TorqueTarget target = TorqueTarget::tip;
  bool operator==(const InjectImpulse&) const = default;
};
struct SetPayload {
  double mass = 0.0;
  bool operator==(const SetPayload&) const = default;
};
struct NoPayload {
  bool operator==(const NoPayload&) const = default;
};

using CommandPayload = std::variant<SetSigma, SetPosition, InjectImpulse, SetPayload, NoPayload>;

struct CommandMessage {
  CommandKind kind = CommandKind::pause;
  CommandPayload payload = NoPayload{};
  std::string client_id;
  std::uint64_t seq = 0;
  /// Client time stamp; in scripted replay logs, the sim time at which to apply.
  double t = 0.0;

  bool operator==(const CommandMessage&) const = default;
};

struct DisturbanceSummary {
  std::size_t active_impulses = 0;
  std::size_t active_sustained = 0;
  bool operator==(const DisturbanceSummary&) const = default;
};

struct StateFrame {
  std::uint64_t seq = 0;
  double t = 0.0;
  TelemetryRecord record;
  StiffnessState actuator;
  DisturbanceSummary disturbance;
  bool paused = false;

  bool operator==(const StateFrame&) const = default;
};

std::string encode_frame(const StateFrame& frame);
StateFrame decode_frame(std::string_view bytes);

std::string encode_command(const CommandMessage& cmd);
/// Structural decoding only; throws DecodeError naming the missing/bad field.
CommandMessage decode_command(std::string_view bytes);

/// Range checks shared with the library ops; throws vsl::DomainError with the
/// library's message text.
void validate_command(const CommandMessage& cmd);

/// {"type":"error","seq":<offending seq or 0>,"payload":{"field":...,"message":...}}
std::string encode_error(std::uint64_t seq, std::string_view field, std::string_view message);
/// {"type":"ack", ...}
std::string encode_ack(std::uint64_t seq, std::string_view client_id);

}  // namespace vsl::teleop
