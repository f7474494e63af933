// Simulation owner for the teleop service. Network ingress calls submit()
// from any thread; the owner calls tick(). Commands land in a bounded
// mailbox (one slot per kind, latest wins) drained at step boundaries.
#pragma once

#include <array>
#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "vsl/scenario.hpp"
#include "vsl/simulation.hpp"
#include "vsl/teleop/protocol.hpp"

namespace vsl::teleop {

struct ServiceConfig {
  double rate_hz = 30.0;
  /// Sim seconds per wall second; 0 selects stepped (unpaced, scripted) mode.
  double time_scale = 1.0;
  std::size_t max_clients = 8;
  int telemetry_decimate = 10;
};

void validate(const ServiceConfig& cfg);

class CommandMailbox {
 public:
  void post(CommandMessage cmd);
  /// Pending commands in arrival order, one per kind at most.
  std::vector<CommandMessage> drain();

 private:
  std::mutex mutex_;
  std::array<std::optional<CommandMessage>, kCommandKinds> slots_{};
  std::array<std::uint64_t, kCommandKinds> arrival_{};
  std::uint64_t counter_ = 0;
};

class TeleopCore {
 public:
  using TelemetrySink = std::function<void(const TelemetryRecord&)>;

  TeleopCore(Scenario scenario, ServiceConfig cfg, TelemetrySink sink = {});

  /// Thread-safe. Returns an error message when the command is rejected
  /// (range validation or non-increasing per-client sequence number).
  std::optional<std::string> submit(const CommandMessage& cmd);

  /// Applies pending commands, advances `batches` frame periods unless paused,
  /// and returns the frame (none while paused).
  std::optional<StateFrame> tick(std::uint64_t batches = 1);

  StateFrame snapshot() const;

  std::uint64_t steps_per_frame() const { return steps_per_frame_; }
  double frame_period() const { return static_cast<double>(steps_per_frame_) * sim_.dt(); }
  bool paused() const { return paused_; }
  const Simulation& simulation() const { return sim_; }
  const ServiceConfig& config() const { return cfg_; }

 private:
  void apply(const CommandMessage& cmd);

  Simulation sim_;
  ServiceConfig cfg_;
  TelemetrySink sink_;
  CommandMailbox mailbox_;
  std::mutex seq_mutex_;
  std::map<std::string, std::uint64_t> last_seq_;
  std::uint64_t steps_per_frame_ = 1;
  std::uint64_t frame_seq_ = 0;
  bool paused_ = false;
};

/// JSON-lines command log; each line is a command envelope whose `t` is the
/// sim time at which it is applied. Throws DecodeError with the line number.
std::vector<CommandMessage> read_command_log(const std::filesystem::path& path);
std::vector<CommandMessage> parse_command_log(std::string_view text);

struct ReplayResult {
  std::string telemetry_csv;
  std::vector<StateFrame> frames;
  std::vector<std::string> rejected;  // error text per rejected log entry
};

/// Stepped mode: no wall pacing; each log entry is submitted at the first
/// frame boundary with sim time >= its t (immediately while paused). Runs
/// until the scenario duration. Deterministic.
ReplayResult replay_stepped(const Scenario& scenario, const std::vector<CommandMessage>& log,
                            const ServiceConfig& cfg,
                            const std::function<void(const StateFrame&)>& on_frame = {});

}  // namespace vsl::teleop
