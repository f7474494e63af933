#include "vsl/teleop/service.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "vsl/errors.hpp"

namespace vsl::teleop {

void validate(const ServiceConfig& cfg) {
  if (!(cfg.rate_hz > 0.0)) throw DomainError("stream rate must be > 0 Hz");
  if (!(cfg.time_scale >= 0.0) || !std::isfinite(cfg.time_scale)) throw DomainError("time scale must be >= 0");
  if (cfg.max_clients == 0) throw DomainError("max clients must be >= 1");
  if (cfg.telemetry_decimate < 1) throw DomainError("telemetry decimation must be >= 1");
}

void CommandMailbox::post(CommandMessage cmd) {
  const auto slot = static_cast<std::size_t>(cmd.kind);
  std::lock_guard lock(mutex_);
  slots_[slot] = std::move(cmd);
  arrival_[slot] = ++counter_;
}

std::vector<CommandMessage> CommandMailbox::drain() {
  std::array<std::optional<CommandMessage>, kCommandKinds> taken;
  std::array<std::uint64_t, kCommandKinds> order{};
  {
    std::lock_guard lock(mutex_);
    taken = std::exchange(slots_, {});
    order = arrival_;
  }
  std::vector<std::pair<std::uint64_t, CommandMessage>> pending;
  for (std::size_t i = 0; i < kCommandKinds; ++i) {
    if (taken[i]) pending.emplace_back(order[i], std::move(*taken[i]));
  }
  std::sort(pending.begin(), pending.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<CommandMessage> out;
  out.reserve(pending.size());
  for (auto& p : pending) out.push_back(std::move(p.second));
  return out;
}

TeleopCore::TeleopCore(Scenario scenario, ServiceConfig cfg, TelemetrySink sink)
    : sim_(std::move(scenario)), cfg_(cfg), sink_(std::move(sink)) {
  validate(cfg_);
  const double steps = 1.0 / (cfg_.rate_hz * sim_.dt());
  steps_per_frame_ = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(steps)));
  if (sink_) sink_(sim_.record());
}

std::optional<std::string> TeleopCore::submit(const CommandMessage& cmd) {
  try {
    validate_command(cmd);
  } catch (const DomainError& e) {
    return std::string(e.what());
  }
  {
    std::lock_guard lock(seq_mutex_);
    auto [it, inserted] = last_seq_.try_emplace(cmd.client_id, cmd.seq);
    if (!inserted) {
      if (cmd.seq <= it->second) {
        std::ostringstream msg;
        msg << "sequence number " << cmd.seq << " not greater than " << it->second << " for client '"
            << cmd.client_id << "'";
        return msg.str();
      }
      it->second = cmd.seq;
    }
  }
  mailbox_.post(cmd);
  return std::nullopt;
}

void TeleopCore::apply(const CommandMessage& cmd) {
  switch (cmd.kind) {
    case CommandKind::set_sigma:
      sim_.command_stiffness(std::get<SetSigma>(cmd.payload).sigma);
      break;
    case CommandKind::set_position: {
      const auto& p = std::get<SetPosition>(cmd.payload);
      sim_.set_position_setpoint(p.x, p.y);
      break;
    }
    case CommandKind::inject_impulse: {
      const auto& p = std::get<InjectImpulse>(cmd.payload);
      sim_.inject_impulse(p.axis, p.magnitude, p.duration, p.target);
      break;
    }
    case CommandKind::set_payload:
      sim_.set_payload(std::get<SetPayload>(cmd.payload).mass);
      break;
    case CommandKind::pause:
      paused_ = true;
      break;
    case CommandKind::resume:
      paused_ = false;
      break;
    case CommandKind::reset:
      sim_.reset();
      break;
  }
}

StateFrame TeleopCore::snapshot() const {
  StateFrame f;
  f.seq = frame_seq_;
  f.t = sim_.time();
  f.record = sim_.record();
  f.actuator = sim_.actuator();
  f.disturbance = {sim_.active_impulses(), sim_.active_sustained()};
  f.paused = paused_;
  return f;
}

std::optional<StateFrame> TeleopCore::tick(std::uint64_t batches) {
  for (const auto& cmd : mailbox_.drain()) apply(cmd);
  if (paused_) return std::nullopt;
  const auto decimate = static_cast<std::uint64_t>(cfg_.telemetry_decimate);
  for (std::uint64_t i = 0; i < batches * steps_per_frame_; ++i) {
    sim_.advance();
    if (sink_ && sim_.step_index() % decimate == 0) sink_(sim_.record());
  }
  ++frame_seq_;
  return snapshot();
}

std::vector<CommandMessage> parse_command_log(std::string_view text) {
  std::vector<CommandMessage> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string_view::npos && line.front() != '#') {
      try {
        out.push_back(decode_command(line));
      } catch (const DecodeError& e) {
        throw DecodeError(e.field(), "command log line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  return out;
}

std::vector<CommandMessage> read_command_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read command log: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_command_log(buf.str());
}

ReplayResult replay_stepped(const Scenario& scenario, const std::vector<CommandMessage>& log,
                            const ServiceConfig& cfg,
                            const std::function<void(const StateFrame&)>& on_frame) {
  std::vector<TelemetryRecord> records;
  TeleopCore core(scenario, cfg, [&](const TelemetryRecord& r) { records.push_back(r); });
  ReplayResult out;
  std::size_t next = 0;
  const double eps = 1e-9;
  while (!core.simulation().finished()) {
    if (core.paused() && next < log.size()) {
      if (auto err = core.submit(log[next])) out.rejected.push_back(*err);
      ++next;
    }
    while (next < log.size() && log[next].t <= core.simulation().time() + eps) {
      if (auto err = core.submit(log[next])) out.rejected.push_back(*err);
      ++next;
    }
    const bool stuck = core.paused() && next >= log.size();
    if (auto frame = core.tick()) {
      if (on_frame) on_frame(*frame);
      out.frames.push_back(std::move(*frame));
    } else if (stuck) {
      break;  // paused with nothing left to resume it
    }
  }
  out.telemetry_csv = telemetry_csv(records);
  return out;
}

}  // namespace vsl::teleop
