#include <atomic>
#include <chrono>
#include <thread>

#include "doctest.h"
#include "json.hpp"
#include "vsl/errors.hpp"
#include "vsl/teleop/server.hpp"
#include "vsl/teleop/service.hpp"
#include "ws_client.hpp"

using namespace vsl;
using namespace vsl::teleop;
using nlohmann::json;

namespace {

const std::string kDir = VSL_SCENARIO_DIR;

Scenario demo() { return load_scenario_file(kDir + "/teleop_demo.scenario"); }

CommandMessage cmd(CommandKind k, CommandPayload p, std::uint64_t seq, double t = 0.0, std::string client = "op") {
  return {k, std::move(p), std::move(client), seq, t};
}

template <typename Pred>
bool wait_for(Pred pred) {
  for (int i = 0; i < 2000; ++i) {
    if (pred()) return true;
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  return false;
}

}  // namespace

TEST_CASE("service config validation") {
  ServiceConfig c;
  CHECK_NOTHROW(validate(c));
  c.rate_hz = 0.0;
  CHECK_THROWS_AS(validate(c), DomainError);
  c = {};
  c.time_scale = -1.0;
  CHECK_THROWS_AS(validate(c), DomainError);
  c = {};
  c.max_clients = 0;
  CHECK_THROWS_AS(validate(c), DomainError);
}

TEST_CASE("mailbox keeps the latest command per kind in arrival order") {
  CommandMailbox box;
  box.post(cmd(CommandKind::set_sigma, SetSigma{0.2}, 1));
  box.post(cmd(CommandKind::pause, NoPayload{}, 2));
  box.post(cmd(CommandKind::set_sigma, SetSigma{0.9}, 3));
  const auto out = box.drain();
  REQUIRE(out.size() == 2);
  CHECK(out[0].kind == CommandKind::pause);
  CHECK(std::get<SetSigma>(out[1].payload).sigma == 0.9);
  CHECK(box.drain().empty());
}

TEST_CASE("frame pacing") {
  TeleopCore core(demo(), {});
  CHECK(core.steps_per_frame() == 33);
  CHECK(core.frame_period() == doctest::Approx(0.033));
  const auto f = core.tick();
  REQUIRE(f);
  CHECK(f->seq == 1);
  CHECK(f->t == doctest::Approx(0.033));
  CHECK(core.tick(3)->t == doctest::Approx(0.132));
}

TEST_CASE("submit validates ranges and sequence numbers") {
  TeleopCore core(demo(), {});
  CHECK_FALSE(core.submit(cmd(CommandKind::set_sigma, SetSigma{0.5}, 1)));
  CHECK(core.submit(cmd(CommandKind::set_sigma, SetSigma{0.6}, 1)).value().find("sequence") != std::string::npos);
  CHECK(core.submit(cmd(CommandKind::set_sigma, SetSigma{1.5}, 2)).value() == "sigma out of [0,1]: 1.5");
  CHECK_FALSE(core.submit(cmd(CommandKind::set_sigma, SetSigma{0.7}, 1, 0.0, "other")));
  const auto f = core.tick();
  CHECK(f->actuator.sigma_target == 0.7);
}

TEST_CASE("pause emits nothing and freezes time; resume continues") {
  TeleopCore core(demo(), {});
  core.tick();
  core.submit(cmd(CommandKind::pause, NoPayload{}, 1));
  CHECK_FALSE(core.tick());
  CHECK(core.paused());
  const double t = core.simulation().time();
  CHECK_FALSE(core.tick());
  CHECK(core.simulation().time() == t);
  core.submit(cmd(CommandKind::resume, NoPayload{}, 2));
  const auto f = core.tick();
  REQUIRE(f);
  CHECK_FALSE(f->paused);
  CHECK(f->t > t);
}

TEST_CASE("commands act on the simulation") {
  TeleopCore core(demo(), {});
  core.submit(cmd(CommandKind::inject_impulse, InjectImpulse{Axis::y, 4.0, 0.1}, 1));
  core.submit(cmd(CommandKind::set_payload, SetPayload{1.2}, 2));
  core.submit(cmd(CommandKind::set_position, SetPosition{2.0, 0.0}, 3));
  const auto f = core.tick();
  CHECK(f->disturbance.active_impulses == 1);
  CHECK(f->record.m_p == 1.2);
  CHECK(f->record.x_uav > 0.0);
  CHECK(f->record.theta[1] == 0.0);
  CHECK(f->record.alpha[1] != 0.0);
  core.submit(cmd(CommandKind::reset, NoPayload{}, 4));
  const auto g = core.tick();
  CHECK(g->t > f->t);
  CHECK(g->record.m_p == 0.3);
  CHECK(g->disturbance.active_impulses == 0);
}

TEST_CASE("telemetry sink receives decimated records") {
  std::vector<TelemetryRecord> recs;
  ServiceConfig cfg;
  cfg.telemetry_decimate = 11;
  TeleopCore core(demo(), cfg, [&](const TelemetryRecord& r) { recs.push_back(r); });
  core.tick();
  REQUIRE(recs.size() == 4);
  CHECK(recs[0].t == 0.0);
  CHECK(recs[3].t == doctest::Approx(0.033));
}

TEST_CASE("command log parsing") {
  const auto log = parse_command_log(
      "# comment\n"
      "{\"version\":1,\"type\":\"set_sigma\",\"client_id\":\"s\",\"seq\":2,\"t\":5.0,\"payload\":{\"sigma\":1}}\n"
      "\n"
      "{\"version\":1,\"type\":\"pause\",\"client_id\":\"s\",\"seq\":1,\"t\":1.0}\n");
  REQUIRE(log.size() == 2);
  CHECK(log[0].kind == CommandKind::pause);
  CHECK(log[1].t == 5.0);
  try {
    parse_command_log("# a\n{\"version\":1}\n");
    FAIL("expected DecodeError");
  } catch (const DecodeError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(read_command_log("/nonexistent.commands"), IoError);
}

TEST_CASE("stepped replay is deterministic and applies commands on time") {
  const auto log = read_command_log(kDir + "/teleop_demo.commands");
  ServiceConfig cfg;
  cfg.time_scale = 0.0;
  const auto a = replay_stepped(demo(), log, cfg);
  const auto b = replay_stepped(demo(), log, cfg);
  CHECK(a.telemetry_csv == b.telemetry_csv);
  CHECK(a.frames == b.frames);
  CHECK(a.rejected.empty());
  for (const auto& f : a.frames) {
    if (f.t < 1.0) CHECK(f.actuator.sigma_target == 0.0);
    if (f.t > 1.0 + 0.033 && f.t < 12.0) CHECK(f.actuator.sigma_target == 1.0);
  }
  CHECK(a.frames.back().record.m_p == 2.3);
}

TEST_CASE("stepped replay: pause in the log consumes the next entry immediately") {
  std::vector<CommandMessage> log{cmd(CommandKind::pause, NoPayload{}, 1, 2.0),
                                  cmd(CommandKind::set_sigma, SetSigma{0.5}, 2, 20.0),
                                  cmd(CommandKind::resume, NoPayload{}, 3, 25.0)};
  ServiceConfig cfg;
  cfg.time_scale = 0.0;
  const auto r = replay_stepped(demo(), log, cfg);
  bool seen = false;
  for (const auto& f : r.frames) {
    if (f.actuator.sigma_target == 0.5) {
      seen = true;
      CHECK(f.t < 3.0);
      break;
    }
  }
  CHECK(seen);
  std::vector<CommandMessage> bad{cmd(CommandKind::set_sigma, SetSigma{3.0}, 1, 1.0)};
  CHECK(replay_stepped(demo(), bad, cfg).rejected.size() == 1);
}

TEST_CASE("bind helpers") {
  const auto c = parse_bind("0.0.0.0:9000");
  CHECK(c.address == "0.0.0.0");
  CHECK(c.port == 9000);
  CHECK(parse_bind(":0").port == 0);
  CHECK(parse_bind("8080").address == "127.0.0.1");
  CHECK_THROWS_AS(parse_bind("host:port"), DomainError);
  CHECK_THROWS_AS(parse_bind("host:70000"), DomainError);
}

TEST_CASE("bind failure reports an I/O error") {
  ServerConfig cfg;
  cfg.port = 0;
  TeleopServer first(cfg, [](const CommandMessage&) { return std::optional<std::string>(); });
  first.start();
  cfg.port = first.port();
  TeleopServer second(cfg, [](const CommandMessage&) { return std::optional<std::string>(); });
  CHECK_THROWS_AS(second.start(), IoError);
  ServerConfig bad;
  bad.address = "not-an-address";
  TeleopServer third(bad, [](const CommandMessage&) { return std::optional<std::string>(); });
  CHECK_THROWS_AS(third.start(), IoError);
}

TEST_CASE("loopback: two clients see identical frames; replies go to the sender") {
  TeleopCore core(demo(), {});
  ServerConfig cfg;
  cfg.port = 0;
  cfg.max_clients = 3;
  TeleopServer server(cfg, [&core](const CommandMessage& c) { return core.submit(c); });
  server.start();
  vsl::testing::WsClient a(server.port()), b(server.port()), viewer(server.port(), "/?readonly=1");
  REQUIRE(wait_for([&] { return server.client_count() == 3; }));
  {
    // Over the limit: the connection is refused.
    CHECK_THROWS(vsl::testing::WsClient(server.port()));
  }

  a.send(encode_command(cmd(CommandKind::set_sigma, SetSigma{0.4}, 1, 0.0, "a")));
  CHECK(json::parse(a.receive())["type"] == "ack");
  a.send("{broken");
  const json err = json::parse(a.receive());
  CHECK(err["type"] == "error");
  CHECK(err["payload"]["field"] == "<message>");
  a.send(encode_command(cmd(CommandKind::set_sigma, SetSigma{4.0}, 2, 0.0, "a")));
  const json range = json::parse(a.receive());
  CHECK(range["type"] == "error");
  CHECK(range["seq"] == 2);
  CHECK(range["payload"]["message"] == "sigma out of [0,1]: 4");
  viewer.send(encode_command(cmd(CommandKind::pause, NoPayload{}, 1, 0.0, "v")));
  const json ro = json::parse(viewer.receive());
  CHECK(ro["type"] == "error");
  CHECK(std::string(ro["payload"]["message"]).find("read-only") != std::string::npos);

  std::vector<std::string> sent;
  for (int i = 0; i < 5; ++i) {
    sent.push_back(encode_frame(*core.tick()));
    server.broadcast(sent.back());
  }
  for (const auto& expect : sent) {
    CHECK(a.receive() == expect);
    CHECK(b.receive() == expect);
    CHECK(viewer.receive() == expect);
  }
  CHECK(decode_frame(sent.front()).actuator.sigma_target == 0.4);
  server.stop();
}

TEST_CASE("slow clients drop the oldest frames") {
  ServerConfig cfg;
  cfg.port = 0;
  cfg.queue_capacity = 4;
  TeleopServer server(cfg, [](const CommandMessage&) { return std::optional<std::string>(); });
  server.start();
  vsl::testing::WsClient slow(server.port());
  REQUIRE(wait_for([&] { return server.client_count() == 1; }));
  const std::string big(200000, 'x');
  for (int i = 0; i < 200; ++i) server.broadcast(big + std::to_string(i));
  REQUIRE(wait_for([&] { return server.dropped_messages() > 0; }));
  std::string last;
  for (int i = 0; i < 200; ++i) {
    last = slow.receive();
    if (last == big + "199") break;
  }
  CHECK(last == big + "199");
  server.stop();
}

TEST_CASE("real-time loop streams at the configured rate") {
  ServiceConfig scfg;
  scfg.rate_hz = 50.0;
  scfg.time_scale = 2.0;
  TeleopCore core(demo(), scfg);
  ServerConfig cfg;
  cfg.port = 0;
  TeleopServer server(cfg, [&core](const CommandMessage& c) { return core.submit(c); });
  server.start();
  vsl::testing::WsClient client(server.port());
  REQUIRE(wait_for([&] { return server.client_count() == 1; }));
  std::atomic<bool> stop{false};
  const auto start = std::chrono::steady_clock::now();
  std::thread loop([&] { run_realtime(core, server, stop); });
  const auto first = decode_frame(client.receive());
  StateFrame f = first;
  for (int i = 0; i < 20; ++i) f = decode_frame(client.receive());
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  stop = true;
  loop.join();
  server.stop();
  CHECK(f.seq > first.seq);
  // 20 frames of 20 ms sim at twice real time: about 0.2 s of wall time.
  CHECK(wall > 0.15);
  CHECK(wall < 2.0);
  CHECK(f.t - first.t == doctest::Approx(0.02 * static_cast<double>(f.seq - first.seq)).epsilon(1e-9));
}
