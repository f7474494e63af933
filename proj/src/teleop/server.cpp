#include "vsl/teleop/server.hpp"

#include <chrono>
#include <deque>
#include <set>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "vsl/errors.hpp"

namespace vsl::teleop {
namespace {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

constexpr std::uint64_t kMaxBatch = 10;

}  // namespace

struct TeleopServer::Impl {
  class Session;

  ServerConfig cfg;
  CommandHandler handler;
  net::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  std::thread io_thread;
  std::set<std::shared_ptr<Session>> sessions;  // io thread only
  std::atomic<std::size_t> clients{0};
  std::atomic<std::uint64_t> dropped{0};
  std::atomic<bool> running{false};

  void accept();
};

class TeleopServer::Impl::Session : public std::enable_shared_from_this<Session> {
 public:
  Session(tcp::socket socket, Impl& server) : ws_(std::move(socket)), server_(server) {}

  void run() {
    http::async_read(ws_.next_layer(), buffer_, request_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_request(ec); });
  }

  void send(std::shared_ptr<const std::string> msg) {
    if (!open_) return;
    if (queue_.size() >= server_.cfg.queue_capacity) {
      // Drop the oldest message that is not being written.
      const auto victim = writing_ ? std::next(queue_.begin()) : queue_.begin();
      if (victim != queue_.end()) {
        queue_.erase(victim);
        server_.dropped.fetch_add(1, std::memory_order_relaxed);
      }
    }
    queue_.push_back(std::move(msg));
    if (!writing_) write_next();
  }

  void close() {
    beast::error_code ignored;
    ws_.next_layer().socket().shutdown(tcp::socket::shutdown_both, ignored);
    ws_.next_layer().socket().close(ignored);
  }

 private:
  void on_request(beast::error_code ec) {
    if (ec || !websocket::is_upgrade(request_)) return fail();
    const std::string target(request_.target());
    read_only_ = target.find("readonly=1") != std::string::npos ||
                 target.find("readonly=true") != std::string::npos;
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(request_, [self = shared_from_this()](beast::error_code ec2) { self->on_accept(ec2); });
  }

  void on_accept(beast::error_code ec) {
    if (ec) return fail();
    open_ = true;
    server_.clients.fetch_add(1);
    counted_ = true;
    ws_.text(true);
    read_next();
  }

  void read_next() {
    ws_.async_read(in_, [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
  }

  void on_read(beast::error_code ec) {
    if (ec) return fail();
    const std::string text = beast::buffers_to_string(in_.data());
    in_.consume(in_.size());
    reply(handle(text));
    read_next();
  }

  std::string handle(const std::string& text) {
    CommandMessage cmd;
    try {
      cmd = decode_command(text);
    } catch (const DecodeError& e) {
      return encode_error(0, e.field(), e.what());
    }
    if (read_only_) return encode_error(cmd.seq, "type", "connection is read-only");
    if (const auto err = server_.handler(cmd)) return encode_error(cmd.seq, "payload", *err);
    return encode_ack(cmd.seq, cmd.client_id);
  }

  void reply(std::string msg) { send(std::make_shared<const std::string>(std::move(msg))); }

  void write_next() {
    writing_ = true;
    ws_.async_write(net::buffer(*queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_write(ec); });
  }

  void on_write(beast::error_code ec) {
    if (ec) return fail();
    queue_.pop_front();
    if (!queue_.empty()) write_next();
    else writing_ = false;
  }

  void fail() {
    if (done_) return;
    done_ = true;
    open_ = false;
    if (counted_) server_.clients.fetch_sub(1);
    close();
    server_.sessions.erase(shared_from_this());
  }

  websocket::stream<beast::tcp_stream> ws_;
  Impl& server_;
  beast::flat_buffer buffer_;
  beast::flat_buffer in_;
  http::request<http::string_body> request_;
  std::deque<std::shared_ptr<const std::string>> queue_;
  bool writing_ = false;
  bool open_ = false;
  bool read_only_ = false;
  bool counted_ = false;
  bool done_ = false;
};

void TeleopServer::Impl::accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;  // acceptor closed
    if (sessions.size() >= cfg.max_clients) {
      beast::error_code ignored;
      socket.close(ignored);
    } else {
      auto s = std::make_shared<Session>(std::move(socket), *this);
      sessions.insert(s);
      s->run();
    }
    accept();
  });
}

TeleopServer::TeleopServer(ServerConfig cfg, CommandHandler handler) : impl_(std::make_unique<Impl>()) {
  impl_->cfg = std::move(cfg);
  impl_->handler = std::move(handler);
}

TeleopServer::~TeleopServer() { stop(); }

void TeleopServer::start() {
  Impl& s = *impl_;
  beast::error_code ec;
  const auto address = net::ip::make_address(s.cfg.address, ec);
  if (ec) throw IoError("invalid bind address '" + s.cfg.address + "'");
  const tcp::endpoint endpoint(address, s.cfg.port);
  s.acceptor.open(endpoint.protocol(), ec);
  if (!ec) s.acceptor.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) s.acceptor.bind(endpoint, ec);
  if (!ec) s.acceptor.listen(net::socket_base::max_listen_connections, ec);
  if (ec) {
    throw IoError("cannot bind " + s.cfg.address + ":" + std::to_string(s.cfg.port) + ": " + ec.message());
  }
  s.running = true;
  s.accept();
  s.io_thread = std::thread([&s] { s.ioc.run(); });
}

void TeleopServer::stop() {
  Impl& s = *impl_;
  if (!s.running.exchange(false)) return;
  net::post(s.ioc, [&s] {
    beast::error_code ignored;
    s.acceptor.close(ignored);
    auto sessions = s.sessions;
    for (const auto& session : sessions) session->close();
  });
  // Give pending closes a moment to run, then stop the loop.
  net::post(s.ioc, [&s] { s.ioc.stop(); });
  if (s.io_thread.joinable()) s.io_thread.join();
  s.sessions.clear();
}

unsigned short TeleopServer::port() const {
  beast::error_code ec;
  const auto ep = impl_->acceptor.local_endpoint(ec);
  return ec ? 0 : ep.port();
}

void TeleopServer::broadcast(std::string message) {
  if (!impl_->running) return;
  auto msg = std::make_shared<const std::string>(std::move(message));
  net::post(impl_->ioc, [this, msg] {
    auto sessions = impl_->sessions;
    for (const auto& s : sessions) s->send(msg);
  });
}

std::size_t TeleopServer::client_count() const { return impl_->clients.load(); }

std::uint64_t TeleopServer::dropped_messages() const { return impl_->dropped.load(); }

ServerConfig parse_bind(const std::string& bind) {
  ServerConfig cfg;
  const std::size_t colon = bind.rfind(':');
  std::string host = colon == std::string::npos ? std::string() : bind.substr(0, colon);
  const std::string port = colon == std::string::npos ? bind : bind.substr(colon + 1);
  if (!host.empty()) cfg.address = host;
  try {
    std::size_t used = 0;
    const unsigned long p = std::stoul(port, &used);
    if (used != port.size() || p > 65535) throw std::out_of_range("port");
    cfg.port = static_cast<unsigned short>(p);
  } catch (const std::exception&) {
    throw DomainError("invalid bind address '" + bind + "' (expected host:port)");
  }
  return cfg;
}

void run_realtime(TeleopCore& core, TeleopServer& server, const std::atomic<bool>& stop,
                  const std::function<void()>& before_tick) {
  using clock = std::chrono::steady_clock;
  const double scale = core.config().time_scale;
  const auto period = std::chrono::duration_cast<clock::duration>(
      std::chrono::duration<double>(core.frame_period() / scale));
  const auto start = clock::now();
  std::uint64_t done = 0;
  while (!stop.load()) {
    const auto due = static_cast<std::uint64_t>((clock::now() - start) / period);
    if (due <= done) {
      std::this_thread::sleep_until(start + period * static_cast<std::int64_t>(done + 1));
      continue;
    }
    if (due - done > kMaxBatch) done = due - kMaxBatch;  // too far behind: shed backlog
    const std::uint64_t batch = due - done;
    if (before_tick) before_tick();
    if (auto frame = core.tick(batch)) server.broadcast(encode_frame(*frame));
    done += batch;
  }
}

}  // namespace vsl::teleop
