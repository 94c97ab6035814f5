#include "guardsim/service.hpp"

#include "guardsim/error.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <deque>

namespace guardsim {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

json error_message(std::string_view message) { return {{"kind", "error"}, {"message", message}}; }

namespace {

SimConfig steered(SimConfig config) {
  config.policy = Policy::steer;
  return config;
}

}  // namespace

Session::Session(const DeploymentPlan& plan, SimConfig config) : plan_(&plan), sim_(plan, steered(std::move(config))) {
  restart();
}

void Session::restart() {
  sim_.reset();
  log_.clear();
  digest_ = fnv_offset;
  breaches_ = 0;
  absorb(sim_.state());
}

void Session::absorb(const SimState& s) {
  digest_ = fnv1a64(canonical_dump(to_json(s)) + "\n", digest_);
  if (!s.visible) ++breaches_;
}

json Session::hello() const {
  return {{"kind", "hello"},
          {"polygon", points_to_json(plan_->polygon.vertices())},
          {"plan", to_json(*plan_)},
          {"config", to_json(sim_.config())},
          {"state", to_json(sim_.state())}};
}

json Session::tick() {
  const SimState& s = sim_.step();
  absorb(s);
  return {{"kind", "state"}, {"state", to_json(s)}, {"breaches", breaches_}};
}

std::optional<json> Session::handle(std::string_view text) {
  json msg;
  try {
    msg = json::parse(text);
  } catch (const json::parse_error&) {
    return error_message("malformed message: not JSON");
  }
  if (!msg.is_object() || !msg.contains("kind") || !msg["kind"].is_string())
    return error_message("malformed message: missing kind");
  const std::string kind = msg["kind"].get<std::string>();
  if (kind == "steer") {
    const json& h = msg.contains("heading") ? msg["heading"] : json();
    const json& m = msg.contains("magnitude") ? msg["magnitude"] : json();
    if (!h.is_array() || h.size() != 2 || !h[0].is_number() || !h[1].is_number() || !m.is_number())
      return error_message("malformed steer: needs heading [x, y] and magnitude");
    const Point heading(h[0].get<double>(), h[1].get<double>());
    const double magnitude = m.get<double>();
    sim_.set_steer(heading, magnitude);
    log_.push_back({sim_.state().step, heading, magnitude});
    return std::nullopt;
  }
  if (kind == "reset") {
    restart();
    return std::nullopt;
  }
  if (kind == "hello") return std::nullopt;
  return error_message("unknown message kind '" + kind + "'");
}

namespace {

// Lives on its session thread; every handler runs on that thread's context.
class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, const DeploymentPlan& plan, const SimConfig& config,
             std::chrono::nanoseconds period, const std::atomic<bool>& stopping)
      : ws_(std::move(socket)), timer_(ws_.get_executor()), session_(plan, config), period_(period),
        stopping_(stopping) {}

  void start() {
    ws_.text(true);
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->send(self->session_.hello());
      self->read();
      self->schedule();
    });
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->shutdown();
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      if (auto reply = self->session_.handle(text)) self->send(*reply);
      self->read();
    });
  }

  void schedule() {
    timer_.expires_after(period_);
    timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->closed_) return;
      if (self->stopping_) {
        self->closed_ = true;
        self->ws_.async_close(websocket::close_code::going_away, [self](beast::error_code) {});
        return;
      }
      self->send(self->session_.tick());
      self->schedule();
    });
  }

  void send(const json& message) {
    if (closed_) return;
    outbox_.push_back(canonical_dump(message));
    if (outbox_.size() == 1) write();
  }

  void write() {
    ws_.async_write(asio::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->shutdown();
      self->outbox_.pop_front();
      if (!self->outbox_.empty()) self->write();
    });
  }

  void shutdown() {
    closed_ = true;
    timer_.cancel();
  }

  websocket::stream<tcp::socket> ws_;
  asio::steady_timer timer_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
  Session session_;
  std::chrono::nanoseconds period_;
  const std::atomic<bool>& stopping_;
  bool closed_ = false;
};

}  // namespace

struct Service::Impl {
  DeploymentPlan plan;
  SimConfig config;
  ServiceOptions options;
  asio::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::atomic<bool> stopping{false};
  std::mutex threads_mutex;
  std::vector<std::thread> threads;

  void accept() {
    auto context = std::make_shared<asio::io_context>();
    acceptor.async_accept(*context, [this, context](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      const auto period = std::chrono::duration_cast<std::chrono::nanoseconds>(
          std::chrono::duration<double>(1.0 / options.tick_hz));
      {
        std::lock_guard lock(threads_mutex);
        threads.emplace_back([this, context, socket = std::move(socket), period]() mutable {
          std::make_shared<Connection>(std::move(socket), plan, config, period, stopping)->start();
          context->run();
        });
      }
      accept();
    });
  }
};

Service::Service(DeploymentPlan plan, SimConfig config, ServiceOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->plan = std::move(plan);
  impl_->options = options;
  if (!(options.tick_hz > 0.0)) throw Error(ErrorKind::config_invalid, "bad-tick", "tick rate must be positive");
  // Validates the configuration once, before anyone connects.
  impl_->config = Simulator(impl_->plan, steered(std::move(config))).config();
  beast::error_code ec;
  const auto address = asio::ip::make_address(options.address, ec);
  if (ec) throw Error(ErrorKind::config_invalid, "bad-address", "cannot parse address " + options.address);
  const tcp::endpoint endpoint(address, options.port);
  impl_->acceptor.open(endpoint.protocol(), ec);
  if (!ec) impl_->acceptor.set_option(asio::socket_base::reuse_address(true), ec);
  if (!ec) impl_->acceptor.bind(endpoint, ec);
  if (!ec) impl_->acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec) {
    const bool in_use = ec == asio::error::address_in_use;
    throw Error(ErrorKind::io, in_use ? "port-in-use" : "listen-failed",
                "cannot listen on port " + std::to_string(options.port) + ": " + ec.message());
  }
}

Service::~Service() {
  stop();
  std::lock_guard lock(impl_->threads_mutex);
  for (std::thread& t : impl_->threads)
    if (t.joinable()) t.join();
}

unsigned short Service::port() const { return impl_->acceptor.local_endpoint().port(); }

void Service::run() {
  impl_->accept();
  impl_->ioc.run();
}

void Service::stop() {
  impl_->stopping = true;
  asio::post(impl_->ioc, [impl = impl_.get()] {
    beast::error_code ec;
    impl->acceptor.close(ec);
  });
  impl_->ioc.stop();
}

}  // namespace guardsim
