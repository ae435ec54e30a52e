#include "hullspace/server.hpp"

#include <sys/socket.h>

#include <algorithm>
#include <condition_variable>
#include <fstream>
#include <iostream>
#include <mutex>
#include <vector>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace hullspace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

std::string mime_type(const std::filesystem::path& p) {
  const std::string ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".png") return "image/png";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".wasm") return "application/wasm";
  return "application/octet-stream";
}

http::response<http::string_body> static_response(const http::request<http::string_body>& req,
                                                  const std::filesystem::path& root) {
  auto reply = [&](http::status st, std::string body, std::string type) {
    http::response<http::string_body> res{st, req.version()};
    res.set(http::field::server, "hullspace");
    res.set(http::field::content_type, type);
    res.keep_alive(false);
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
  };
  if (req.method() != http::verb::get && req.method() != http::verb::head)
    return reply(http::status::method_not_allowed, "method not allowed\n", "text/plain");

  std::string target(req.target());
  target = target.substr(0, target.find('?'));
  if (target.empty() || target[0] != '/' || target.find("..") != std::string::npos)
    return reply(http::status::bad_request, "bad path\n", "text/plain");
  if (root.empty()) return reply(http::status::not_found, "no static directory configured\n", "text/plain");
  std::filesystem::path file = root / target.substr(1);
  if (target.back() == '/') file /= "index.html";

  std::ifstream in(file, std::ios::binary);
  if (!in) return reply(http::status::not_found, "not found\n", "text/plain");
  std::string body((std::istreambuf_iterator<char>(in)), {});
  if (req.method() == http::verb::head) body.clear();
  return reply(http::status::ok, std::move(body), mime_type(file));
}

}  // namespace

struct Server::Impl {
  ServerOptions opts;
  Scene initial;
  net::io_context io;
  tcp::acceptor acceptor{io};
  std::thread accept_thread;

  std::mutex mu;
  std::vector<std::thread> sessions;
  std::vector<int> live_fds;
  bool stopping = false;
  std::condition_variable stopped_cv;

  Impl(ServerOptions o, Scene s) : opts(std::move(o)), initial(std::move(s)) {}

  void track(int fd, bool add) {
    std::lock_guard lock(mu);
    if (add) {
      live_fds.push_back(fd);
      if (stopping) ::shutdown(fd, SHUT_RDWR);
    } else
      std::erase(live_fds, fd);
  }

  void serve(tcp::socket sock) {
    const int fd = sock.native_handle();
    track(fd, true);
    try {
      beast::flat_buffer buffer;
      http::request<http::string_body> req;
      http::read(sock, buffer, req);
      if (websocket::is_upgrade(req)) {
        websocket::stream<tcp::socket> ws(std::move(sock));
        ws.accept(req);
        Session session(initial, opts.control);
        while (true) {
          beast::flat_buffer in;
          ws.read(in);
          for (const std::string& line : session.handle_text(beast::buffers_to_string(in.data()))) {
            ws.text(true);
            ws.write(net::buffer(line + "\n"));
          }
        }
      } else {
        http::write(sock, static_response(req, opts.static_dir));
        beast::error_code ec;
        sock.shutdown(tcp::socket::shutdown_send, ec);
      }
    } catch (const beast::system_error& e) {
      if (e.code() != websocket::error::closed && e.code() != net::error::eof && e.code() != http::error::end_of_stream)
        std::cerr << "session ended: " << e.code().message() << "\n";
    } catch (const std::exception& e) {
      std::cerr << "session ended: " << e.what() << "\n";
    }
    track(fd, false);
  }

  void accept_loop() {
    while (true) {
      tcp::socket sock(io);
      beast::error_code ec;
      acceptor.accept(sock, ec);
      std::lock_guard lock(mu);
      if (stopping) return;
      if (ec) continue;
      sessions.emplace_back([this, s = std::move(sock)]() mutable { serve(std::move(s)); });
    }
  }
};

Server::Server(ServerOptions opts, Scene initial) : impl_(std::make_unique<Impl>(std::move(opts), std::move(initial))) {}

Server::~Server() { stop(); }

std::uint16_t Server::start() {
  Impl& s = *impl_;
  const tcp::endpoint ep(net::ip::make_address(s.opts.address), s.opts.port);
  s.acceptor.open(ep.protocol());
  s.acceptor.set_option(net::socket_base::reuse_address(true));
  s.acceptor.bind(ep);
  s.acceptor.listen();
  const std::uint16_t port = s.acceptor.local_endpoint().port();
  s.accept_thread = std::thread([&s] { s.accept_loop(); });
  return port;
}

void Server::wait() {
  std::unique_lock lock(impl_->mu);
  impl_->stopped_cv.wait(lock, [&] { return impl_->stopping; });
}

void Server::stop() {
  Impl& s = *impl_;
  std::vector<std::thread> threads;
  {
    std::lock_guard lock(s.mu);
    if (s.stopping && !s.accept_thread.joinable()) return;
    s.stopping = true;
    if (s.acceptor.is_open()) ::shutdown(s.acceptor.native_handle(), SHUT_RDWR);
    for (int fd : s.live_fds) ::shutdown(fd, SHUT_RDWR);
  }
  s.stopped_cv.notify_all();
  if (s.accept_thread.joinable()) s.accept_thread.join();
  {
    std::lock_guard lock(s.mu);
    threads = std::move(s.sessions);
  }
  for (std::thread& t : threads) t.join();
  beast::error_code ec;
  s.acceptor.close(ec);
}

}  // namespace hullspace
