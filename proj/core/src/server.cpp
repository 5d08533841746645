#include <httplib.h>

#include "fuzzyc/service.hpp"

namespace fuzzyc {

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;
  int port = -1;

  explicit Impl(Service& s) : service(s) {}

  void forward(const httplib::Request& req, httplib::Response& res) {
    const auto out = service.handle({req.method, req.path, req.body});
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  }
};

HttpServer::HttpServer(Service& service, std::filesystem::path static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto& svr = impl_->server;
  // httplib's default also sets SO_REUSEPORT, which lets a second server share a busy port.
  svr.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
  });
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    impl_->forward(req, res);
  };
  svr.Get("/api/.*", forward);
  svr.Put("/api/.*", forward);
  svr.Post("/api/.*", forward);
  svr.Delete("/api/.*", forward);
  if (!static_dir.empty()) {
    svr.set_mount_point("/", static_dir.string());
  } else {
    svr.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("fuzzyc workbench API: see /api/definitions and /api/chips\n",
                      "text/plain");
    });
  }
}

HttpServer::~HttpServer() = default;

bool HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
    return impl_->port > 0;
  }
  if (!impl_->server.bind_to_port(host, port)) return false;
  impl_->port = port;
  return true;
}

int HttpServer::port() const noexcept { return impl_->port; }

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace fuzzyc
