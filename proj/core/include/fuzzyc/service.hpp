#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "fuzzyc/dictionary.hpp"
#include "fuzzyc/engine.hpp"
#include "fuzzyc/network.hpp"
#include "fuzzyc/rulelang.hpp"

namespace fuzzyc {

struct HttpRequest {
  std::string method;
  std::string path;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Single-session workbench: one dictionary file, the chips created against
/// it, and their interconnections. Every definition write re-resolves all
/// chips before it returns. Requests may come from several threads; writes
/// are serialized and reads see a consistent snapshot.
class Service {
 public:
  struct Options {
    std::filesystem::path dictionary_path;
    /// Every `*.fzr` file here is loaded as a MINMAX chip named after its stem.
    std::filesystem::path rule_dir;
  };

  explicit Service(Options options);

  /// Routes one request. Never throws; failures become 4xx/5xx responses.
  HttpResponse handle(const HttpRequest& request);

  /// Problems found while loading the rule directory.
  const std::vector<Diagnostic>& startup_diagnostics() const noexcept { return startup_; }

 private:
  struct ChipSource {
    RuleSet normalized;
    std::size_t written_rules = 0;
  };

  HttpResponse list_definitions() const;
  HttpResponse get_definition(const std::string& name) const;
  HttpResponse put_definition(const std::string& name, const std::string& body);
  HttpResponse create_chip(const std::string& body);
  HttpResponse list_chips() const;
  HttpResponse infer(const std::string& name, const std::string& body) const;
  HttpResponse compile(const std::string& name, const std::string& body) const;
  HttpResponse add_connection(const std::string& body);
  HttpResponse propagate(const std::string& body) const;

  ChipObject build_chip(const std::string& name, ChipType type, const std::string& rule_text,
                        ChipSource& source, std::vector<Diagnostic>& diagnostics) const;

  Options options_;
  mutable std::shared_mutex mutex_;
  FuzzyDictionary dictionary_;
  std::map<std::string, ChipSource> sources_;
  ChipNetwork network_;
  std::vector<Diagnostic> startup_;
};

/// HTTP/1.1 front end for a Service. Static UI files, when a directory is
/// given, are served at `/`.
class HttpServer {
 public:
  HttpServer(Service& service, std::filesystem::path static_dir = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket; port 0 picks a free port. False if the bind fails.
  bool bind(const std::string& host, int port);
  int port() const noexcept;
  /// Serves until stop() is called from another thread.
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fuzzyc
