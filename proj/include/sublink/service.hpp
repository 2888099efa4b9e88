#pragma once

#include <memory>
#include <string>

#include "sublink/nif.hpp"
#include "sublink/pipeline.hpp"

namespace httplib {
class Server;
}

namespace sublink {

struct ServiceConfig {
  std::string kb_prefix = nif::kDefaultKbPrefix;
  std::size_t threads = 8;
};

struct ServiceResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/x-turtle";
};

// A2KB annotator endpoint: POST /annotate takes a NIF document and returns
// it with one phrase per linked span; GET /health answers 200.
class AnnotationService {
 public:
  AnnotationService(std::shared_ptr<const Linker> linker, ServiceConfig config = {});
  ~AnnotationService();

  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  // Request handling without the network: 400 for bodies that are not a
  // usable NIF document, 500 when the pipeline fails.
  ServiceResponse annotate(const std::string& body) const;

  // Binds and serves until stop(); returns false if binding failed. Port 0
  // picks a free port, readable through port() once listening.
  bool listen(const std::string& host, int port);
  // Binds without serving; follow with serve_bound().
  bool bind(const std::string& host, int port);
  bool serve_bound();
  void stop();
  int port() const { return port_; }
  bool is_running() const;

 private:
  std::shared_ptr<const Linker> linker_;
  ServiceConfig config_;
  std::unique_ptr<httplib::Server> server_;
  int port_ = 0;
};

}  // namespace sublink
