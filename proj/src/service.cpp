#include "sublink/service.hpp"

#include <httplib.h>

#include "sublink/error.hpp"

namespace sublink {

AnnotationService::AnnotationService(std::shared_ptr<const Linker> linker, ServiceConfig config)
    : linker_(std::move(linker)), config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
  const std::size_t threads = config_.threads == 0 ? 1 : config_.threads;
  server_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  server_->Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok\n", "text/plain");
  });
  server_->Post("/annotate", [this](const httplib::Request& req, httplib::Response& res) {
    const auto out = annotate(req.body);
    res.status = out.status;
    res.set_content(out.body, out.content_type + "; charset=utf-8");
  });
}

AnnotationService::~AnnotationService() { stop(); }

ServiceResponse AnnotationService::annotate(const std::string& body) const {
  nif::Document request;
  try {
    request = nif::parse_nif(body);
  } catch (const Error& e) {
    return {400, std::string("bad request: ") + e.what() + "\n", "text/plain"};
  }
  try {
    AnnotatedDocument doc;
    doc.id = request.context_uri;
    doc.text = request.is_string;
    const auto prepared = linker_->prepare(std::move(doc));
    std::vector<SpanAnnotation> spans;
    for (auto& s : linker_->link(prepared)) {
      if (s.span.is_entity()) spans.push_back(std::move(s.span));
    }
    return {200, nif::emit_nif(request, spans, config_.kb_prefix), "application/x-turtle"};
  } catch (const std::exception& e) {
    return {500, std::string("annotation failed: ") + e.what() + "\n", "text/plain"};
  }
}

bool AnnotationService::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
    return port_ > 0;
  }
  if (!server_->bind_to_port(host, port)) return false;
  port_ = port;
  return true;
}

bool AnnotationService::serve_bound() { return server_->listen_after_bind(); }

bool AnnotationService::listen(const std::string& host, int port) {
  return bind(host, port) && serve_bound();
}

void AnnotationService::stop() {
  if (server_) server_->stop();
}

bool AnnotationService::is_running() const { return server_->is_running(); }

}  // namespace sublink
