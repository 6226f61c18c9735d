#include "stub_server.hpp"

#include <cmath>
#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

#include "vf/text.hpp"

namespace vf::stub {

using nlohmann::json;

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<double> hashed_vector(const std::string& text, int dims) {
  std::vector<double> v(static_cast<std::size_t>(dims), 0.0);
  for (const auto& tok : tokenize(text)) {
    const auto h = fnv1a(tok);
    const double sign = (h >> 63) != 0 ? -1.0 : 1.0;
    v[h % static_cast<std::uint64_t>(dims)] += sign;
  }
  return v;
}

void reply_error(httplib::Response& res, int status, const std::string& reason) {
  res.status = status;
  res.set_content(json{{"error", reason}}.dump(), "application/json");
}

}  // namespace

StubServer::StubServer(StubOptions options)
    : options_(options), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

StubServer::~StubServer() { stop(); }

void StubServer::install_routes() {
  server_->Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(json{{"embedding_model", "stub-hash-" + std::to_string(options_.embed_dims)},
                         {"generation_model", "stub-echo"}}
                        .dump(),
                    "application/json");
  });

  server_->Post("/embed", [this](const httplib::Request& req, httplib::Response& res) {
    ++embed_requests_;
    if (options_.fail_all) return reply_error(res, 503, "unavailable");
    json body;
    try {
      body = json::parse(req.body);
    } catch (const std::exception&) {
      return reply_error(res, 400, "body is not JSON");
    }
    if (!body.is_object() || !body.contains("texts") || !body["texts"].is_array()) {
      return reply_error(res, 400, "missing 'texts' array");
    }
    json vectors = json::array();
    for (const auto& t : body["texts"]) {
      if (!t.is_string()) return reply_error(res, 400, "texts must be strings");
      vectors.push_back(hashed_vector(t.get<std::string>(), options_.embed_dims));
    }
    res.set_content(json{{"dims", options_.embed_dims}, {"vectors", vectors}}.dump(),
                    "application/json");
  });

  server_->Post("/generate", [this](const httplib::Request& req, httplib::Response& res) {
    ++generate_requests_;
    if (options_.fail_all) return reply_error(res, 503, "unavailable");
    json body;
    try {
      body = json::parse(req.body);
    } catch (const std::exception&) {
      return reply_error(res, 400, "body is not JSON");
    }
    if (!body.is_object() || !body.contains("context") || !body["context"].is_string() ||
        !body.contains("decoding") || !body["decoding"].is_object()) {
      return reply_error(res, 400, "missing 'context' or 'decoding'");
    }
    const std::string strategy = body["decoding"].value("strategy", "");
    if (strategy != "beam" && strategy != "topk" && strategy != "nucleus" &&
        strategy != "typical") {
      return reply_error(res, 422, "unsupported strategy '" + strategy + "'");
    }
    if (options_.max_jitter.count() > 0) {
      const auto ms = fnv1a(req.body) % static_cast<std::uint64_t>(options_.max_jitter.count());
      std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    }
    std::string text;
    switch (options_.generate) {
      case GenerateMode::echo_context:
        text = body["context"].get<std::string>();
        break;
      case GenerateMode::echo_claim:
        text = body.contains("claim") && body["claim"].is_string()
                   ? body["claim"].get<std::string>()
                   : std::string();
        break;
      case GenerateMode::empty:
        break;
    }
    res.set_content(json{{"text", text}}.dump(), "application/json");
  });
}

void StubServer::start(int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port("127.0.0.1");
  } else if (server_->bind_to_port("127.0.0.1", port)) {
    port_ = port;
  } else {
    port_ = -1;
  }
  if (port_ <= 0) throw std::runtime_error("stub server cannot bind");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void StubServer::listen(const std::string& host, int port) {
  port_ = port;
  if (!server_->listen(host, port)) throw std::runtime_error("stub server cannot listen");
}

void StubServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string StubServer::url() const { return "http://127.0.0.1:" + std::to_string(port_); }

}  // namespace vf::stub
