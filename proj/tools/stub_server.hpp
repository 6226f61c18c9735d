#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace vf::stub {

/// What `/generate` answers with.
enum class GenerateMode { echo_context, echo_claim, empty };

struct StubOptions {
  int embed_dims = 64;
  GenerateMode generate = GenerateMode::echo_context;
  /// Upper bound of a per-request delay derived from the request body, so
  /// concurrent responses complete out of order.
  std::chrono::milliseconds max_jitter{0};
  /// Answer every request with 503.
  bool fail_all = false;
};

/// Deterministic reference server for the `/embed`, `/generate` and
/// `/health` wire protocols. Embeddings are feature-hashed token counts;
/// generation echoes its input.
class StubServer {
 public:
  explicit StubServer(StubOptions options = {});
  ~StubServer();
  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  /// Binds to 127.0.0.1 on `port` (0 picks a free one) and serves on a
  /// background thread.
  void start(int port = 0);
  /// Blocks serving on the calling thread.
  void listen(const std::string& host, int port);
  void stop();

  int port() const { return port_; }
  std::string url() const;

  int embed_requests() const { return embed_requests_.load(); }
  int generate_requests() const { return generate_requests_.load(); }

 private:
  void install_routes();

  StubOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> embed_requests_{0};
  std::atomic<int> generate_requests_{0};
};

}  // namespace vf::stub
