#pragma once

#include <chrono>
#include <optional>
#include <string>

namespace vf {

/// Parsed `http://host[:port][/base]` address.
struct Endpoint {
  std::string host;
  int port = 80;
  std::string base_path;  // without trailing slash
  std::string url;        // as given

  /// Throws UsageError for anything but a plain http URL.
  static Endpoint parse(const std::string& url);
};

struct RetryPolicy {
  int retries = 2;
  std::chrono::milliseconds backoff{100};  // doubled after every attempt
  std::chrono::milliseconds timeout{30000};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// POSTs a JSON body. Transport failures and 5xx answers are retried up to
/// `policy.retries` times; the last failure surfaces as BackendError. Any
/// other status is returned to the caller.
HttpResponse post_json(const Endpoint& endpoint, const std::string& path,
                       const std::string& body, const RetryPolicy& policy = {});

/// Single GET without retries; nullopt on transport failure.
std::optional<HttpResponse> http_get(const Endpoint& endpoint, const std::string& path,
                                     std::chrono::milliseconds timeout = std::chrono::seconds(5));

}  // namespace vf
