#include "vf/http.hpp"

#include <thread>

#include <httplib.h>

#include "vf/error.hpp"

namespace vf {
namespace {

httplib::Client make_client(const Endpoint& endpoint, std::chrono::milliseconds timeout) {
  httplib::Client client(endpoint.host, endpoint.port);
  const auto secs = timeout.count() / 1000;
  const auto usecs = (timeout.count() % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  client.set_keep_alive(false);
  return client;
}

}  // namespace

Endpoint Endpoint::parse(const std::string& url) {
  constexpr std::string_view kScheme = "http://";
  if (url.rfind(kScheme, 0) != 0) {
    throw UsageError("endpoint '" + url + "' must start with http://");
  }
  Endpoint ep;
  ep.url = url;
  std::string rest = url.substr(kScheme.size());
  const auto slash = rest.find('/');
  std::string authority = rest.substr(0, slash);
  if (slash != std::string::npos) {
    ep.base_path = rest.substr(slash);
    while (!ep.base_path.empty() && ep.base_path.back() == '/') ep.base_path.pop_back();
  }
  const auto colon = authority.rfind(':');
  if (colon != std::string::npos) {
    try {
      std::size_t used = 0;
      ep.port = std::stoi(authority.substr(colon + 1), &used);
      if (used != authority.size() - colon - 1) throw std::invalid_argument("port");
    } catch (const std::exception&) {
      throw UsageError("endpoint '" + url + "' has an invalid port");
    }
    authority.resize(colon);
  }
  if (authority.empty()) throw UsageError("endpoint '" + url + "' has no host");
  ep.host = authority;
  return ep;
}

HttpResponse post_json(const Endpoint& endpoint, const std::string& path,
                       const std::string& body, const RetryPolicy& policy) {
  const std::string full_path = endpoint.base_path + path;
  std::string last_error;
  auto delay = policy.backoff;
  for (int attempt = 0; attempt <= policy.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    auto client = make_client(endpoint, policy.timeout);
    auto res = client.Post(full_path, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    return {res->status, res->body};
  }
  throw BackendError(endpoint.url + full_path + ": " + last_error + " after " +
                     std::to_string(policy.retries + 1) + " attempts");
}

std::optional<HttpResponse> http_get(const Endpoint& endpoint, const std::string& path,
                                     std::chrono::milliseconds timeout) {
  auto client = make_client(endpoint, timeout);
  auto res = client.Get(endpoint.base_path + path);
  if (!res) return std::nullopt;
  return HttpResponse{res->status, res->body};
}

}  // namespace vf
