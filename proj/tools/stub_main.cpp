#include <iostream>

#include <CLI11.hpp>

#include "stub_server.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Deterministic stub for the /embed and /generate protocols"};
  std::string host = "127.0.0.1";
  int port = 8090;
  int dims = 64;
  std::string mode = "echo_context";
  app.add_option("--host", host, "Listen address");
  app.add_option("--port", port, "Listen port");
  app.add_option("--dims", dims, "Embedding dimensions")->check(CLI::PositiveNumber);
  app.add_option("--generate", mode, "echo_context | echo_claim | empty")
      ->check(CLI::IsMember({"echo_context", "echo_claim", "empty"}));
  CLI11_PARSE(app, argc, argv);

  vf::stub::StubOptions options;
  options.embed_dims = dims;
  options.generate = mode == "echo_claim"  ? vf::stub::GenerateMode::echo_claim
                     : mode == "empty"     ? vf::stub::GenerateMode::empty
                                           : vf::stub::GenerateMode::echo_context;
  vf::stub::StubServer server(options);
  std::cout << "listening on http://" << host << ":" << port << std::endl;
  try {
    server.listen(host, port);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 4;
  }
  return 0;
}
