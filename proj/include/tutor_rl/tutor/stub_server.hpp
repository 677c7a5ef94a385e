#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace tutor_rl::tutor {

struct StubOptions {
  std::string reply = "<action>0</action>";
  std::string malformed_reply = "I am not sure which move is best here.";
  double malformed_rate = 0.0;
  std::uint64_t seed = 1;
  int delay_ms = 0;
};

// Local canned-response server speaking the /api/generate wire protocol.
class StubLlmServer {
 public:
  explicit StubLlmServer(StubOptions options);
  ~StubLlmServer();
  StubLlmServer(const StubLlmServer&) = delete;
  StubLlmServer& operator=(const StubLlmServer&) = delete;

  // Binds (port 0 picks a free port) and serves on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  // Serves on the calling thread until stop() is called from elsewhere.
  void run_blocking(const std::string& host, int port);
  void stop();

  int port() const { return port_; }
  std::string url() const;
  std::uint64_t requests() const { return requests_.load(); }
  std::uint64_t malformed_sent() const { return malformed_.load(); }

 private:
  void install_routes();

  StubOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::mutex rng_mutex_;
  std::mt19937_64 rng_;
  std::string host_ = "127.0.0.1";
  int port_ = -1;
  std::atomic<std::uint64_t> requests_{0};
  std::atomic<std::uint64_t> malformed_{0};
};

}  // namespace tutor_rl::tutor
