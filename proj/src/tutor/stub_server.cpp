#include "tutor_rl/tutor/stub_server.hpp"

#include <chrono>
#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

namespace tutor_rl::tutor {

StubLlmServer::StubLlmServer(StubOptions options)
    : options_(std::move(options)), server_(std::make_unique<httplib::Server>()), rng_(options_.seed) {
  if (options_.malformed_rate < 0.0 || options_.malformed_rate > 1.0) {
    throw std::invalid_argument("malformed rate must lie in [0, 1]");
  }
  install_routes();
}

StubLlmServer::~StubLlmServer() { stop(); }

void StubLlmServer::install_routes() {
  server_->Get("/", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("Ollama is running", "text/plain");
  });

  server_->Post("/api/generate", [this](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("model") || !body.contains("prompt")) {
      res.status = 400;
      res.set_content(R"({"error":"model and prompt are required"})", "application/json");
      return;
    }
    requests_ += 1;
    if (options_.delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(options_.delay_ms));

    bool malformed = false;
    {
      std::lock_guard lock(rng_mutex_);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      malformed = unit(rng_) < options_.malformed_rate;
    }
    if (malformed) malformed_ += 1;

    const nlohmann::json reply{
        {"model", body["model"]},
        {"created_at", "1970-01-01T00:00:00Z"},
        {"response", malformed ? options_.malformed_reply : options_.reply},
        {"done", true},
        {"done_reason", "stop"},
        {"total_duration", static_cast<std::int64_t>(options_.delay_ms) * 1000000},
    };
    res.set_content(reply.dump(), "application/json");
  });
}

int StubLlmServer::start(const std::string& host, int port) {
  if (thread_.joinable()) throw std::logic_error("stub server already running");
  host_ = host;
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0) throw std::runtime_error("stub server could not bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void StubLlmServer::run_blocking(const std::string& host, int port) {
  host_ = host;
  port_ = port;
  if (!server_->listen(host, port)) {
    throw std::runtime_error("stub server could not listen on " + host + ":" + std::to_string(port));
  }
}

void StubLlmServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string StubLlmServer::url() const { return "http://" + host_ + ":" + std::to_string(port_); }

}  // namespace tutor_rl::tutor
