#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace corex::cli {

// Audit record written next to every command's outputs.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  nlohmann::ordered_json& config() { return config_; }
  void add_input(const std::string& path);
  void add_output(const std::string& path) { outputs_.push_back(path); }
  void set_seed(unsigned long long seed) { seed_ = seed; }

  // Times the phase from now until the next begin_phase() or finish().
  void begin_phase(const std::string& name);
  void finish();

  std::string to_json() const;
  void write(const std::string& path) const;

 private:
  using Clock = std::chrono::steady_clock;
  std::string command_;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, std::string>> inputs_;  // path, sha256
  std::vector<std::string> outputs_;
  unsigned long long seed_ = 0;
  std::vector<std::pair<std::string, double>> phases_;
  std::string current_;
  Clock::time_point started_;
};

std::string sha256_file(const std::string& path);

}  // namespace corex::cli
