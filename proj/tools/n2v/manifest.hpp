#pragma once

#include <chrono>
#include <filesystem>
#include <string>

#include "json.hpp"

namespace n2v::cli {

// Record of one invocation: resolved configuration, inputs, outputs with
// content digests, and wall time. Written as pretty-printed JSON.
class Manifest {
 public:
  explicit Manifest(std::string subcommand);

  nlohmann::ordered_json& config() { return doc_["config"]; }
  void set_seed(std::uint64_t seed) { doc_["seed"] = seed; }
  void add_input(const std::string& role, const std::filesystem::path& path);
  // Digests the file as it is on disk now, so call after it is closed.
  void add_output(const std::string& role, const std::filesystem::path& path);
  void set_result(const std::string& key, nlohmann::ordered_json value) { doc_["result"][key] = std::move(value); }

  void write(const std::filesystem::path& path);

 private:
  nlohmann::ordered_json doc_;
  std::chrono::steady_clock::time_point start_;
};

// 64-bit FNV-1a of a file's bytes as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);
std::string text_digest(std::string_view text);

}  // namespace n2v::cli
