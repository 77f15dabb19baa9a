#include "manifest.hpp"

#include <cstdio>
#include <fstream>

#include "n2v/error.hpp"
#include "n2v/random.hpp"

namespace n2v::cli {

Manifest::Manifest(std::string subcommand) : start_(std::chrono::steady_clock::now()) {
  doc_["subcommand"] = std::move(subcommand);
  doc_["config"] = nlohmann::ordered_json::object();
  doc_["seed"] = nullptr;
  doc_["inputs"] = nlohmann::ordered_json::object();
  doc_["outputs"] = nlohmann::ordered_json::object();
}

void Manifest::add_input(const std::string& role, const std::filesystem::path& path) {
  doc_["inputs"][role] = {{"path", path.string()}, {"fnv1a64", file_digest(path)}};
}

void Manifest::add_output(const std::string& role, const std::filesystem::path& path) {
  doc_["outputs"][role] = {{"path", path.string()}, {"fnv1a64", file_digest(path)}};
}

void Manifest::write(const std::filesystem::path& path) {
  doc_["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << doc_.dump(2) << '\n';
  if (!out) throw IoError("failed writing manifest " + path.string());
}

namespace {

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  Fnv1a h;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    h.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  return hex(h.digest());
}

std::string text_digest(std::string_view text) {
  Fnv1a h;
  h.update(text.data(), text.size());
  return hex(h.digest());
}

}  // namespace n2v::cli
