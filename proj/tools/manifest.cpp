#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include "corex/error.hpp"

namespace corex::cli {

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

RunManifest::RunManifest(std::string command) : command_(std::move(command)) {}

void RunManifest::add_input(const std::string& path) {
  if (!path.empty()) inputs_.emplace_back(path, sha256_file(path));
}

void RunManifest::begin_phase(const std::string& name) {
  finish();
  current_ = name;
  started_ = Clock::now();
}

void RunManifest::finish() {
  if (current_.empty()) return;
  phases_.emplace_back(current_, std::chrono::duration<double>(Clock::now() - started_).count());
  current_.clear();
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json doc;
  doc["command"] = command_;
  doc["config"] = config_;
  doc["seed"] = seed_;
  auto inputs = nlohmann::ordered_json::array();
  for (const auto& [path, digest] : inputs_) inputs.push_back({{"path", path}, {"sha256", digest}});
  doc["inputs"] = std::move(inputs);
  doc["outputs"] = outputs_;
  auto phases = nlohmann::ordered_json::object();
  for (const auto& [name, secs] : phases_) phases[name] = secs;
  doc["wall_seconds"] = std::move(phases);
  return doc.dump(2) + "\n";
}

void RunManifest::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write manifest: " + path);
  out << to_json();
}

}  // namespace corex::cli
