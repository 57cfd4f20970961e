#include "manifest.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "khess/errors.hpp"

#ifndef KHESS_VERSION
#define KHESS_VERSION "0.0.0"
#endif

namespace khess::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 15> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char b[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(b, sizeof b, "%02x", md[i]);
    hex += b;
  }
  return hex;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = KHESS_VERSION;
  j["timestamp"] = timestamp;
  auto params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : parameters) params[k] = v;
  j["parameters"] = params;
  auto tols = nlohmann::ordered_json::object();
  for (const auto& [k, v] : tolerances) tols[k] = v;
  j["tolerances"] = tols;
  auto outs = nlohmann::ordered_json::object();
  for (const auto& p : outputs) outs[p.filename().string()] = sha256_file(p);
  j["outputs"] = outs;
  return j.dump(2) + "\n";
}

}  // namespace khess::cli
