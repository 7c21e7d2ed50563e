#pragma once

// Run manifest: config echo, version, timestamps and checksummed outputs.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

namespace coagtree::cli {

inline std::string sha256_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

inline std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class RunManifest {
 public:
  RunManifest(std::string command, std::string version, nlohmann::json config)
      : command_(std::move(command)), version_(std::move(version)), config_(std::move(config)), started_(utc_now()) {}

  void add_output(const std::filesystem::path& p) { outputs_.push_back(p); }

  /// Checksums every output, then writes the manifest itself.
  std::filesystem::path write(const std::filesystem::path& dir) const {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& p : outputs_) {
      files.push_back({{"path", p.filename().string()},
                       {"bytes", std::filesystem::file_size(p)},
                       {"sha256", sha256_file(p)}});
    }
    const nlohmann::json doc = {{"command", command_}, {"version", version_}, {"config", config_},
                                {"started", started_}, {"finished", utc_now()},  {"outputs", files}};
    const auto path = dir / "manifest.json";
    std::ofstream out(path);
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return path;
  }

 private:
  std::string command_;
  std::string version_;
  nlohmann::json config_;
  std::string started_;
  std::vector<std::filesystem::path> outputs_;
};

}  // namespace coagtree::cli
