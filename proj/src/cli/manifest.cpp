#include "moralframe/manifest.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>
#include <memory>

#include "moralframe/error.hpp"

namespace moralframe {

namespace {

std::string to_hex(const unsigned char* data, unsigned int len) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kDigits[data[i] >> 4];
    out += kDigits[data[i] & 0xF];
  }
  return out;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw Error("sha256 failed");
  }
  return to_hex(digest, len);
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string() + " for hashing");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

Json RunManifest::to_json() const {
  Json j;
  j["tool_version"] = tool_version;
  j["subcommand"] = subcommand;
  j["options"] = options;
  j["inputs"] = input_digests;
  j["outputs"] = output_digests;
  return j;
}

std::string RunManifest::content_digest() const { return sha256_hex(to_json().dump()); }

void OutputStage::add(std::filesystem::path path, std::string content) {
  files_.emplace_back(std::move(path), std::move(content));
}

void OutputStage::commit(RunManifest manifest, const std::filesystem::path& manifest_path) {
  for (const auto& [path, content] : files_) {
    manifest.output_digests[path.filename().string()] = sha256_hex(content);
  }
  Json j = manifest.to_json();
  j["content_digest"] = manifest.content_digest();
  j["created_utc"] = manifest.created_utc.empty() ? utc_now() : manifest.created_utc;
  files_.emplace_back(manifest_path, j.dump(2) + "\n");

  const std::string tmp_suffix = ".tmp." + std::to_string(::getpid());
  std::vector<std::filesystem::path> written;
  try {
    for (const auto& [path, content] : files_) {
      if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
      std::filesystem::path tmp = path;
      tmp += tmp_suffix;
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw DataError("cannot write " + tmp.string());
      written.push_back(tmp);
    }
  } catch (...) {
    for (const auto& tmp : written) std::filesystem::remove(tmp);
    throw;
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    std::filesystem::rename(written[i], files_[i].first);
  }
}

std::filesystem::path sibling(const std::filesystem::path& out, std::string_view suffix) {
  std::filesystem::path p = out.parent_path() / out.stem();
  p += std::string(suffix);
  return p;
}

}  // namespace moralframe
