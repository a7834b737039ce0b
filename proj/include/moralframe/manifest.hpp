#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "moralframe/formats.hpp"

namespace moralframe {

inline constexpr std::string_view kToolVersion = "moralframe 0.1.0";

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

// Reproducibility envelope written next to every command's outputs.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> options;
  std::map<std::string, std::string> input_digests;   // path -> sha256
  std::map<std::string, std::string> output_digests;  // file name -> sha256
  std::string tool_version{kToolVersion};
  std::string created_utc;

  // sha256 over everything except created_utc.
  std::string content_digest() const;
  Json to_json() const;
};

// Files are held in memory until commit(), which writes each to a temporary
// sibling and renames them into place. Nothing is written if the command
// fails before commit.
class OutputStage {
 public:
  void add(std::filesystem::path path, std::string content);
  // Adds the manifest (recording digests of every staged file), then writes.
  void commit(RunManifest manifest, const std::filesystem::path& manifest_path);

  const std::vector<std::pair<std::filesystem::path, std::string>>& files() const { return files_; }

 private:
  std::vector<std::pair<std::filesystem::path, std::string>> files_;
};

// "out/scores.csv" + ".baseline.json" -> "out/scores.baseline.json"
std::filesystem::path sibling(const std::filesystem::path& out, std::string_view suffix);

}  // namespace moralframe
