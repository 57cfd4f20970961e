#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "khess/io.hpp"

namespace khess::cli {

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

std::string utc_timestamp();

struct RunManifest {
  std::string command;
  io::Record parameters;
  io::Record tolerances;
  std::vector<std::filesystem::path> outputs;
  std::string timestamp;

  /// Everything except the timestamp is a function of the inputs.
  std::string to_json() const;
};

}  // namespace khess::cli
