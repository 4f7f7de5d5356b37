#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mdisc::cli {

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

struct OutputRecord {
  std::string path;  ///< "-" for standard output
  std::uint64_t checksum = 0;
  std::size_t bytes = 0;
};

/// Everything needed to re-run a command. Parameters hold fully resolved
/// values (radians, explicit grids) in command-line spelling.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t seed = 0;
  std::string version;
  std::vector<OutputRecord> outputs;

  /// FNV-1a over command, params, seed and version; independent of outputs.
  std::uint64_t checksum() const;
  /// Command-line arguments reproducing the run, without --out.
  std::vector<std::string> to_args() const;

  std::string to_json() const;
  /// Throws ValidationError on malformed input.
  static RunManifest from_json(std::string_view text);
};

}  // namespace mdisc::cli
