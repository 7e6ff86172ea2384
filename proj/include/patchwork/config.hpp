#ifndef PATCHWORK_CONFIG_HPP_
#define PATCHWORK_CONFIG_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "patchwork/pipeline.hpp"
#include "patchwork/synth.hpp"

namespace patchwork {

struct RansacConfig {
  double dist_thresh = 0.3;
  int max_iters = 500;
};

/// Everything the CLI reads from one config file: the pipeline parameter
/// tree, the RANSAC baseline settings and the synthetic scene description.
struct RunConfig {
  PatchworkParams params;
  RansacConfig ransac;
  SceneSpec scene;
};

/// Parses the TOML-subset config grammar ([section] headers, `key = value`
/// lines, `#` comments; values are numbers, booleans, quoted strings or
/// flat arrays). Unknown or duplicate keys are hard errors that name the
/// offending key. Throws ValidationError.
RunConfig parse_config(std::string_view text);

/// Reads and parses a config file. Throws IoError / ValidationError.
RunConfig load_config(const std::filesystem::path& path);

/// Canonical serialization; parse_config(dump_config(c)) reproduces c
/// exactly (doubles are printed shortest-round-trip).
std::string dump_config(const RunConfig& config);

}  // namespace patchwork

#endif  // PATCHWORK_CONFIG_HPP_
