// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "idcsbm/model.hpp"
#include "idcsbm/sampler.hpp"

namespace idcsbm::cli {

/// Resolved options for one CLI invocation. Every output file embeds
/// to_json() so a run can be reproduced from its outputs alone.
struct RunConfig {
  std::string command;
  std::filesystem::path input;
  std::vector<std::filesystem::path> inputs;  // replicate real
  std::filesystem::path out = "out";
  std::optional<std::filesystem::path> truth;
  std::optional<std::filesystem::path> mask;
  std::string mode = "synthetic";  // replicate: synthetic | real

  ModelKind kind = ModelKind::degree_corrected;
  ChainConfig chain;
  std::size_t restarts = 10;
  std::size_t threads = 1;
  std::uint64_t seed = 0;
  double holdout = 0.05;
  bool simple = false;        // treat every diagonal dyad as missing
  bool require_nmi = false;   // evaluate: fail without a truth partition

  // generate / replicate synthetic
  std::size_t nodes = 80;
  Hyperparams planted{4.0, 0.5, 0.5, 5.0};
  bool single = false;        // one planted config instead of the grid
  std::vector<double> grid_lambda;  // empty = default grid
  std::vector<double> grid_gamma;

  std::size_t dispersion_window = 500;
  bool log_bins = false;

  nlohmann::json to_json() const;
};

void cmd_generate(const RunConfig& cfg);
void cmd_fit(const RunConfig& cfg);
void cmd_evaluate(const RunConfig& cfg);
void cmd_replicate(const RunConfig& cfg);

/// Dispatches on cfg.command.
void run(const RunConfig& cfg);

/// Reads a partition from JSON: either {"z": [...]} (a truth file) or a bare
/// array of labels.
Partition load_partition_json(const std::filesystem::path& path);

}  // namespace idcsbm::cli
