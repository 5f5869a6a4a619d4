// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "crdra/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace crdra::tools {

/// Experiment ids accepted by the CLI, in the order they are listed by --help.
inline const std::vector<std::string> kExperiments = {"fig2", "mac-wsr", "bc-wsr", "sinr-balance",
                                                     "ic-wsr", "dra", "diversity"};

struct Sweep {
  std::string variable = "power";  // "power" or "interference"
  double start = 1.0;
  double stop = 1.0;
  std::size_t steps = 1;
  bool log_scale = false;

  std::vector<double> values() const;
};

/// One experiment run. Loaded from a JSON file; command-line flags override
/// seed, tolerance and output.
struct ExperimentConfig {
  std::string experiment;  // one of kExperiments
  std::string id;          // label written to every row; defaults to `experiment`

  std::size_t users = 1;
  Index bs_antennas = 1;
  std::vector<Index> tx_antennas;
  std::vector<Index> rx_antennas;
  std::vector<Index> pu_antennas;

  std::vector<double> power;
  std::vector<double> interference;  // +inf allowed ("inf" or null in JSON)
  std::vector<double> weights;

  Sweep sweep;
  std::size_t dimensions = 1;
  double direct_variance = 1.0;
  double cross_variance = 1.0;
  double pu_variance = 1.0;

  std::optional<std::uint64_t> seed;
  double tolerance = 1e-5;
  std::string output;

  // diversity
  std::size_t samples = 100000;
  std::vector<std::string> laws = {"exponential"};
  double spread = 1.0;
  double pu_power = 1.0;

  // ic-wsr: 0 disables the split search
  std::size_t split_resolution = 0;

  static ExperimentConfig parse(const std::string& json_text);
  static ExperimentConfig load(const std::filesystem::path& path);

  /// Throws ConfigError when a field is missing or out of range for the
  /// selected experiment.
  void validate() const;

  Topology topology() const;
  FadingProcess fading() const;
};

/// The configuration used for the reference rate comparison: M = N = 4,
/// two single-antenna PUs with budget 0.1 each, P swept over 0.1..100 on 20
/// log-spaced points.
ExperimentConfig default_fig2_config();

}  // namespace crdra::tools
