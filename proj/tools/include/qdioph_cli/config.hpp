#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdioph/asymptotics.hpp"
#include "qdioph/counting.hpp"

namespace qdioph::cli {

/// Malformed or semantically invalid configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlanConfig {
  std::vector<double> T_grid;
  int theta_count = 1;
  double theta_box = 1.0;
  std::uint64_t seed = 0;
};

struct OutputConfig {
  std::optional<std::string> csv_path;
  std::optional<std::string> svg_path;
};

/// Parsed experiment configuration. problem.T is left at its default; the
/// commands choose T from flags or from the plan.
struct ExperimentConfig {
  ProblemSpec problem;
  std::optional<PlanConfig> plan;
  OutputConfig outputs;

  ExperimentPlan experiment_plan() const;
};

/// Parses a JSON document. Unknown keys, wrong types and failed module
/// validation raise ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace qdioph::cli
