#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hebbswarm/controller.hpp"
#include "hebbswarm/field.hpp"
#include "hebbswarm/plastic_net.hpp"
#include "hebbswarm/sim.hpp"
#include "json.hpp"

namespace hebbswarm {

// Invalid configuration input; the CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  Condition condition = Condition::hebbian;
  int swarm_size = 20;
  FieldKind field = FieldKind::circular;
  double trial_seconds = 600.0;
  int repeats_per_individual = 3;
  int lambda = 30;
  int generations = 100;
  int runs = 10;
  std::uint64_t seed = 1;
  double sigma0 = 1.0;
  double init_lo = -1.0;  // genotype init range for CMA-ES
  double init_hi = 1.0;
  NoiseModel noise;
  Architecture architecture = Architecture::standard();
  int parallel = 1;
  std::string out = "out";

  double r_spawn = 12.0;
  FieldParams field_params;
  WorldParams world;
  int switch_period = 1;  // baseline_a resample cadence

  int validation_repeats = 60;
  std::vector<int> scale_sizes = {10, 20, 50, 100};
  std::vector<FieldKind> flex_fields = {FieldKind::linear, FieldKind::bimodal,
                                        FieldKind::rosenbrock};
  std::vector<int> grid_depths = {1, 2, 3};
  std::vector<int> grid_widths = {3, 9, 36};
  std::vector<std::pair<int, int>> grid_skip = {{3, 36}};
  int grid_generations = 20;

  int histogram_bins = 80;
  double histogram_lo = -10.0;
  double histogram_hi = 10.0;
  double histogram_interval_seconds = 150.0;
  int trajectory_stride = 1;

  long trial_steps() const;

  // Throws ConfigError describing the first violated constraint.
  void validate() const;
};

// The "small" profile trades fidelity for runtime; "full" restores defaults.
void apply_profile(ExperimentConfig& config, const std::string& profile);

nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

// Reads a JSON config file and overlays it on `base`. Unknown keys are
// rejected so typos fail loudly.
ExperimentConfig load_config(const std::filesystem::path& path,
                             const ExperimentConfig& base);

}  // namespace hebbswarm
