#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hebbswarm/cmaes.hpp"
#include "hebbswarm/config.hpp"
#include "hebbswarm/trial.hpp"

namespace hebbswarm {

struct GenerationStats {
  long generation = 0;
  double mean_fitness = 0.0;
  double max_fitness = 0.0;
  double best_so_far = 0.0;
};

struct RunReport {
  std::vector<GenerationStats> generations;
  Eigen::VectorXd best_genotype;
  double best_fitness = 0.0;
  double wall_clock_seconds = 0.0;
  std::uint64_t seed = 0;
  Condition condition = Condition::hebbian;
};

// One evolutionary run. Writes checkpoint.json after every generation and
// resumes from it when present; emits learning_curve.csv, run_report.json,
// best_genotype.json and plots/learning_curve.svg under out_dir.
RunReport evolve(const ExperimentConfig& config,
                 const std::filesystem::path& out_dir, std::uint64_t seed);

// Runs config.runs independent repetitions (run_<i>/ subdirectories when more
// than one) and writes evolve_summary.json.
std::vector<RunReport> evolve_runs(const ExperimentConfig& config);

struct RetestSummary {
  std::vector<double> fitnesses;
  double mean = 0.0;
  double std_dev = 0.0;
};

// Validation: fresh independent trials of one genotype. Writes trial_<k>.csv,
// metrics_<k>.csv, fitness.csv and retest_summary.json under out_dir.
RetestSummary retest(const Eigen::VectorXd& genotype,
                     const ExperimentConfig& config,
                     const std::filesystem::path& out_dir);

struct PerturbReport {
  double fitness_static = 0.0;
  double fitness_dynamic = 0.0;
  long switch_step = 0;
  long identical_prefix_steps = 0;  // leading steps with bit-identical state
  std::vector<double> histogram_seconds;
};

// Paired same-seed runs on the static and shifted fields, with the full
// weight-dynamics bundle (light, autocorrelation, mean weight STD,
// histograms) written per run.
PerturbReport perturb_experiment(const Eigen::VectorXd& genotype,
                                 const ExperimentConfig& config,
                                 const std::filesystem::path& out_dir);

// Retests across swarm sizes / field kinds; summaries keyed by variant.
void scale_experiment(const Eigen::VectorXd& genotype,
                      const ExperimentConfig& config,
                      const std::filesystem::path& out_dir);
void flex_experiment(const Eigen::VectorXd& genotype,
                     const ExperimentConfig& config,
                     const std::filesystem::path& out_dir);

struct GridCell {
  int depth = 0;
  int width = 0;
  int genotype_dim = 0;
  double best_fitness = 0.0;
  bool skipped = false;
};

// Reduced-budget evolution of the frozen-weights condition over the
// depth x width grid; writes per-cell run directories and grid_summary.json.
std::vector<GridCell> arch_grid(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir);

}  // namespace hebbswarm
