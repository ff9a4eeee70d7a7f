#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "hebbswarm/config.hpp"
#include "hebbswarm/controller.hpp"
#include "hebbswarm/metrics.hpp"

namespace hebbswarm {

// Labels for deriving independent RNG streams from one seed. A trial seed is
// derive_key(master, {trial, generation, individual, repeat}); inside a trial
// the spawn, world noise and controller streams split off below it.
namespace seedtag {
inline constexpr std::uint64_t spawn = 1;
inline constexpr std::uint64_t world = 2;
inline constexpr std::uint64_t controller = 3;
inline constexpr std::uint64_t trial = 4;
inline constexpr std::uint64_t cma = 5;
inline constexpr std::uint64_t run = 6;
inline constexpr std::uint64_t retest = 7;
inline constexpr std::uint64_t perturb = 8;
inline constexpr std::uint64_t grid = 9;
}  // namespace seedtag

struct TrialOptions {
  Condition condition = Condition::hebbian;
  Architecture arch = Architecture::standard();
  int n_robots = 20;
  long steps = 12000;
  FieldKind field_kind = FieldKind::circular;
  FieldParams field_params;
  WorldParams world;
  NoiseModel noise;
  double r_spawn = 12.0;
  int switch_period = 1;
  bool log_weights = false;
};

TrialOptions trial_options(const ExperimentConfig& config);

// One full deployment: spawn, then for every step log state, sense, act and
// integrate. Deterministic in (genotype, options, seed).
TrialLog run_trial(const Eigen::VectorXd& genotype, const TrialOptions& opts,
                   std::uint64_t seed);

}  // namespace hebbswarm
