#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "hebbswarm/field.hpp"
#include "hebbswarm/sim.hpp"

namespace hebbswarm {

// Everything recorded about one trial. Row t of `robot_light` and entry t of
// `poses`/`weights` describe the state at the start of step t; `final_weights`
// is the state after the last step. The per-step `weights` log is only filled
// on request (it dominates the log's memory footprint).
struct TrialLog {
  Eigen::MatrixXd robot_light;  // steps x robots, true field values
  std::vector<std::vector<RobotPose>> poses;
  std::vector<Eigen::MatrixXd> weights;  // per step: robots x weights
  Eigen::MatrixXd final_weights;

  std::uint64_t seed = 0;
  FieldKind field_kind = FieldKind::circular;
  double dt = 0.05;

  long steps() const { return robot_light.rows(); }
  int robots() const { return static_cast<int>(robot_light.cols()); }

  // Mean swarm light per step.
  Eigen::VectorXd light_series() const { return robot_light.rowwise().mean(); }
};

// Mean light over robots and steps, normalized by the field maximum.
double fitness_trial(const TrialLog& log);

// Median of the three repeat trials.
double fitness_individual(double f1, double f2, double f3);

// Raw autocorrelation c(tau) = sum_t w(t+tau) w(t) over the valid overlap,
// averaged over agents and weights. Index tau runs over 0..T-1.
Eigen::VectorXd mean_autocorrelation(const std::vector<Eigen::MatrixXd>& weight_log);

// The same series divided by its tau=0 value, for comparable plots.
Eigen::VectorXd mean_autocorrelation_normalized(
    const std::vector<Eigen::MatrixXd>& weight_log);

// Population standard deviation across agents per weight, averaged over
// weights. Needs at least two agents.
double mean_weight_std(const Eigen::MatrixXd& snapshot);

Eigen::VectorXd mean_weight_std_series(const std::vector<Eigen::MatrixXd>& weight_log);

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<long> counts;   // per bin; out-of-range values land in edge bins

  long total() const;
};

// Pooled over all agents and weights. Fixed edges keep snapshots comparable.
Histogram weight_histogram(const Eigen::MatrixXd& snapshot, int bins = 80,
                           double lo = -10.0, double hi = 10.0);

}  // namespace hebbswarm
