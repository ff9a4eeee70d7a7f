// Fixed-topology feed-forward networks with per-weight ABCD plasticity.
//
// A network is a stack of dense weight matrices (no biases) with tanh applied
// at every layer, including the output. Each weight carries four scalars
// (A, B, C, D) that drive the local update
//
//   w <- w + mu * (A * pre * post + B * pre + C * post + D)
//
// where pre/post are the activities recorded on the forward pass. Weights are
// never clipped or normalised; they may grow without bound during a trial.

#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "hebbswarm/rng.hpp"

namespace hebbswarm {

struct Architecture {
  std::vector<int> layer_sizes;

  // 9 inputs, two hidden tanh layers of 9, two outputs: 180 weights.
  static Architecture standard() { return {{9, 9, 9, 2}}; }

  int num_layers() const { return static_cast<int>(layer_sizes.size()); }
  int num_transitions() const { return num_layers() - 1; }
  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }

  int weight_count() const {
    int n = 0;
    for (int k = 0; k + 1 < num_layers(); ++k)
      n += layer_sizes[k] * layer_sizes[k + 1];
    return n;
  }

  bool valid() const {
    if (layer_sizes.size() < 2) return false;
    for (int s : layer_sizes)
      if (s < 1) return false;
    return true;
  }

  bool operator==(const Architecture&) const = default;
};

// One dense matrix per layer transition, rows = destination layer,
// cols = source layer.
struct WeightState {
  std::vector<Eigen::MatrixXd> layers;

  Architecture arch() const;
  int weight_count() const;
  bool same_shape(const WeightState& other) const;
};

// Four scalars per weight position, stored shape-parallel to WeightState.
// The learning rate is constant and never evolved.
struct RuleSet {
  std::vector<Eigen::MatrixXd> a, b, c, d;
  double learning_rate = 0.1;

  int weight_count() const;
};

// Post-activation vectors for one forward pass; entry 0 is the input vector.
struct ActivationTrace {
  std::vector<Eigen::VectorXd> activations;

  const Eigen::VectorXd& output() const { return activations.back(); }
};

// All weights independently U[-1, 1].
WeightState init_weights(const Architecture& arch, Rng& rng);

// Zero-initialised state with the given shape.
WeightState zero_weights(const Architecture& arch);

// tanh at every layer. Fills `trace` (entry 0 = input) and returns the output
// activations. Throws std::invalid_argument on a dimension mismatch.
const Eigen::VectorXd& forward(const WeightState& net,
                               const Eigen::VectorXd& input,
                               ActivationTrace& trace);

// Applies one ABCD update in place using the activities in `trace`. The trace
// must come from a forward pass over a net of the same shape.
void hebbian_update(WeightState& net, const RuleSet& rules,
                    const ActivationTrace& trace);

// Genotype codecs. Ordering is layer-major, row-major within a matrix; for
// rules the four scalars of one weight are consecutive (A, B, C, D).
std::vector<double> flatten(const WeightState& net);
std::vector<double> flatten(const RuleSet& rules);

// Throws std::invalid_argument when the vector length does not match.
WeightState unflatten_weights(const Architecture& arch,
                              std::span<const double> genotype);

// Rule values are clamped to [-5, 5] on decode.
RuleSet unflatten_rules(const Architecture& arch,
                        std::span<const double> genotype,
                        double learning_rate = 0.1);

inline constexpr double kRuleBound = 5.0;

}  // namespace hebbswarm
