#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

#include "hebbswarm/plastic_net.hpp"
#include "hebbswarm/rng.hpp"

namespace hebbswarm {

enum class Condition {
  hebbian,         // shared ABCD rules, per-robot random plastic nets
  baseline,        // one evolved weight set copied to every robot, frozen
  baseline_a,      // two evolved weight sets, light-driven stochastic switching
  hebbian_single,  // hebbian evolved alone, neighbour sensors held at defaults
  recurrent,       // frozen net fed its previous outputs as extra inputs
};

Condition condition_from_string(const std::string& name);
std::string to_string(Condition c);

// Recurrent variant: previous outputs join the sensor vector, one hidden
// layer the size of the plain input.
Architecture recurrent_architecture(const Architecture& base);

int genotype_dim(Condition c, const Architecture& arch);

class Controller {
 public:
  virtual ~Controller() = default;

  // Maps one robot's rescaled sensor vector to wheel commands in [-1,1]^2.
  // Plastic conditions mutate that robot's network as a side effect.
  virtual Eigen::Vector2d act(int robot_index, const Eigen::VectorXd& s_in) = 0;

  // Current weights, one row per robot, columns in genotype order.
  virtual Eigen::MatrixXd weight_snapshot() const = 0;

  virtual int robot_count() const = 0;
};

// P(green network) as a function of the raw light value in [0,255].
double p_green(double raw_light);

struct ControllerOptions {
  int switch_period = 1;  // baseline_a resample cadence, in control steps
};

std::unique_ptr<Controller> make_controller(Condition c,
                                            const Eigen::VectorXd& genotype,
                                            const Architecture& arch,
                                            int n_robots, Rng& rng,
                                            const ControllerOptions& opts = {});

}  // namespace hebbswarm
