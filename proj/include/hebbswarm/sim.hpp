// Deterministic 2D kinematic simulation of differential-drive robots.
//
// Robots sense the local light value plus the nearest neighbour (distance and
// bearing) in four 90-degree body-frame quadrants, up to 2 m. A step maps
// normalised wheel commands to wheel speeds, integrates with explicit Euler
// at 20 Hz, then resolves disc overlaps and arena walls. The net per-step
// displacement of a robot is capped at max_speed * dt, so contact resolution
// can never make a robot outrun its wheels.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "hebbswarm/field.hpp"
#include "hebbswarm/rng.hpp"

namespace hebbswarm {

// Wraps an angle into [-pi, pi).
double wrap_angle(double a);

struct RobotPose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians in [-pi, pi)
};

struct QuadrantReading {
  double distance = kNoNeighbourDistance;
  double heading = 0.0;  // bearing to the neighbour, body frame, [-pi, pi)

  static constexpr double kNoNeighbourDistance = 2.01;
};

// Quadrant order everywhere: front, left, back, right.
struct SensorReading {
  double light = 0.0;  // raw, [0, 255]
  std::array<QuadrantReading, 4> quadrants{};
};

inline constexpr int kSensorInputSize = 9;
inline constexpr double kSensorRange = 2.0;

struct NoiseModel {
  // std_light is expressed in rescaled [-1, 1] units; theta and distance in
  // natural units (radians / metres).
  double std_light = 0.05;
  double std_theta = 0.043;
  double std_dist = 0.0046;
  double p_dropout = 0.20;  // per quadrant, per sample

  static NoiseModel none() { return {0.0, 0.0, 0.0, 0.0}; }
};

struct WorldParams {
  double dt = 0.05;          // 20 Hz
  double max_speed = 0.14;   // m/s per wheel
  double wheel_base = 0.0935;
  double body_radius = 0.08;
  bool collisions = true;
};

struct WheelCommand {
  double left = 0.0;   // normalised, [-1, 1]
  double right = 0.0;
};

// Anchor point uniform on the circle of radius r_spawn around the field
// centre; robots uniform in the 3x3 m box centred on the anchor with uniform
// headings, resampled until discs do not overlap. Throws std::invalid_argument
// when the circle plus box does not fit the arena and std::runtime_error when
// placement fails after bounded resampling.
std::vector<RobotPose> spawn_swarm(int n, const ScalarField& field,
                                   double r_spawn, Rng& rng);

// Rescales a raw reading into [-1, 1]^9, component order: light, then
// (distance, heading) for front, left, back, right. Raw fields are clamped
// into their nominal ranges first.
Eigen::VectorXd rescale(const SensorReading& reading);

class World {
 public:
  World(ScalarField field, std::vector<RobotPose> robots, WorldParams params,
        NoiseModel noise, Rng rng);

  // Noisy sensor sample for one robot at the current time. Consumes RNG draws
  // in a fixed order (light; then per occupied quadrant: dropout, distance,
  // heading), so a fixed seed fixes the whole reading sequence.
  SensorReading sense(int robot_index);

  // Advances all robots by one control step. One command pair per robot.
  void step(const std::vector<WheelCommand>& commands);

  const std::vector<RobotPose>& robots() const { return robots_; }
  const ScalarField& field() const { return field_; }
  const WorldParams& params() const { return params_; }
  long step_index() const { return step_; }
  double time_seconds() const { return static_cast<double>(step_) * params_.dt; }

  // True field value at a robot's position (the value fitness is scored on).
  double light_at(int robot_index) const;

 private:
  ScalarField field_;
  std::vector<RobotPose> robots_;
  WorldParams params_;
  NoiseModel noise_;
  Rng rng_;
  long step_ = 0;
};

}  // namespace hebbswarm
