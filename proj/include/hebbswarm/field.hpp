// Analytic scalar light fields over a square arena, values in [0, 255].

#pragma once

#include <string>

namespace hebbswarm {

enum class FieldKind {
  circular,         // linear cone, peak 255 at the arena centre
  linear,           // ramp 0 -> 255 along +x
  bimodal,          // max of two cones with peaks on opposite sides
  rosenbrock,       // negated 2D Rosenbrock rescaled to [0, 255]
  shifted_circular  // circular whose peak jumps to a target at a switch time
};

FieldKind field_kind_from_string(const std::string& name);
std::string to_string(FieldKind kind);

struct FieldParams {
  double arena_size = 30.0;
  double falloff_radius = 15.0;  // cone support radius
  // shifted_circular only
  double switch_seconds = 300.0;
  double shifted_x = 3.0;
  double shifted_y = 3.0;
};

class ScalarField {
 public:
  ScalarField(FieldKind kind, const FieldParams& params);

  // Light value at (x, y) at simulation time t (seconds). Only the
  // shifted_circular kind is time-dependent. Clamped to [0, 255].
  double sample(double x, double y, double t_seconds = 0.0) const;

  FieldKind kind() const { return kind_; }
  const FieldParams& params() const { return params_; }
  double arena_size() const { return params_.arena_size; }

  // Arena centre; spawn circles are anchored here for every kind.
  double centre_x() const { return params_.arena_size / 2.0; }
  double centre_y() const { return params_.arena_size / 2.0; }

  static constexpr double kMaxValue = 255.0;

 private:
  double cone(double x, double y, double cx, double cy) const;
  double rosenbrock_raw(double x, double y) const;

  FieldKind kind_;
  FieldParams params_;
  double rb_max_ = 1.0;  // calibration for the rosenbrock rescale
};

}  // namespace hebbswarm
