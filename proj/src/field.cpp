#include "hebbswarm/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hebbswarm {

FieldKind field_kind_from_string(const std::string& name) {
  if (name == "circular" || name == "centre") return FieldKind::circular;
  if (name == "linear") return FieldKind::linear;
  if (name == "bimodal") return FieldKind::bimodal;
  if (name == "rosenbrock") return FieldKind::rosenbrock;
  if (name == "shifted_circular") return FieldKind::shifted_circular;
  throw std::invalid_argument("unknown field kind: " + name);
}

std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::circular: return "circular";
    case FieldKind::linear: return "linear";
    case FieldKind::bimodal: return "bimodal";
    case FieldKind::rosenbrock: return "rosenbrock";
    case FieldKind::shifted_circular: return "shifted_circular";
  }
  return "?";
}

ScalarField::ScalarField(FieldKind kind, const FieldParams& params)
    : kind_(kind), params_(params) {
  if (params_.arena_size <= 0.0 || params_.falloff_radius <= 0.0)
    throw std::invalid_argument("field: arena_size and falloff_radius must be positive");
  if (kind_ == FieldKind::rosenbrock) {
    // Calibrate the affine rescale on an inclusive grid. The grid hits the
    // domain corners and the (1,1) minimum exactly, so min = 0 and max is
    // the true corner maximum.
    const int n = 2000;
    double mx = 0.0;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const double x = params_.arena_size * i / n;
        const double y = params_.arena_size * j / n;
        mx = std::max(mx, rosenbrock_raw(x, y));
      }
    rb_max_ = mx;
  }
}

double ScalarField::cone(double x, double y, double cx, double cy) const {
  const double dist = std::hypot(x - cx, y - cy);
  return kMaxValue * std::max(0.0, 1.0 - dist / params_.falloff_radius);
}

double ScalarField::rosenbrock_raw(double x, double y) const {
  // Arena mapped onto [-2, 2] x [-1, 3]; the global minimum (1, 1) is inside.
  const double rx = -2.0 + 4.0 * x / params_.arena_size;
  const double ry = -1.0 + 4.0 * y / params_.arena_size;
  const double t1 = 1.0 - rx;
  const double t2 = ry - rx * rx;
  return t1 * t1 + 100.0 * t2 * t2;
}

double ScalarField::sample(double x, double y, double t_seconds) const {
  double v = 0.0;
  switch (kind_) {
    case FieldKind::circular:
      v = cone(x, y, centre_x(), centre_y());
      break;
    case FieldKind::shifted_circular:
      if (t_seconds >= params_.switch_seconds)
        v = cone(x, y, params_.shifted_x, params_.shifted_y);
      else
        v = cone(x, y, centre_x(), centre_y());
      break;
    case FieldKind::linear:
      v = kMaxValue * x / params_.arena_size;
      break;
    case FieldKind::bimodal:
      v = std::max(cone(x, y, 0.25 * params_.arena_size, centre_y()),
                   cone(x, y, 0.75 * params_.arena_size, centre_y()));
      break;
    case FieldKind::rosenbrock:
      v = kMaxValue * (1.0 - rosenbrock_raw(x, y) / rb_max_);
      break;
  }
  return std::clamp(v, 0.0, kMaxValue);
}

}  // namespace hebbswarm
