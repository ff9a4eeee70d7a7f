#include "hebbswarm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hebbswarm {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double wrap_angle(double a) {
  if (a >= -kPi && a < kPi) return a;  // already in range: keep bits intact
  a = std::fmod(a + kPi, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a - kPi;
}

std::vector<RobotPose> spawn_swarm(int n, const ScalarField& field,
                                   double r_spawn, Rng& rng) {
  if (n < 1) throw std::invalid_argument("spawn_swarm: n must be >= 1");
  const double half_box = 1.5;
  const double arena = field.arena_size();
  if (r_spawn < 0.0 ||
      field.centre_x() + r_spawn + half_box > arena ||
      field.centre_x() - r_spawn - half_box < 0.0)
    throw std::invalid_argument("spawn_swarm: spawn circle plus box exceeds arena");

  const double phi = rng.uniform(0.0, kTwoPi);
  const double ax = field.centre_x() + r_spawn * std::cos(phi);
  const double ay = field.centre_y() + r_spawn * std::sin(phi);

  const double min_sep = 0.08;  // one body radius between centres
  std::vector<RobotPose> poses;
  poses.reserve(n);
  for (int i = 0; i < n; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      RobotPose p;
      p.x = ax + rng.uniform(-half_box, half_box);
      p.y = ay + rng.uniform(-half_box, half_box);
      p.heading = rng.uniform(-kPi, kPi);
      placed = true;
      for (const auto& q : poses)
        if (std::hypot(p.x - q.x, p.y - q.y) < min_sep) {
          placed = false;
          break;
        }
      if (placed) poses.push_back(p);
    }
    if (!placed)
      throw std::runtime_error("spawn_swarm: could not place swarm without overlap");
  }
  return poses;
}

Eigen::VectorXd rescale(const SensorReading& reading) {
  Eigen::VectorXd s(kSensorInputSize);
  const double light = std::clamp(reading.light, 0.0, ScalarField::kMaxValue);
  s[0] = 2.0 * light / ScalarField::kMaxValue - 1.0;
  for (int q = 0; q < 4; ++q) {
    const double d = std::clamp(reading.quadrants[q].distance, 0.0,
                                QuadrantReading::kNoNeighbourDistance);
    const double th = std::clamp(reading.quadrants[q].heading, -kPi,
                                 std::nextafter(kPi, 0.0));
    s[1 + 2 * q] = 2.0 * d / QuadrantReading::kNoNeighbourDistance - 1.0;
    s[2 + 2 * q] = th / kPi;
  }
  return s;
}

World::World(ScalarField field, std::vector<RobotPose> robots,
             WorldParams params, NoiseModel noise, Rng rng)
    : field_(std::move(field)),
      robots_(std::move(robots)),
      params_(params),
      noise_(noise),
      rng_(rng) {
  if (robots_.empty()) throw std::invalid_argument("World: no robots");
}

double World::light_at(int robot_index) const {
  const auto& p = robots_.at(robot_index);
  return field_.sample(p.x, p.y, time_seconds());
}

SensorReading World::sense(int robot_index) {
  const auto& self = robots_.at(robot_index);

  SensorReading out;
  const double raw = field_.sample(self.x, self.y, time_seconds());
  const double light_std_raw = noise_.std_light * (ScalarField::kMaxValue / 2.0);
  out.light = std::clamp(raw + rng_.normal() * light_std_raw, 0.0,
                         ScalarField::kMaxValue);

  // Nearest neighbour per quadrant, squared distances first.
  std::array<int, 4> nearest{-1, -1, -1, -1};
  std::array<double, 4> best_d2;
  best_d2.fill(kSensorRange * kSensorRange);
  for (int j = 0; j < static_cast<int>(robots_.size()); ++j) {
    if (j == robot_index) continue;
    const double dx = robots_[j].x - self.x;
    const double dy = robots_[j].y - self.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 > kSensorRange * kSensorRange) continue;
    const double bearing = wrap_angle(std::atan2(dy, dx) - self.heading);
    // Sectors of 90 degrees centred on the body axes.
    double a = bearing + kPi / 4.0;
    if (a < 0.0) a += kTwoPi;
    const int quadrant = std::min(3, static_cast<int>(a / (kPi / 2.0)));
    if (d2 < best_d2[quadrant]) {
      best_d2[quadrant] = d2;
      nearest[quadrant] = j;
    }
  }

  for (int q = 0; q < 4; ++q) {
    if (nearest[q] < 0) continue;  // stays at the no-neighbour default
    if (rng_.uniform() < noise_.p_dropout) continue;  // faulty reading
    const auto& other = robots_[nearest[q]];
    const double dx = other.x - self.x;
    const double dy = other.y - self.y;
    const double d = std::sqrt(dx * dx + dy * dy) + rng_.normal() * noise_.std_dist;
    const double bearing =
        wrap_angle(std::atan2(dy, dx) - self.heading + rng_.normal() * noise_.std_theta);
    out.quadrants[q].distance =
        std::clamp(d, 0.0, QuadrantReading::kNoNeighbourDistance);
    out.quadrants[q].heading = bearing;
  }
  return out;
}

void World::step(const std::vector<WheelCommand>& commands) {
  if (commands.size() != robots_.size())
    throw std::invalid_argument("World::step: one command per robot required");

  const double cap = params_.max_speed * params_.dt;
  std::vector<RobotPose> prev = robots_;

  for (size_t i = 0; i < robots_.size(); ++i) {
    const double ul = std::clamp(commands[i].left, -1.0, 1.0);
    const double ur = std::clamp(commands[i].right, -1.0, 1.0);
    const double vl = ul * params_.max_speed;
    const double vr = ur * params_.max_speed;
    const double v = 0.5 * (vl + vr);
    const double omega = (vr - vl) / params_.wheel_base;
    RobotPose& p = robots_[i];
    p.x += v * std::cos(p.heading) * params_.dt;
    p.y += v * std::sin(p.heading) * params_.dt;
    p.heading = wrap_angle(p.heading + omega * params_.dt);
  }

  if (params_.collisions) {
    // One symmetric push-out pass; residual overlap relaxes on later steps
    // because displacement is capped below.
    const double min_sep = 2.0 * params_.body_radius;
    for (size_t i = 0; i < robots_.size(); ++i)
      for (size_t j = i + 1; j < robots_.size(); ++j) {
        double dx = robots_[j].x - robots_[i].x;
        double dy = robots_[j].y - robots_[i].y;
        double d = std::hypot(dx, dy);
        if (d >= min_sep) continue;
        if (d < 1e-9) {  // coincident: separate along x
          dx = 1.0;
          dy = 0.0;
          d = 1.0;
        }
        const double push = 0.5 * (min_sep - std::min(d, min_sep));
        const double nx = dx / d;
        const double ny = dy / d;
        robots_[i].x -= push * nx;
        robots_[i].y -= push * ny;
        robots_[j].x += push * nx;
        robots_[j].y += push * ny;
      }
  }

  const double lo = params_.body_radius;
  const double hi = field_.arena_size() - params_.body_radius;
  for (size_t i = 0; i < robots_.size(); ++i) {
    RobotPose& p = robots_[i];
    // Cap the net displacement at the speed bound.
    const double mx = p.x - prev[i].x;
    const double my = p.y - prev[i].y;
    const double m = std::hypot(mx, my);
    if (m > cap) {
      p.x = prev[i].x + mx * (cap / m);
      p.y = prev[i].y + my * (cap / m);
    }
    // Walls clamp position and leave heading unchanged.
    p.x = std::clamp(p.x, lo, hi);
    p.y = std::clamp(p.y, lo, hi);
  }

  ++step_;
}

}  // namespace hebbswarm
