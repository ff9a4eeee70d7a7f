#include "hebbswarm/controller.hpp"

#include <span>
#include <stdexcept>
#include <utility>

namespace hebbswarm {

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<size_t>(v.size())};
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}

Eigen::MatrixXd stack_snapshots(const std::vector<WeightState>& nets) {
  const int n = static_cast<int>(nets.size());
  Eigen::MatrixXd out(n, nets.front().weight_count());
  for (int i = 0; i < n; ++i) out.row(i) = to_vector(flatten(nets[i])).transpose();
  return out;
}

class HebbianController final : public Controller {
 public:
  HebbianController(RuleSet rules, const Architecture& arch, int n_robots,
                    Rng& rng)
      : rules_(std::move(rules)), traces_(n_robots) {
    nets_.reserve(n_robots);
    for (int i = 0; i < n_robots; ++i) nets_.push_back(init_weights(arch, rng));
  }

  Eigen::Vector2d act(int robot_index, const Eigen::VectorXd& s_in) override {
    auto& net = nets_.at(robot_index);
    auto& trace = traces_[robot_index];
    const Eigen::VectorXd& out = forward(net, s_in, trace);
    Eigen::Vector2d cmd(out[0], out[1]);
    hebbian_update(net, rules_, trace);
    return cmd;
  }

  Eigen::MatrixXd weight_snapshot() const override { return stack_snapshots(nets_); }
  int robot_count() const override { return static_cast<int>(nets_.size()); }

 private:
  RuleSet rules_;
  std::vector<WeightState> nets_;
  std::vector<ActivationTrace> traces_;
};

class HomogeneousController final : public Controller {
 public:
  HomogeneousController(const WeightState& net, int n_robots)
      : nets_(n_robots, net), traces_(n_robots) {}

  Eigen::Vector2d act(int robot_index, const Eigen::VectorXd& s_in) override {
    const Eigen::VectorXd& out =
        forward(nets_.at(robot_index), s_in, traces_[robot_index]);
    return {out[0], out[1]};
  }

  Eigen::MatrixXd weight_snapshot() const override { return stack_snapshots(nets_); }
  int robot_count() const override { return static_cast<int>(nets_.size()); }

 private:
  std::vector<WeightState> nets_;
  std::vector<ActivationTrace> traces_;
};

class BaselineAController final : public Controller {
 public:
  BaselineAController(const WeightState& green, const WeightState& red,
                      int n_robots, int switch_period, Rng& rng)
      : green_(green),
        red_(red),
        switch_period_(switch_period),
        assignment_(n_robots, 1),
        acts_(n_robots, 0),
        traces_(n_robots),
        rng_(rng.next_u64()) {
    // Random 50-50 initial split.
    for (int i = 0; i < n_robots / 2; ++i) assignment_[i] = 0;
    for (int i = n_robots - 1; i > 0; --i)
      std::swap(assignment_[i], assignment_[rng_.uniform_int(i + 1)]);
  }

  Eigen::Vector2d act(int robot_index, const Eigen::VectorXd& s_in) override {
    if (robot_index < 0 || robot_index >= static_cast<int>(assignment_.size()))
      throw std::out_of_range("BaselineAController::act: robot index");
    if (acts_[robot_index] % switch_period_ == 0) {
      const double raw_light = (s_in[0] + 1.0) * 127.5;
      assignment_[robot_index] = rng_.uniform() < p_green(raw_light) ? 0 : 1;
    }
    ++acts_[robot_index];
    const WeightState& net = assignment_[robot_index] == 0 ? green_ : red_;
    const Eigen::VectorXd& out = forward(net, s_in, traces_[robot_index]);
    return {out[0], out[1]};
  }

  Eigen::MatrixXd weight_snapshot() const override {
    const int n = static_cast<int>(assignment_.size());
    Eigen::MatrixXd out(n, green_.weight_count());
    const Eigen::VectorXd g = to_vector(flatten(green_));
    const Eigen::VectorXd r = to_vector(flatten(red_));
    for (int i = 0; i < n; ++i)
      out.row(i) = (assignment_[i] == 0 ? g : r).transpose();
    return out;
  }

  int robot_count() const override { return static_cast<int>(assignment_.size()); }

 private:
  WeightState green_, red_;
  int switch_period_;
  std::vector<int> assignment_;  // 0 = green, 1 = red
  std::vector<long> acts_;
  std::vector<ActivationTrace> traces_;
  Rng rng_;
};

class RecurrentController final : public Controller {
 public:
  RecurrentController(const WeightState& net, int n_robots, int sensor_size)
      : nets_(n_robots, net),
        prev_(n_robots, Eigen::Vector2d::Zero()),
        traces_(n_robots),
        sensor_size_(sensor_size) {}

  Eigen::Vector2d act(int robot_index, const Eigen::VectorXd& s_in) override {
    auto& prev = prev_.at(robot_index);
    Eigen::VectorXd in(sensor_size_ + 2);
    in.head(sensor_size_) = s_in;
    in[sensor_size_] = prev[0];
    in[sensor_size_ + 1] = prev[1];
    const Eigen::VectorXd& out = forward(nets_[robot_index], in, traces_[robot_index]);
    prev = Eigen::Vector2d(out[0], out[1]);
    return prev;
  }

  Eigen::MatrixXd weight_snapshot() const override { return stack_snapshots(nets_); }
  int robot_count() const override { return static_cast<int>(nets_.size()); }

 private:
  std::vector<WeightState> nets_;
  std::vector<Eigen::Vector2d> prev_;
  std::vector<ActivationTrace> traces_;
  int sensor_size_;
};

}  // namespace

Condition condition_from_string(const std::string& name) {
  if (name == "hebbian") return Condition::hebbian;
  if (name == "baseline") return Condition::baseline;
  if (name == "baseline_a") return Condition::baseline_a;
  if (name == "hebbian_single") return Condition::hebbian_single;
  if (name == "recurrent") return Condition::recurrent;
  throw std::invalid_argument("unknown condition: " + name);
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::hebbian: return "hebbian";
    case Condition::baseline: return "baseline";
    case Condition::baseline_a: return "baseline_a";
    case Condition::hebbian_single: return "hebbian_single";
    case Condition::recurrent: return "recurrent";
  }
  throw std::invalid_argument("unknown condition");
}

Architecture recurrent_architecture(const Architecture& base) {
  return {{base.input_size() + base.output_size(), base.input_size(),
           base.output_size()}};
}

int genotype_dim(Condition c, const Architecture& arch) {
  switch (c) {
    case Condition::hebbian:
    case Condition::hebbian_single: return 4 * arch.weight_count();
    case Condition::baseline: return arch.weight_count();
    case Condition::baseline_a: return 2 * arch.weight_count();
    case Condition::recurrent: return recurrent_architecture(arch).weight_count();
  }
  throw std::invalid_argument("unknown condition");
}

double p_green(double raw_light) {
  if (raw_light > 229.0) return 1.0;
  if (raw_light > 178.0) return 0.75;
  if (raw_light > 127.0) return 0.50;
  return 0.25;
}

std::unique_ptr<Controller> make_controller(Condition c,
                                            const Eigen::VectorXd& genotype,
                                            const Architecture& arch,
                                            int n_robots, Rng& rng,
                                            const ControllerOptions& opts) {
  if (!arch.valid()) throw std::invalid_argument("make_controller: bad architecture");
  if (n_robots < 1) throw std::invalid_argument("make_controller: need robots");
  if (genotype.size() != genotype_dim(c, arch))
    throw std::invalid_argument("make_controller: genotype length mismatch");
  if (opts.switch_period < 1)
    throw std::invalid_argument("make_controller: switch_period must be >= 1");

  switch (c) {
    case Condition::hebbian:
    case Condition::hebbian_single:
      return std::make_unique<HebbianController>(
          unflatten_rules(arch, as_span(genotype)), arch, n_robots, rng);
    case Condition::baseline:
      return std::make_unique<HomogeneousController>(
          unflatten_weights(arch, as_span(genotype)), n_robots);
    case Condition::baseline_a: {
      const int half = arch.weight_count();
      const auto green = unflatten_weights(
          arch, std::span<const double>(genotype.data(), half));
      const auto red = unflatten_weights(
          arch, std::span<const double>(genotype.data() + half, half));
      return std::make_unique<BaselineAController>(green, red, n_robots,
                                                   opts.switch_period, rng);
    }
    case Condition::recurrent:
      return std::make_unique<RecurrentController>(
          unflatten_weights(recurrent_architecture(arch), as_span(genotype)),
          n_robots, arch.input_size());
  }
  throw std::invalid_argument("unknown condition");
}

}  // namespace hebbswarm
