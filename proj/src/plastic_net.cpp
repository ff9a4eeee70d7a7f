#include "hebbswarm/plastic_net.hpp"

#include <cmath>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hebbswarm {

namespace {

void check(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

std::vector<Eigen::MatrixXd> zero_mats(const Architecture& arch) {
  std::vector<Eigen::MatrixXd> mats;
  mats.reserve(arch.num_transitions());
  for (int k = 0; k < arch.num_transitions(); ++k)
    mats.push_back(Eigen::MatrixXd::Zero(arch.layer_sizes[k + 1],
                                         arch.layer_sizes[k]));
  return mats;
}

}  // namespace

Architecture WeightState::arch() const {
  Architecture a;
  a.layer_sizes.reserve(layers.size() + 1);
  for (const auto& m : layers) a.layer_sizes.push_back(static_cast<int>(m.cols()));
  a.layer_sizes.push_back(static_cast<int>(layers.back().rows()));
  return a;
}

int WeightState::weight_count() const {
  int n = 0;
  for (const auto& m : layers) n += static_cast<int>(m.size());
  return n;
}

bool WeightState::same_shape(const WeightState& other) const {
  if (layers.size() != other.layers.size()) return false;
  for (size_t k = 0; k < layers.size(); ++k)
    if (layers[k].rows() != other.layers[k].rows() ||
        layers[k].cols() != other.layers[k].cols())
      return false;
  return true;
}

int RuleSet::weight_count() const {
  int n = 0;
  for (const auto& m : a) n += static_cast<int>(m.size());
  return n;
}

WeightState init_weights(const Architecture& arch, Rng& rng) {
  check(arch.valid(), "init_weights: invalid architecture");
  WeightState net{zero_mats(arch)};
  // Row-major fill so the draw order matches the flatten ordering.
  for (auto& m : net.layers)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(-1.0, 1.0);
  return net;
}

WeightState zero_weights(const Architecture& arch) {
  check(arch.valid(), "zero_weights: invalid architecture");
  return WeightState{zero_mats(arch)};
}

const Eigen::VectorXd& forward(const WeightState& net,
                               const Eigen::VectorXd& input,
                               ActivationTrace& trace) {
  check(!net.layers.empty(), "forward: empty network");
  check(input.size() == net.layers.front().cols(),
        "forward: input size does not match first layer");

  trace.activations.resize(net.layers.size() + 1);
  trace.activations[0] = input;
  for (size_t k = 0; k < net.layers.size(); ++k) {
    const auto& w = net.layers[k];
    check(w.cols() == trace.activations[k].size(),
          "forward: layer shape mismatch");
    // std::tanh per element: bit-identical to the scalar reference everywhere,
    // unlike Eigen's vectorised tanh.
    trace.activations[k + 1] =
        (w * trace.activations[k]).unaryExpr([](double v) { return std::tanh(v); });
  }
  return trace.activations.back();
}

void hebbian_update(WeightState& net, const RuleSet& rules,
                    const ActivationTrace& trace) {
  check(rules.a.size() == net.layers.size(),
        "hebbian_update: rule/weight layer count mismatch");
  check(trace.activations.size() == net.layers.size() + 1,
        "hebbian_update: trace does not match network depth");

  const double mu = rules.learning_rate;
  for (size_t k = 0; k < net.layers.size(); ++k) {
    Eigen::MatrixXd& w = net.layers[k];
    const Eigen::VectorXd& pre = trace.activations[k];
    const Eigen::VectorXd& post = trace.activations[k + 1];
    check(w.cols() == pre.size() && w.rows() == post.size(),
          "hebbian_update: trace shape mismatch");
    check(rules.a[k].rows() == w.rows() && rules.a[k].cols() == w.cols(),
          "hebbian_update: rule shape mismatch");

    // w_rc += mu * (A_rc * pre_c * post_r + B_rc * pre_c + C_rc * post_r + D_rc)
    w.noalias() += mu * rules.a[k].cwiseProduct(post * pre.transpose());
    w += mu * (rules.b[k].array().rowwise() * pre.transpose().array()).matrix();
    w += mu * (rules.c[k].array().colwise() * post.array()).matrix();
    w += mu * rules.d[k];
  }
}

std::vector<double> flatten(const WeightState& net) {
  std::vector<double> out;
  out.reserve(net.weight_count());
  for (const auto& m : net.layers)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  return out;
}

std::vector<double> flatten(const RuleSet& rules) {
  std::vector<double> out;
  out.reserve(4 * rules.weight_count());
  for (size_t k = 0; k < rules.a.size(); ++k)
    for (Eigen::Index r = 0; r < rules.a[k].rows(); ++r)
      for (Eigen::Index c = 0; c < rules.a[k].cols(); ++c) {
        out.push_back(rules.a[k](r, c));
        out.push_back(rules.b[k](r, c));
        out.push_back(rules.c[k](r, c));
        out.push_back(rules.d[k](r, c));
      }
  return out;
}

WeightState unflatten_weights(const Architecture& arch,
                              std::span<const double> genotype) {
  check(arch.valid(), "unflatten_weights: invalid architecture");
  check(static_cast<int>(genotype.size()) == arch.weight_count(),
        "unflatten_weights: genotype length does not match architecture");
  WeightState net{zero_mats(arch)};
  size_t i = 0;
  for (auto& m : net.layers)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = genotype[i++];
  return net;
}

RuleSet unflatten_rules(const Architecture& arch,
                        std::span<const double> genotype,
                        double learning_rate) {
  check(arch.valid(), "unflatten_rules: invalid architecture");
  check(static_cast<int>(genotype.size()) == 4 * arch.weight_count(),
        "unflatten_rules: genotype length does not match architecture");
  RuleSet rules;
  rules.learning_rate = learning_rate;
  rules.a = zero_mats(arch);
  rules.b = zero_mats(arch);
  rules.c = zero_mats(arch);
  rules.d = zero_mats(arch);
  const auto clamp = [](double v) { return std::clamp(v, -kRuleBound, kRuleBound); };
  size_t i = 0;
  for (size_t k = 0; k < rules.a.size(); ++k)
    for (Eigen::Index r = 0; r < rules.a[k].rows(); ++r)
      for (Eigen::Index c = 0; c < rules.a[k].cols(); ++c) {
        rules.a[k](r, c) = clamp(genotype[i++]);
        rules.b[k](r, c) = clamp(genotype[i++]);
        rules.c[k](r, c) = clamp(genotype[i++]);
        rules.d[k](r, c) = clamp(genotype[i++]);
      }
  return rules;
}

}  // namespace hebbswarm
