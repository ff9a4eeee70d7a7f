#pragma once

// (mu/mu_w, lambda) CMA-ES with an ask/tell interface, maximizing the
// objective. No restarts, no bound handling; genotype decoding is the
// caller's business.

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "hebbswarm/rng.hpp"
#include "json.hpp"

namespace hebbswarm {

struct EvolutionState {
  int dim = 0;
  int lambda = 0;
  int mu = 0;

  // Strategy constants, fixed at init.
  Eigen::VectorXd weights;  // mu recombination weights, sum to 1
  double mu_eff = 0.0;
  double c_sigma = 0.0;
  double d_sigma = 0.0;
  double c_c = 0.0;
  double c_1 = 0.0;
  double c_mu = 0.0;
  double chi_n = 0.0;

  // Mutable search state.
  Eigen::VectorXd mean;
  double sigma = 1.0;
  Eigen::MatrixXd cov;
  Eigen::VectorXd p_sigma;
  Eigen::VectorXd p_c;
  long generation = 0;

  Eigen::VectorXd best_genotype;
  double best_fitness = 0.0;
  bool has_best = false;

  // Eigen decomposition cache for the current cov; not serialized.
  bool eig_valid = false;
  Eigen::MatrixXd eig_basis;
  Eigen::VectorXd eig_values;
};

using InitSampler = std::function<Eigen::VectorXd(int dim, Rng&)>;

// Returns a sampler drawing each component uniformly from [lo, hi].
InitSampler uniform_init_sampler(double lo, double hi);

// x_init defaults to U[-1,1]^dim when empty.
EvolutionState cma_init(int dim, int lambda, double sigma0,
                        const InitSampler& x_init, Rng& rng);
EvolutionState cma_init(int dim, Rng& rng);

// Samples lambda candidates from N(mean, sigma^2 C).
std::vector<Eigen::VectorXd> cma_ask(EvolutionState& state, Rng& rng);

// Ranks by fitness (higher is better, ties broken by index) and applies the
// standard mean, path, covariance and step-size updates.
void cma_tell(EvolutionState& state, const std::vector<Eigen::VectorXd>& genotypes,
              const std::vector<double>& fitnesses);

nlohmann::json evolution_state_to_json(const EvolutionState& state);
EvolutionState evolution_state_from_json(const nlohmann::json& j);

}  // namespace hebbswarm
