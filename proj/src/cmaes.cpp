#include "hebbswarm/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hebbswarm {

namespace {

void refresh_eigen(EvolutionState& s) {
  if (s.eig_valid) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s.cov);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("cma: eigen decomposition failed");
  s.eig_basis = solver.eigenvectors();
  s.eig_values = solver.eigenvalues();
  // Repair: keep the spectrum positive by clamping against the largest
  // eigenvalue, then write the repaired matrix back.
  double top = s.eig_values.maxCoeff();
  if (top <= 0.0) top = 1.0;
  const double floor = 1e-12 * top;
  bool repaired = false;
  for (int i = 0; i < s.eig_values.size(); ++i)
    if (s.eig_values[i] < floor) {
      s.eig_values[i] = floor;
      repaired = true;
    }
  if (repaired)
    s.cov = s.eig_basis * s.eig_values.asDiagonal() * s.eig_basis.transpose();
  s.eig_valid = true;
}

}  // namespace

InitSampler uniform_init_sampler(double lo, double hi) {
  return [lo, hi](int dim, Rng& rng) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = rng.uniform(lo, hi);
    return x;
  };
}

EvolutionState cma_init(int dim, int lambda, double sigma0,
                        const InitSampler& x_init, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("cma_init: dim must be >= 1");
  if (lambda < 2) throw std::invalid_argument("cma_init: lambda must be >= 2");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("cma_init: sigma0 must be > 0");

  EvolutionState s;
  s.dim = dim;
  s.lambda = lambda;
  s.mu = lambda / 2;

  s.weights.resize(s.mu);
  for (int i = 0; i < s.mu; ++i)
    s.weights[i] = std::log((lambda + 1) / 2.0) - std::log(i + 1.0);
  s.weights /= s.weights.sum();
  s.mu_eff = 1.0 / s.weights.squaredNorm();

  const double n = dim;
  s.c_sigma = (s.mu_eff + 2.0) / (n + s.mu_eff + 5.0);
  s.d_sigma = 1.0 +
              2.0 * std::max(0.0, std::sqrt((s.mu_eff - 1.0) / (n + 1.0)) - 1.0) +
              s.c_sigma;
  s.c_c = (4.0 + s.mu_eff / n) / (n + 4.0 + 2.0 * s.mu_eff / n);
  s.c_1 = 2.0 / ((n + 1.3) * (n + 1.3) + s.mu_eff);
  s.c_mu = std::min(1.0 - s.c_1, 2.0 * (s.mu_eff - 2.0 + 1.0 / s.mu_eff) /
                                     ((n + 2.0) * (n + 2.0) + s.mu_eff));
  s.chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

  s.mean = x_init ? x_init(dim, rng) : uniform_init_sampler(-1.0, 1.0)(dim, rng);
  if (s.mean.size() != dim)
    throw std::invalid_argument("cma_init: x_init returned wrong dimension");
  s.sigma = sigma0;
  s.cov = Eigen::MatrixXd::Identity(dim, dim);
  s.p_sigma = Eigen::VectorXd::Zero(dim);
  s.p_c = Eigen::VectorXd::Zero(dim);
  s.best_fitness = -std::numeric_limits<double>::infinity();
  return s;
}

EvolutionState cma_init(int dim, Rng& rng) {
  return cma_init(dim, 30, 1.0, InitSampler{}, rng);
}

std::vector<Eigen::VectorXd> cma_ask(EvolutionState& state, Rng& rng) {
  refresh_eigen(state);
  const Eigen::VectorXd scale = state.eig_values.cwiseSqrt();
  std::vector<Eigen::VectorXd> out;
  out.reserve(state.lambda);
  Eigen::VectorXd z(state.dim);
  for (int k = 0; k < state.lambda; ++k) {
    for (int i = 0; i < state.dim; ++i) z[i] = rng.normal();
    out.push_back(state.mean +
                  state.sigma * (state.eig_basis * scale.cwiseProduct(z)));
  }
  return out;
}

void cma_tell(EvolutionState& state, const std::vector<Eigen::VectorXd>& genotypes,
              const std::vector<double>& fitnesses) {
  if (static_cast<int>(genotypes.size()) != state.lambda ||
      static_cast<int>(fitnesses.size()) != state.lambda)
    throw std::invalid_argument("cma_tell: need exactly lambda genotypes and fitnesses");
  for (double f : fitnesses)
    if (!std::isfinite(f))
      throw std::invalid_argument("cma_tell: non-finite fitness");
  for (const auto& g : genotypes)
    if (g.size() != state.dim)
      throw std::invalid_argument("cma_tell: genotype dimension mismatch");

  refresh_eigen(state);

  std::vector<int> order(state.lambda);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (fitnesses[a] != fitnesses[b]) return fitnesses[a] > fitnesses[b];
    return a < b;
  });

  if (!state.has_best || fitnesses[order[0]] > state.best_fitness) {
    state.best_fitness = fitnesses[order[0]];
    state.best_genotype = genotypes[order[0]];
    state.has_best = true;
  }

  const Eigen::VectorXd old_mean = state.mean;
  std::vector<Eigen::VectorXd> y(state.mu);
  Eigen::VectorXd y_w = Eigen::VectorXd::Zero(state.dim);
  for (int i = 0; i < state.mu; ++i) {
    y[i] = (genotypes[order[i]] - old_mean) / state.sigma;
    y_w += state.weights[i] * y[i];
  }
  state.mean = old_mean + state.sigma * y_w;

  const Eigen::VectorXd inv_scale = state.eig_values.cwiseSqrt().cwiseInverse();
  const Eigen::VectorXd c_inv_sqrt_yw =
      state.eig_basis *
      inv_scale.cwiseProduct(state.eig_basis.transpose() * y_w);

  state.p_sigma = (1.0 - state.c_sigma) * state.p_sigma +
                  std::sqrt(state.c_sigma * (2.0 - state.c_sigma) * state.mu_eff) *
                      c_inv_sqrt_yw;

  const double g1 = static_cast<double>(state.generation + 1);
  const double ps_norm = state.p_sigma.norm();
  const bool h_sigma =
      ps_norm / std::sqrt(1.0 - std::pow(1.0 - state.c_sigma, 2.0 * g1)) /
          state.chi_n <
      1.4 + 2.0 / (state.dim + 1.0);

  state.p_c = (1.0 - state.c_c) * state.p_c;
  if (h_sigma)
    state.p_c += std::sqrt(state.c_c * (2.0 - state.c_c) * state.mu_eff) * y_w;

  const double delta_h = (h_sigma ? 0.0 : 1.0) * state.c_c * (2.0 - state.c_c);
  Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(state.dim, state.dim);
  for (int i = 0; i < state.mu; ++i)
    rank_mu.noalias() += state.weights[i] * (y[i] * y[i].transpose());

  state.cov = (1.0 - state.c_1 - state.c_mu) * state.cov +
              state.c_1 * (state.p_c * state.p_c.transpose() + delta_h * state.cov) +
              state.c_mu * rank_mu;
  state.cov = 0.5 * (state.cov + state.cov.transpose()).eval();

  state.sigma *= std::exp((state.c_sigma / state.d_sigma) *
                          (ps_norm / state.chi_n - 1.0));

  ++state.generation;
  state.eig_valid = false;
}

namespace {

nlohmann::json vec_to_json(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vec_from_json(const nlohmann::json& a) {
  Eigen::VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
  return v;
}

}  // namespace

nlohmann::json evolution_state_to_json(const EvolutionState& s) {
  nlohmann::json j;
  j["dim"] = s.dim;
  j["lambda"] = s.lambda;
  j["mean"] = vec_to_json(s.mean);
  j["sigma"] = s.sigma;
  nlohmann::json cov = nlohmann::json::array();
  for (int r = 0; r < s.dim; ++r)
    for (int c = 0; c < s.dim; ++c) cov.push_back(s.cov(r, c));
  j["cov"] = std::move(cov);
  j["p_sigma"] = vec_to_json(s.p_sigma);
  j["p_c"] = vec_to_json(s.p_c);
  j["generation"] = s.generation;
  j["has_best"] = s.has_best;
  if (s.has_best) {
    j["best_fitness"] = s.best_fitness;
    j["best_genotype"] = vec_to_json(s.best_genotype);
  }
  return j;
}

EvolutionState evolution_state_from_json(const nlohmann::json& j) {
  const int dim = j.at("dim").get<int>();
  const int lambda = j.at("lambda").get<int>();
  // Rebuild the strategy constants, then overwrite the search state.
  Rng scratch(0);
  EvolutionState s = cma_init(dim, lambda, 1.0, InitSampler{}, scratch);
  s.mean = vec_from_json(j.at("mean"));
  s.sigma = j.at("sigma").get<double>();
  const auto& cov = j.at("cov");
  if (static_cast<int>(cov.size()) != dim * dim)
    throw std::invalid_argument("evolution_state_from_json: covariance size mismatch");
  s.cov.resize(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) s.cov(r, c) = cov[r * dim + c].get<double>();
  s.p_sigma = vec_from_json(j.at("p_sigma"));
  s.p_c = vec_from_json(j.at("p_c"));
  s.generation = j.at("generation").get<long>();
  s.has_best = j.at("has_best").get<bool>();
  if (s.has_best) {
    s.best_fitness = j.at("best_fitness").get<double>();
    s.best_genotype = vec_from_json(j.at("best_genotype"));
  }
  s.eig_valid = false;
  if (s.mean.size() != dim || s.p_sigma.size() != dim || s.p_c.size() != dim)
    throw std::invalid_argument("evolution_state_from_json: vector size mismatch");
  return s;
}

}  // namespace hebbswarm
