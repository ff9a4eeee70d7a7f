#include "hebbswarm/metrics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hebbswarm {

double fitness_trial(const TrialLog& log) {
  if (log.steps() == 0) throw std::invalid_argument("fitness_trial: empty log");
  const double total = log.light_series().sum();
  return total / (ScalarField::kMaxValue * static_cast<double>(log.steps()));
}

double fitness_individual(double f1, double f2, double f3) {
  double v[3] = {f1, f2, f3};
  std::sort(v, v + 3);
  return v[1];
}

namespace {

void check_weight_log(const std::vector<Eigen::MatrixXd>& weight_log) {
  if (weight_log.empty())
    throw std::invalid_argument("metrics: weight log is empty");
  const auto rows = weight_log.front().rows();
  const auto cols = weight_log.front().cols();
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("metrics: empty weight snapshot");
  for (const auto& m : weight_log)
    if (m.rows() != rows || m.cols() != cols)
      throw std::invalid_argument("metrics: inconsistent snapshot shapes");
}

}  // namespace

Eigen::VectorXd mean_autocorrelation(const std::vector<Eigen::MatrixXd>& weight_log) {
  check_weight_log(weight_log);
  const long T = static_cast<long>(weight_log.size());
  const int agents = static_cast<int>(weight_log.front().rows());
  const int weights = static_cast<int>(weight_log.front().cols());

  // Correlation by FFT: pad each series to at least 2T so the circular
  // convolution reproduces the plain overlapping sums.
  long L = 1;
  while (L < 2 * T) L <<= 1;

  double* buf = fftw_alloc_real(L);
  fftw_complex* spec = fftw_alloc_complex(L / 2 + 1);
  fftw_plan fwd = fftw_plan_dft_r2c_1d(static_cast<int>(L), buf, spec, FFTW_ESTIMATE);
  fftw_plan bwd = fftw_plan_dft_c2r_1d(static_cast<int>(L), spec, buf, FFTW_ESTIMATE);

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(T);
  for (int a = 0; a < agents; ++a)
    for (int w = 0; w < weights; ++w) {
      for (long t = 0; t < T; ++t) buf[t] = weight_log[t](a, w);
      std::fill(buf + T, buf + L, 0.0);
      fftw_execute(fwd);
      for (long k = 0; k <= L / 2; ++k) {
        spec[k][0] = spec[k][0] * spec[k][0] + spec[k][1] * spec[k][1];
        spec[k][1] = 0.0;
      }
      fftw_execute(bwd);
      for (long tau = 0; tau < T; ++tau) acc[tau] += buf[tau] / L;
    }

  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
  fftw_free(buf);
  fftw_free(spec);

  return acc / (static_cast<double>(agents) * weights);
}

Eigen::VectorXd mean_autocorrelation_normalized(
    const std::vector<Eigen::MatrixXd>& weight_log) {
  Eigen::VectorXd c = mean_autocorrelation(weight_log);
  if (c[0] != 0.0) c /= c[0];
  return c;
}

double mean_weight_std(const Eigen::MatrixXd& snapshot) {
  if (snapshot.rows() < 2)
    throw std::invalid_argument("mean_weight_std: need at least two agents");
  const Eigen::RowVectorXd means = snapshot.colwise().mean();
  const Eigen::MatrixXd centred = snapshot.rowwise() - means;
  const Eigen::RowVectorXd var =
      centred.array().square().colwise().sum() / snapshot.rows();
  return var.array().sqrt().mean();
}

Eigen::VectorXd mean_weight_std_series(
    const std::vector<Eigen::MatrixXd>& weight_log) {
  check_weight_log(weight_log);
  Eigen::VectorXd out(weight_log.size());
  for (size_t t = 0; t < weight_log.size(); ++t)
    out[t] = mean_weight_std(weight_log[t]);
  return out;
}

long Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0L);
}

Histogram weight_histogram(const Eigen::MatrixXd& snapshot, int bins, double lo,
                           double hi) {
  if (bins < 1) throw std::invalid_argument("weight_histogram: bins must be >= 1");
  if (!(lo < hi)) throw std::invalid_argument("weight_histogram: bad range");

  Histogram h;
  h.edges.resize(bins + 1);
  const double width = (hi - lo) / bins;
  for (int i = 0; i <= bins; ++i) h.edges[i] = lo + i * width;
  h.counts.assign(bins, 0);

  for (Eigen::Index r = 0; r < snapshot.rows(); ++r)
    for (Eigen::Index c = 0; c < snapshot.cols(); ++c) {
      const double v = snapshot(r, c);
      int bin = static_cast<int>(std::floor((v - lo) / width));
      bin = std::clamp(bin, 0, bins - 1);
      ++h.counts[bin];
    }
  return h;
}

}  // namespace hebbswarm
