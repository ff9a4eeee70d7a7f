// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails. argv[1] must point at the
// command-line binary (used by the parallel-determinism criterion).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hebbswarm/cmaes.hpp"
#include "hebbswarm/controller.hpp"
#include "hebbswarm/experiments.hpp"
#include "hebbswarm/io.hpp"
#include "hebbswarm/metrics.hpp"
#include "hebbswarm/sim.hpp"
#include "hebbswarm/trial.hpp"

using namespace hebbswarm;
namespace fs = std::filesystem;

namespace {

std::string g_cli_path;
fs::path g_work;

struct Criterion {
  int id;
  const char* name;
  bool (*run)(std::string& detail);
};

Eigen::VectorXd random_vec(int n, Rng& rng, double lo, double hi) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

// ---------------------------------------------------------------------------
// 1. Update-rule fidelity against an independently coded scalar oracle.

bool criterion_update_rule(std::string& detail) {
  Rng rng(1001);
  const std::vector<Architecture> archs = {
      Architecture::standard(), Architecture{{9, 3, 2}}, Architecture{{4, 7, 5, 3}},
      Architecture{{1, 1}}};
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Architecture& arch = archs[trial % archs.size()];

    WeightState net = zero_weights(arch);
    for (auto& m : net.layers)
      for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(-3.0, 3.0);
    const WeightState before = net;

    std::vector<double> genes(static_cast<std::size_t>(arch.weight_count()) * 4);
    for (auto& v : genes) v = rng.uniform(-7.0, 7.0);  // exercises the clamp
    const RuleSet rules = unflatten_rules(arch, genes);

    ActivationTrace trace;
    for (int l = 0; l < arch.num_layers(); ++l)
      trace.activations.push_back(random_vec(arch.layer_sizes[l], rng, -1.0, 1.0));

    hebbian_update(net, rules, trace);

    // Scalar-loop reference, written directly from the update definition.
    for (std::size_t k = 0; k < before.layers.size(); ++k) {
      const Eigen::VectorXd& pre = trace.activations[k];
      const Eigen::VectorXd& post = trace.activations[k + 1];
      for (int i = 0; i < before.layers[k].rows(); ++i)
        for (int j = 0; j < before.layers[k].cols(); ++j) {
          const double a = rules.a[k](i, j);
          const double b = rules.b[k](i, j);
          const double c = rules.c[k](i, j);
          const double d = rules.d[k](i, j);
          const double expect =
              before.layers[k](i, j) +
              0.1 * (a * pre(j) * post(i) + b * pre(j) + c * post(i) + d);
          worst = std::max(worst, std::abs(net.layers[k](i, j) - expect));
        }
    }
  }
  std::ostringstream os;
  os << "max deviation " << worst << " over 1000 random updates";
  detail = os.str();
  return worst <= 1e-12;
}

// ---------------------------------------------------------------------------
// 2. Zero-rule and homogeneity invariants.

bool criterion_invariants(std::string& detail) {
  const Architecture arch = Architecture::standard();

  // A full-length trial under all-zero rules ends with the exact start weights.
  TrialOptions opts;
  opts.condition = Condition::hebbian;
  opts.n_robots = 20;
  opts.steps = 12000;  // 600 s at 20 Hz
  const std::uint64_t seed = 2002;
  const TrialLog log = run_trial(Eigen::VectorXd::Zero(720), opts, seed);
  Rng ctrl_rng(derive_key(seed, {seedtag::controller}));
  auto fresh = make_controller(Condition::hebbian, Eigen::VectorXd::Zero(720), arch, 20,
                               ctrl_rng);
  const Eigen::MatrixXd start = fresh->weight_snapshot();
  if (log.final_weights.rows() != 20 ||
      !(log.final_weights.array() == start.array()).all()) {
    detail = "weights drifted under all-zero rules";
    return false;
  }

  // Two identically seeded plastic controllers fed identical inputs stay
  // bit-identical while they learn.
  Rng seed_rng(2003);
  const Eigen::VectorXd genes = random_vec(720, seed_rng, -1.0, 1.0);
  Rng ra(2004), rb(2004), rin(2005);
  auto ca = make_controller(Condition::hebbian, genes, arch, 4, ra);
  auto cb = make_controller(Condition::hebbian, genes, arch, 4, rb);
  for (int t = 0; t < 500; ++t) {
    const Eigen::VectorXd in = random_vec(9, rin, -1.0, 1.0);
    for (int i = 0; i < 4; ++i) {
      const Eigen::Vector2d oa = ca->act(i, in);
      const Eigen::Vector2d ob = cb->act(i, in);
      if (oa(0) != ob(0) || oa(1) != ob(1)) {
        detail = "identically seeded plastic nets diverged";
        return false;
      }
    }
    if (!(ca->weight_snapshot().array() == cb->weight_snapshot().array()).all()) {
      detail = "identically seeded plastic weights diverged";
      return false;
    }
  }

  // A homogeneous swarm has zero weight spread at every logged step.
  TrialOptions base_opts;
  base_opts.condition = Condition::baseline;
  base_opts.n_robots = 10;
  base_opts.steps = 2400;
  base_opts.log_weights = true;
  Rng brng(2006);
  const TrialLog blog = run_trial(random_vec(180, brng, -1.0, 1.0), base_opts, 2007);
  const Eigen::VectorXd spread = mean_weight_std_series(blog.weights);
  // Identical rows can still leave ~1e-17 of rounding residue in the column
  // means, so "zero" is pinned at 1e-12.
  const double worst = spread.cwiseAbs().maxCoeff();
  std::ostringstream os;
  os << "max homogeneous spread " << worst;
  detail = os.str();
  return worst <= 1e-12;
}

// ---------------------------------------------------------------------------
// 3. Fitness bounds and extremes.

bool criterion_fitness(std::string& detail) {
  TrialLog log;
  log.robot_light = Eigen::MatrixXd::Constant(12000, 20, 255.0);
  if (fitness_trial(log) != 1.0) {
    detail = "saturated light did not give exactly 1.0";
    return false;
  }
  log.robot_light = Eigen::MatrixXd::Zero(12000, 20);
  if (fitness_trial(log) != 0.0) {
    detail = "dark arena did not give exactly 0.0";
    return false;
  }
  Rng rng(3001);
  for (int k = 0; k < 10000; ++k) {
    const int steps = 1 + static_cast<int>(rng.uniform_int(40));
    const int robots = 1 + static_cast<int>(rng.uniform_int(8));
    Eigen::MatrixXd light(steps, robots);
    for (int t = 0; t < steps; ++t)
      for (int i = 0; i < robots; ++i) light(t, i) = rng.uniform(0.0, 255.0);
    log.robot_light = light;
    const double f = fitness_trial(log);
    if (!(f >= 0.0 && f <= 1.0)) {
      detail = "random log escaped [0, 1]";
      return false;
    }
  }
  detail = "extremes exact, 10000 random logs in bounds";
  return true;
}

// ---------------------------------------------------------------------------
// 4. Weight-metric oracles.

bool criterion_metrics(std::string& detail) {
  Rng rng(4001);
  double worst_c = 0.0, worst_s = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    const int T = 50, R = 5, W = 10;
    std::vector<Eigen::MatrixXd> log;
    for (int t = 0; t < T; ++t) {
      Eigen::MatrixXd m(R, W);
      for (int r = 0; r < R; ++r)
        for (int w = 0; w < W; ++w) m(r, w) = rng.uniform(-4.0, 4.0);
      log.push_back(m);
    }

    const Eigen::VectorXd fast = mean_autocorrelation(log);
    for (int tau = 0; tau < T; ++tau) {
      double acc = 0.0;
      for (int r = 0; r < R; ++r)
        for (int w = 0; w < W; ++w) {
          double s = 0.0;
          for (int t = 0; t + tau < T; ++t) s += log[t](r, w) * log[t + tau](r, w);
          acc += s;
        }
      worst_c = std::max(worst_c, std::abs(fast(tau) - acc / (R * W)));
    }

    const Eigen::VectorXd series = mean_weight_std_series(log);
    for (int t = 0; t < T; ++t) {
      double acc = 0.0;
      for (int w = 0; w < W; ++w) {
        double mean = 0.0;
        for (int r = 0; r < R; ++r) mean += log[t](r, w);
        mean /= R;
        double var = 0.0;
        for (int r = 0; r < R; ++r) {
          const double d = log[t](r, w) - mean;
          var += d * d;
        }
        acc += std::sqrt(var / R);
      }
      worst_s = std::max(worst_s, std::abs(series(t) - acc / W));
    }
  }
  std::ostringstream os;
  os << "autocorr dev " << worst_c << ", spread dev " << worst_s;
  detail = os.str();
  return worst_c <= 1e-10 && worst_s <= 1e-10;
}

// ---------------------------------------------------------------------------
// 5. Optimizer oracle on sphere and Rosenbrock.

bool criterion_cmaes(std::string& detail) {
  int sphere_ok = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    EvolutionState s = cma_init(10, 30, 0.5, uniform_init_sampler(-1.0, 1.0), rng);
    for (int g = 0; g < 300 && s.best_fitness <= -1e-6; ++g) {
      const auto xs = cma_ask(s, rng);
      std::vector<double> fs;
      for (const auto& x : xs) fs.push_back(-x.squaredNorm());
      cma_tell(s, xs, fs);
    }
    if (s.best_fitness > -1e-6) ++sphere_ok;
  }

  int rosen_ok = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(100 + seed);
    EvolutionState s = cma_init(2, 16, 0.3, uniform_init_sampler(-1.0, 1.0), rng);
    for (int g = 0; g < 1000 && s.best_fitness <= -1e-3; ++g) {
      const auto xs = cma_ask(s, rng);
      std::vector<double> fs;
      for (const auto& x : xs) {
        const double a = x(1) - x(0) * x(0);
        const double b = 1.0 - x(0);
        fs.push_back(-(100.0 * a * a + b * b));
      }
      cma_tell(s, xs, fs);
    }
    if (s.best_fitness > -1e-3) ++rosen_ok;
  }

  std::ostringstream os;
  os << "sphere " << sphere_ok << "/5, rosenbrock " << rosen_ok << "/5";
  detail = os.str();
  return sphere_ok == 5 && rosen_ok >= 4;
}

// ---------------------------------------------------------------------------
// 6. Desk-scale learning signal through the full pipeline.

bool criterion_learning_signal(std::string& detail) {
  std::vector<double> deltas;
  for (std::uint64_t seed = 11; seed <= 15; ++seed) {
    ExperimentConfig cfg;
    apply_profile(cfg, "small");
    cfg.condition = Condition::hebbian;
    cfg.field = FieldKind::circular;
    cfg.seed = seed;
    cfg.out = (g_work / ("signal_" + std::to_string(seed))).string();
    const RunReport report = evolve(cfg, cfg.out, seed);
    const double first_mean = report.generations.front().mean_fitness;
    const double final_best = report.generations.back().best_so_far;
    deltas.push_back(final_best - first_mean);
  }
  std::sort(deltas.begin(), deltas.end());
  const double median = deltas[2];
  std::ostringstream os;
  os << "median improvement " << median << " (per-seed:";
  for (double d : deltas) os << ' ' << d;
  os << ")";
  detail = os.str();
  return median > 0.05;
}

// ---------------------------------------------------------------------------
// 7. Light-keyed network selection frequencies.

bool criterion_policy_frequencies(std::string& detail) {
  const Architecture arch = Architecture::standard();
  Eigen::VectorXd both(360);
  both << Eigen::VectorXd::Constant(180, 0.5), Eigen::VectorXd::Constant(180, -0.5);
  const std::vector<double> lights = {255.0, 200.0, 150.0, 100.0};
  const std::vector<double> expect = {1.0, 0.75, 0.50, 0.25};
  std::ostringstream os;
  bool ok = true;
  for (std::size_t i = 0; i < lights.size(); ++i) {
    Rng rng(7000 + i);
    auto c = make_controller(Condition::baseline_a, both, arch, 1, rng);
    Eigen::VectorXd in = Eigen::VectorXd::Zero(9);
    in(0) = lights[i] / 127.5 - 1.0;
    for (int q = 0; q < 4; ++q) in(1 + 2 * q) = 1.0;
    int green = 0;
    const int n = 10000;
    for (int t = 0; t < n; ++t) {
      c->act(0, in);
      if (c->weight_snapshot()(0, 0) == 0.5) ++green;
    }
    const double rate = static_cast<double>(green) / n;
    os << (i ? ", " : "") << lights[i] << "->" << rate;
    if (std::abs(rate - expect[i]) > 0.02) ok = false;
  }
  detail = os.str();
  return ok;
}

// ---------------------------------------------------------------------------
// 8. Perturbation protocol integrity.

bool criterion_perturbation(std::string& detail) {
  ExperimentConfig cfg;
  cfg.condition = Condition::hebbian;
  cfg.swarm_size = 20;
  cfg.trial_seconds = 600.0;
  cfg.seed = 8001;
  cfg.out = (g_work / "perturb").string();
  Rng rng(8002);
  const Eigen::VectorXd genes = random_vec(720, rng, -1.0, 1.0);
  const PerturbReport report = perturb_experiment(genes, cfg, cfg.out);

  std::ostringstream os;
  os << "prefix " << report.identical_prefix_steps << " steps, snapshots at";
  for (double s : report.histogram_seconds) os << ' ' << s;
  detail = os.str();

  if (report.switch_step != 6000) return false;
  // Bit-identical strictly before the 300 s switch, divergent afterwards.
  if (report.identical_prefix_steps < 6000) return false;
  if (report.identical_prefix_steps >= 12000) return false;
  if (report.histogram_seconds !=
      std::vector<double>{0.0, 150.0, 300.0, 450.0, 600.0})
    return false;
  for (const double sec : {0.0, 150.0, 300.0, 450.0, 600.0}) {
    if (!fs::exists(fs::path(cfg.out) / ("hist_static_" + fmt(sec) + ".csv")))
      return false;
    if (!fs::exists(fs::path(cfg.out) / ("hist_dynamic_" + fmt(sec) + ".csv")))
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 9. Simulator physical invariants.

bool criterion_simulator(std::string& detail) {
  // Displacement bound over 1e5 random steps of a crowded world.
  Rng rng(9001);
  std::vector<RobotPose> poses;
  for (int i = 0; i < 10; ++i)
    poses.push_back({14.0 + rng.uniform(0.0, 2.0), 14.0 + rng.uniform(0.0, 2.0),
                     rng.uniform(-3.14, 3.14)});
  World w(ScalarField(FieldKind::circular, {}), poses, WorldParams{},
          NoiseModel::none(), Rng(9002));
  const double cap = 0.14 * 0.05 + 1e-12;
  double worst = 0.0;
  for (int t = 0; t < 100000; ++t) {
    const std::vector<RobotPose> before = w.robots();
    std::vector<WheelCommand> cmds(10);
    for (auto& c : cmds) c = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    w.step(cmds);
    for (int i = 0; i < 10; ++i)
      worst = std::max(worst, std::hypot(w.robots()[i].x - before[i].x,
                                         w.robots()[i].y - before[i].y));
    if (worst > cap) break;
  }
  if (worst > cap) {
    detail = "displacement cap violated";
    return false;
  }

  // Sensor locality: a robot beyond range cannot influence a reading.
  World wa(ScalarField(FieldKind::circular, {}),
           {{10.0, 10.0, 0.4}, {10.9, 10.3, 1.0}, {13.5, 10.0, 0.0}}, WorldParams{},
           NoiseModel::none(), Rng(9003));
  World wb(ScalarField(FieldKind::circular, {}),
           {{10.0, 10.0, 0.4}, {10.9, 10.3, 1.0}, {13.5, 13.5, 2.2}}, WorldParams{},
           NoiseModel::none(), Rng(9003));
  const SensorReading sa = wa.sense(0);
  const SensorReading sb = wb.sense(0);
  bool local = sa.light == sb.light;
  for (int q = 0; q < 4; ++q)
    local = local && sa.quadrants[q].distance == sb.quadrants[q].distance &&
            sa.quadrants[q].heading == sb.quadrants[q].heading;
  if (!local) {
    detail = "sensor reading depends on an out-of-range robot";
    return false;
  }

  // Field values stay inside [0, 255] for every kind.
  for (const FieldKind kind : {FieldKind::circular, FieldKind::linear,
                               FieldKind::bimodal, FieldKind::rosenbrock,
                               FieldKind::shifted_circular}) {
    ScalarField f(kind, {});
    for (int i = 0; i < 100000; ++i) {
      const double v = f.sample(rng.uniform(0.0, 30.0), rng.uniform(0.0, 30.0),
                                rng.uniform(0.0, 900.0));
      if (!(v >= 0.0 && v <= 255.0)) {
        detail = "field value out of range";
        return false;
      }
    }
  }

  std::ostringstream os;
  os << "max displacement " << worst << " (cap " << cap << ")";
  detail = os.str();
  return true;
}

// ---------------------------------------------------------------------------
// 10. Parallel determinism through the command-line interface.

bool criterion_parallel_determinism(std::string& detail) {
  if (g_cli_path.empty()) {
    detail = "no CLI binary path given";
    return false;
  }
  const fs::path out1 = g_work / "par1";
  const fs::path out8 = g_work / "par8";
  auto run = [&](int threads, const fs::path& out) {
    std::ostringstream cmd;
    cmd << g_cli_path << " evolve --profile small --seed 20 --parallel " << threads
        << " --out " << out << " > /dev/null 2>&1";
    return std::system(cmd.str().c_str());
  };
  if (run(1, out1) != 0 || run(8, out8) != 0) {
    detail = "CLI evolve run failed";
    return false;
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)), {});
  };
  const std::string a = slurp(out1 / "learning_curve.csv");
  const std::string b = slurp(out8 / "learning_curve.csv");
  if (a.empty() || a != b) {
    detail = "learning curves differ between --parallel 1 and --parallel 8";
    return false;
  }
  std::ostringstream os;
  os << "learning_curve.csv byte-identical (" << a.size() << " bytes)";
  detail = os.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];
  g_work = fs::temp_directory_path() / "hebbswarm_acceptance";
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  const std::vector<Criterion> criteria = {
      {1, "update rule fidelity", criterion_update_rule},
      {2, "zero-rule and homogeneity invariants", criterion_invariants},
      {3, "fitness bounds and extremes", criterion_fitness},
      {4, "weight metric oracles", criterion_metrics},
      {5, "optimizer benchmark convergence", criterion_cmaes},
      {6, "desk-scale learning signal", criterion_learning_signal},
      {7, "light-keyed policy frequencies", criterion_policy_frequencies},
      {8, "perturbation protocol integrity", criterion_perturbation},
      {9, "simulator physical invariants", criterion_simulator},
      {10, "parallel determinism", criterion_parallel_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name
              << "): " << detail << " [" << secs << " s]" << std::endl;
    if (!ok) ++failures;
  }

  fs::remove_all(g_work);
  if (failures > 0) std::cout << failures << " criteria failed" << std::endl;
  return failures == 0 ? 0 : 1;
}
