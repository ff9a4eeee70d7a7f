#include "hebbswarm/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "hebbswarm/io.hpp"
#include "hebbswarm/parallel.hpp"
#include "hebbswarm/plot.hpp"

namespace fs = std::filesystem;

namespace hebbswarm {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

// Sample standard deviation, as reported alongside means.
double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / (v.size() - 1));
}

void write_learning_curve(const fs::path& path,
                          const std::vector<GenerationStats>& history) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(history.size());
  for (const auto& g : history)
    rows.push_back({fmt(g.generation), fmt(g.mean_fitness), fmt(g.max_fitness),
                    fmt(g.best_so_far)});
  write_csv(path, {"generation", "mean_fitness", "max_fitness", "best_so_far"},
            rows);
}

void write_trajectory_csv(const fs::path& path, const TrialLog& log, int stride) {
  std::vector<std::vector<std::string>> rows;
  for (long t = 0; t < log.steps(); t += stride)
    for (int i = 0; i < log.robots(); ++i) {
      const RobotPose& p = log.poses[t][i];
      rows.push_back({fmt(t), fmt(i), fmt(p.x), fmt(p.y), fmt(p.heading),
                      fmt(log.robot_light(t, i))});
    }
  write_csv(path, {"t", "robot_id", "x", "y", "heading", "light_raw"}, rows);
}

void write_light_csv(const fs::path& path, const TrialLog& log) {
  const Eigen::VectorXd l = log.light_series();
  std::vector<std::vector<std::string>> rows;
  rows.reserve(l.size());
  for (Eigen::Index t = 0; t < l.size(); ++t)
    rows.push_back({fmt(static_cast<long>(t)), fmt(l[t])});
  write_csv(path, {"t", "l"}, rows);
}

void write_checkpoint(const fs::path& path, std::uint64_t seed,
                      const ExperimentConfig& config, const EvolutionState& state,
                      const Rng& rng, const std::vector<GenerationStats>& history) {
  nlohmann::json j;
  j["seed"] = u64_to_string(seed);
  j["condition"] = to_string(config.condition);
  j["cma"] = evolution_state_to_json(state);
  nlohmann::json rs = nlohmann::json::array();
  for (std::uint64_t word : rng.state()) rs.push_back(u64_to_string(word));
  j["rng_state"] = std::move(rs);
  nlohmann::json h = nlohmann::json::array();
  for (const auto& g : history)
    h.push_back({g.generation, g.mean_fitness, g.max_fitness, g.best_so_far});
  j["history"] = std::move(h);

  const fs::path tmp = path.string() + ".tmp";
  write_json(tmp, j);
  fs::rename(tmp, path);
}

bool load_checkpoint(const fs::path& path, std::uint64_t seed,
                     const ExperimentConfig& config, int dim,
                     EvolutionState& state, Rng& rng,
                     std::vector<GenerationStats>& history) {
  if (!fs::exists(path)) return false;
  const nlohmann::json j = read_json(path);
  if (u64_from_string(j.at("seed").get<std::string>()) != seed ||
      j.at("condition").get<std::string>() != to_string(config.condition))
    throw ConfigError("checkpoint.json belongs to a different seed or condition");
  state = evolution_state_from_json(j.at("cma"));
  if (state.dim != dim || state.lambda != config.lambda)
    throw ConfigError("checkpoint.json does not match the genotype dimension or lambda");
  const auto& rs = j.at("rng_state");
  std::array<std::uint64_t, 4> words;
  for (int i = 0; i < 4; ++i) words[i] = u64_from_string(rs.at(i).get<std::string>());
  rng.set_state(words);
  history.clear();
  for (const auto& row : j.at("history")) {
    GenerationStats g;
    g.generation = row.at(0).get<long>();
    g.mean_fitness = row.at(1).get<double>();
    g.max_fitness = row.at(2).get<double>();
    g.best_so_far = row.at(3).get<double>();
    history.push_back(g);
  }
  return true;
}

nlohmann::json report_to_json(const RunReport& report) {
  nlohmann::json j;
  j["seed"] = u64_to_string(report.seed);
  j["condition"] = to_string(report.condition);
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : report.generations)
    gens.push_back({{"generation", g.generation},
                    {"mean_fitness", g.mean_fitness},
                    {"max_fitness", g.max_fitness},
                    {"best_so_far", g.best_so_far}});
  j["generations"] = std::move(gens);
  j["best_fitness"] = report.best_fitness;
  nlohmann::json geno = nlohmann::json::array();
  for (Eigen::Index i = 0; i < report.best_genotype.size(); ++i)
    geno.push_back(report.best_genotype[i]);
  j["best_genotype"] = std::move(geno);
  j["wall_clock_seconds"] = report.wall_clock_seconds;
  return j;
}

void check_genotype(const Eigen::VectorXd& genotype, const ExperimentConfig& config) {
  if (genotype.size() != genotype_dim(config.condition, config.architecture))
    throw ConfigError("genotype length " + std::to_string(genotype.size()) +
                      " does not match condition " + to_string(config.condition) +
                      " (expected " +
                      std::to_string(genotype_dim(config.condition, config.architecture)) +
                      ")");
}

}  // namespace

RunReport evolve(const ExperimentConfig& config, const fs::path& out_dir,
                 std::uint64_t seed) {
  config.validate();
  fs::create_directories(out_dir);

  const int dim = genotype_dim(config.condition, config.architecture);
  Rng cma_rng(derive_key(seed, {seedtag::cma}));
  EvolutionState state;
  std::vector<GenerationStats> history;

  const fs::path ckpt = out_dir / "checkpoint.json";
  if (!load_checkpoint(ckpt, seed, config, dim, state, cma_rng, history))
    state = cma_init(dim, config.lambda, config.sigma0,
                     uniform_init_sampler(config.init_lo, config.init_hi), cma_rng);

  const TrialOptions topts = trial_options(config);
  const int repeats = config.repeats_per_individual;
  const auto t0 = std::chrono::steady_clock::now();

  for (long g = state.generation; g < config.generations; ++g) {
    const auto genotypes = cma_ask(state, cma_rng);

    std::vector<double> per_trial(static_cast<size_t>(config.lambda) * repeats);
    parallel_for(config.parallel, static_cast<long>(per_trial.size()), [&](long idx) {
      const long i = idx / repeats;
      const long k = idx % repeats;
      const std::uint64_t trial_seed =
          derive_key(seed, {seedtag::trial, static_cast<std::uint64_t>(g),
                            static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(k)});
      per_trial[idx] = fitness_trial(run_trial(genotypes[i], topts, trial_seed));
    });

    std::vector<double> fitness(config.lambda);
    for (int i = 0; i < config.lambda; ++i) {
      std::vector<double> reps(per_trial.begin() + static_cast<long>(i) * repeats,
                               per_trial.begin() + static_cast<long>(i + 1) * repeats);
      fitness[i] = median(std::move(reps));
    }

    cma_tell(state, genotypes, fitness);

    GenerationStats stats;
    stats.generation = g;
    stats.mean_fitness = mean_of(fitness);
    stats.max_fitness = *std::max_element(fitness.begin(), fitness.end());
    stats.best_so_far = state.best_fitness;
    history.push_back(stats);

    write_checkpoint(ckpt, seed, config, state, cma_rng, history);
    write_learning_curve(out_dir / "learning_curve.csv", history);
  }

  RunReport report;
  report.generations = history;
  report.best_genotype = state.has_best ? state.best_genotype : state.mean;
  report.best_fitness = state.has_best ? state.best_fitness : 0.0;
  report.seed = seed;
  report.condition = config.condition;
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_learning_curve(out_dir / "learning_curve.csv", history);
  write_json(out_dir / "run_report.json", report_to_json(report));

  GenotypeFile best;
  best.condition = to_string(config.condition);
  best.architecture = config.architecture.layer_sizes;
  best.genotype = report.best_genotype;
  best.fitness = report.best_fitness;
  best.seed = seed;
  write_genotype(out_dir / "best_genotype.json", best);

  plot_csv(out_dir / "learning_curve.csv", out_dir / "plots" / "learning_curve.svg");
  return report;
}

std::vector<RunReport> evolve_runs(const ExperimentConfig& config) {
  config.validate();
  const fs::path base = config.out;
  std::vector<RunReport> reports;

  if (config.runs == 1) {
    reports.push_back(evolve(config, base, config.seed));
  } else {
    for (int r = 0; r < config.runs; ++r)
      reports.push_back(
          evolve(config, base / ("run_" + std::to_string(r)),
                 derive_key(config.seed, {seedtag::run, static_cast<std::uint64_t>(r)})));
    std::vector<double> best;
    for (const auto& rep : reports) best.push_back(rep.best_fitness);
    nlohmann::json j;
    j["runs"] = config.runs;
    j["best_fitnesses"] = best;
    j["mean_best"] = mean_of(best);
    j["std_best"] = std_of(best);
    write_json(base / "evolve_summary.json", j);
  }
  return reports;
}

RetestSummary retest(const Eigen::VectorXd& genotype, const ExperimentConfig& config,
                     const fs::path& out_dir) {
  config.validate();
  check_genotype(genotype, config);
  fs::create_directories(out_dir);

  const TrialOptions topts = trial_options(config);
  const int n = config.validation_repeats;
  RetestSummary summary;
  summary.fitnesses.resize(n);

  parallel_for(config.parallel, n, [&](long k) {
    const std::uint64_t s =
        derive_key(config.seed, {seedtag::retest, static_cast<std::uint64_t>(k)});
    const TrialLog log = run_trial(genotype, topts, s);
    summary.fitnesses[k] = fitness_trial(log);
    write_trajectory_csv(out_dir / ("trial_" + std::to_string(k) + ".csv"), log,
                         config.trajectory_stride);
    write_light_csv(out_dir / ("metrics_" + std::to_string(k) + ".csv"), log);
  });

  summary.mean = mean_of(summary.fitnesses);
  summary.std_dev = std_of(summary.fitnesses);

  std::vector<std::vector<std::string>> rows;
  for (int k = 0; k < n; ++k)
    rows.push_back({fmt(k), fmt(summary.fitnesses[k])});
  write_csv(out_dir / "fitness.csv", {"trial", "fitness"}, rows);

  nlohmann::json j;
  j["n"] = n;
  j["mean"] = summary.mean;
  j["std"] = summary.std_dev;
  j["fitnesses"] = summary.fitnesses;
  j["condition"] = to_string(config.condition);
  j["swarm_size"] = config.swarm_size;
  j["field"] = to_string(config.field);
  write_json(out_dir / "retest_summary.json", j);
  return summary;
}

namespace {

// Column index of the flattened genotype order back to (layer, row, col).
void weight_index_to_lrc(const Architecture& arch, int index, int& layer,
                         int& row, int& col) {
  for (int k = 0; k + 1 < arch.num_layers(); ++k) {
    const int rows = arch.layer_sizes[k + 1];
    const int cols = arch.layer_sizes[k];
    if (index < rows * cols) {
      layer = k;
      row = index / cols;
      col = index % cols;
      return;
    }
    index -= rows * cols;
  }
  throw std::out_of_range("weight index outside architecture");
}

void process_perturb_run(const fs::path& out_dir, const std::string& name,
                         const TrialLog& log, const ExperimentConfig& config,
                         std::vector<double>& histogram_seconds) {
  write_trajectory_csv(out_dir / ("trial_" + name + ".csv"), log,
                       config.trajectory_stride);
  write_light_csv(out_dir / ("light_" + name + ".csv"), log);

  const Eigen::VectorXd c = mean_autocorrelation(log.weights);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(c.size());
  for (Eigen::Index tau = 0; tau < c.size(); ++tau)
    rows.push_back({fmt(static_cast<long>(tau)), fmt(c[tau]),
                    fmt(c[0] != 0.0 ? c[tau] / c[0] : c[tau])});
  write_csv(out_dir / ("autocorr_" + name + ".csv"), {"tau", "c", "c_norm"}, rows);

  const Eigen::VectorXd s = mean_weight_std_series(log.weights);
  rows.clear();
  for (Eigen::Index t = 0; t < s.size(); ++t)
    rows.push_back({fmt(static_cast<long>(t)), fmt(s[t])});
  write_csv(out_dir / ("meanstd_" + name + ".csv"), {"t", "s"}, rows);

  // Snapshot histograms on the fixed interval, final state included.
  const bool record_seconds = histogram_seconds.empty();
  std::vector<std::vector<std::string>> weight_rows;
  const Architecture arch = config.architecture;
  for (int k = 0;; ++k) {
    const double sec = k * config.histogram_interval_seconds;
    const long step = std::lround(sec / config.world.dt);
    if (step > log.steps()) break;
    const Eigen::MatrixXd& snap =
        step == log.steps() ? log.final_weights : log.weights[step];
    if (snap.size() == 0) break;
    const Histogram h = weight_histogram(snap, config.histogram_bins,
                                         config.histogram_lo, config.histogram_hi);
    rows.clear();
    for (size_t b = 0; b < h.counts.size(); ++b)
      rows.push_back({fmt(h.edges[b]), fmt(h.edges[b + 1]), fmt(h.counts[b])});
    write_csv(out_dir / ("hist_" + name + "_" + fmt(sec) + ".csv"),
              {"bin_left", "bin_right", "count"}, rows);
    if (record_seconds) histogram_seconds.push_back(sec);

    for (int r = 0; r < snap.rows(); ++r)
      for (int w = 0; w < snap.cols(); ++w) {
        int layer, row, col;
        weight_index_to_lrc(arch, w, layer, row, col);
        weight_rows.push_back({fmt(sec), fmt(r), fmt(layer), fmt(row), fmt(col),
                               fmt(snap(r, w))});
      }
  }
  write_csv(out_dir / ("weights_" + name + ".csv"),
            {"t_seconds", "robot_id", "layer", "row", "col", "value"}, weight_rows);
}

}  // namespace

PerturbReport perturb_experiment(const Eigen::VectorXd& genotype,
                                 const ExperimentConfig& config,
                                 const fs::path& out_dir) {
  config.validate();
  if (config.condition != Condition::hebbian &&
      config.condition != Condition::hebbian_single)
    throw ConfigError("perturb needs a plastic condition (hebbian or hebbian_single)");
  check_genotype(genotype, config);
  fs::create_directories(out_dir);

  TrialOptions topts = trial_options(config);
  topts.log_weights = true;
  const std::uint64_t pair_seed = derive_key(config.seed, {seedtag::perturb});

  PerturbReport report;
  report.switch_step =
      std::lround(config.field_params.switch_seconds / config.world.dt);

  // The runs are processed one after the other: a dense weight log for a full
  // deployment is large, and only the light/pose series are needed for the
  // prefix comparison.
  topts.field_kind = FieldKind::circular;
  TrialLog log = run_trial(genotype, topts, pair_seed);
  report.fitness_static = fitness_trial(log);
  process_perturb_run(out_dir, "static", log, config, report.histogram_seconds);
  const Eigen::MatrixXd static_light = std::move(log.robot_light);
  const auto static_poses = std::move(log.poses);
  log = TrialLog{};

  topts.field_kind = FieldKind::shifted_circular;
  log = run_trial(genotype, topts, pair_seed);
  report.fitness_dynamic = fitness_trial(log);
  process_perturb_run(out_dir, "dynamic", log, config, report.histogram_seconds);

  long prefix = 0;
  for (long t = 0; t < log.steps(); ++t) {
    bool same = true;
    for (int i = 0; i < log.robots() && same; ++i) {
      const RobotPose& a = static_poses[t][i];
      const RobotPose& b = log.poses[t][i];
      same = a.x == b.x && a.y == b.y && a.heading == b.heading &&
             static_light(t, i) == log.robot_light(t, i);
    }
    if (!same) break;
    ++prefix;
  }
  report.identical_prefix_steps = prefix;

  nlohmann::json j;
  j["fitness_static"] = report.fitness_static;
  j["fitness_dynamic"] = report.fitness_dynamic;
  j["switch_step"] = report.switch_step;
  j["identical_prefix_steps"] = report.identical_prefix_steps;
  j["histogram_seconds"] = report.histogram_seconds;
  j["seed"] = u64_to_string(pair_seed);
  write_json(out_dir / "perturb_report.json", j);

  const ScalarField fstatic(FieldKind::circular, config.field_params);
  const ScalarField fdynamic(FieldKind::shifted_circular, config.field_params);
  write_field_raster(fstatic, out_dir / "field_static.csv", 64, 0.0);
  write_field_raster(fdynamic, out_dir / "field_dynamic.csv", 64,
                     config.trial_seconds);

  const fs::path plots = out_dir / "plots";
  for (const char* name :
       {"light_static", "light_dynamic", "autocorr_static", "autocorr_dynamic",
        "meanstd_static", "meanstd_dynamic", "trial_static", "trial_dynamic"})
    plot_csv(out_dir / (std::string(name) + ".csv"),
             plots / (std::string(name) + ".svg"));
  for (double sec : report.histogram_seconds)
    for (const char* prefix_name : {"hist_static_", "hist_dynamic_"})
      plot_csv(out_dir / (prefix_name + fmt(sec) + ".csv"),
               plots / (prefix_name + fmt(sec) + ".svg"));

  return report;
}

void scale_experiment(const Eigen::VectorXd& genotype,
                      const ExperimentConfig& config, const fs::path& out_dir) {
  config.validate();
  check_genotype(genotype, config);
  nlohmann::json results;
  for (int size : config.scale_sizes) {
    ExperimentConfig c = config;
    c.swarm_size = size;
    const RetestSummary r =
        retest(genotype, c, out_dir / ("scale_" + std::to_string(size)));
    results[std::to_string(size)] = {
        {"n", c.validation_repeats}, {"mean", r.mean}, {"std", r.std_dev}};
  }
  nlohmann::json j;
  j["swarm_sizes"] = config.scale_sizes;
  j["results"] = std::move(results);
  write_json(out_dir / "scale_summary.json", j);
}

void flex_experiment(const Eigen::VectorXd& genotype,
                     const ExperimentConfig& config, const fs::path& out_dir) {
  config.validate();
  check_genotype(genotype, config);
  nlohmann::json results;
  for (FieldKind kind : config.flex_fields) {
    ExperimentConfig c = config;
    c.field = kind;
    const RetestSummary r =
        retest(genotype, c, out_dir / ("flex_" + to_string(kind)));
    results[to_string(kind)] = {
        {"n", c.validation_repeats}, {"mean", r.mean}, {"std", r.std_dev}};
  }
  nlohmann::json j;
  nlohmann::json kinds = nlohmann::json::array();
  for (FieldKind kind : config.flex_fields) kinds.push_back(to_string(kind));
  j["fields"] = std::move(kinds);
  j["results"] = std::move(results);
  write_json(out_dir / "flex_summary.json", j);
}

std::vector<GridCell> arch_grid(const ExperimentConfig& config,
                                const fs::path& out_dir) {
  if (config.condition != Condition::baseline)
    throw ConfigError("arch-grid evolves the baseline condition");
  config.validate();

  std::vector<GridCell> cells;
  for (int depth : config.grid_depths)
    for (int width : config.grid_widths) {
      GridCell cell;
      cell.depth = depth;
      cell.width = width;
      const bool skip =
          std::find(config.grid_skip.begin(), config.grid_skip.end(),
                    std::make_pair(depth, width)) != config.grid_skip.end();
      std::vector<int> layers{kSensorInputSize};
      for (int d = 0; d < depth; ++d) layers.push_back(width);
      layers.push_back(2);
      const Architecture arch{layers};
      cell.genotype_dim = genotype_dim(Condition::baseline, arch);
      if (skip) {
        cell.skipped = true;
        cells.push_back(cell);
        continue;
      }
      ExperimentConfig c = config;
      c.architecture = arch;
      c.generations = config.grid_generations;
      c.runs = 1;
      const RunReport rep = evolve(
          c,
          out_dir / ("arch_d" + std::to_string(depth) + "_w" + std::to_string(width)),
          derive_key(config.seed, {seedtag::grid, static_cast<std::uint64_t>(depth),
                                   static_cast<std::uint64_t>(width)}));
      cell.best_fitness = rep.best_fitness;
      cells.push_back(cell);
    }

  nlohmann::json rows = nlohmann::json::array();
  for (const auto& cell : cells)
    rows.push_back({{"depth", cell.depth},
                    {"width", cell.width},
                    {"genotype_dim", cell.genotype_dim},
                    {"best_fitness", cell.best_fitness},
                    {"skipped", cell.skipped}});
  nlohmann::json j;
  j["cells"] = std::move(rows);
  write_json(out_dir / "grid_summary.json", j);
  return cells;
}

}  // namespace hebbswarm
