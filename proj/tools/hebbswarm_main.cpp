#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hebbswarm/experiments.hpp"
#include "hebbswarm/io.hpp"
#include "hebbswarm/plot.hpp"

namespace fs = std::filesystem;
using namespace hebbswarm;

namespace {

struct CliState {
  std::string config_path;
  std::string profile;
  std::uint64_t seed = 0;
  std::string out;
  int parallel = 0;

  std::string condition;
  std::string field;
  int generations = 0;
  int lambda = 0;
  int swarm = 0;
  double trial_seconds = 0;
  int runs = 0;
  int repeats = 0;

  std::string genotype_path;
  std::vector<std::string> plot_inputs;
  std::string plot_out;
};

void add_common_flags(CLI::App* cmd, CliState& s) {
  cmd->add_option("--config", s.config_path, "JSON config file");
  cmd->add_option("--profile", s.profile, "parameter profile")
      ->check(CLI::IsMember({"small", "full"}));
  cmd->add_option("--seed", s.seed, "master seed");
  cmd->add_option("--out", s.out, "output directory");
  cmd->add_option("--parallel", s.parallel, "worker threads");
}

void add_experiment_flags(CLI::App* cmd, CliState& s) {
  cmd->add_option("--swarm", s.swarm, "swarm size");
  cmd->add_option("--field", s.field, "field kind");
  cmd->add_option("--trial-seconds", s.trial_seconds, "trial length in seconds");
}

bool passed(const CLI::App* cmd, const std::string& name) {
  const auto* opt = cmd->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

ExperimentConfig build_config(const CLI::App* cmd, const CliState& s) {
  ExperimentConfig cfg;
  if (passed(cmd, "--profile")) apply_profile(cfg, s.profile);
  if (passed(cmd, "--config")) cfg = load_config(s.config_path, cfg);
  if (passed(cmd, "--seed")) cfg.seed = s.seed;
  if (passed(cmd, "--out")) cfg.out = s.out;
  if (passed(cmd, "--parallel")) cfg.parallel = s.parallel;
  if (passed(cmd, "--swarm")) cfg.swarm_size = s.swarm;
  if (passed(cmd, "--field")) cfg.field = field_kind_from_string(s.field);
  if (passed(cmd, "--trial-seconds")) cfg.trial_seconds = s.trial_seconds;
  if (passed(cmd, "--condition"))
    cfg.condition = condition_from_string(s.condition);
  if (passed(cmd, "--generations")) cfg.generations = s.generations;
  if (passed(cmd, "--lambda")) cfg.lambda = s.lambda;
  if (passed(cmd, "--runs")) cfg.runs = s.runs;
  if (passed(cmd, "--repeats")) cfg.validation_repeats = s.repeats;
  return cfg;
}

// The genotype file pins the condition and architecture it was evolved with.
Eigen::VectorXd load_genotype(const std::string& path, ExperimentConfig& cfg) {
  GenotypeFile g;
  try {
    g = read_genotype(path);
  } catch (const std::exception& e) {
    throw ConfigError("genotype file: " + std::string(e.what()));
  }
  cfg.condition = condition_from_string(g.condition);
  cfg.architecture = Architecture{g.architecture};
  return g.genotype;
}

void write_config_used(const ExperimentConfig& cfg) {
  write_json(fs::path(cfg.out) / "config_used.json", config_to_json(cfg));
}

int run(int argc, char** argv) {
  CLI::App app{"Swarm plasticity evolution toolkit"};
  app.require_subcommand(1);
  CliState s;

  auto* evolve_cmd =
      app.add_subcommand("evolve", "evolve a controller population");
  add_common_flags(evolve_cmd, s);
  add_experiment_flags(evolve_cmd, s);
  evolve_cmd->add_option("--condition", s.condition, "controller condition")
      ->check(CLI::IsMember({"hebbian", "baseline", "baseline_a",
                             "hebbian_single", "recurrent"}));
  evolve_cmd->add_option("--generations", s.generations, "generations per run");
  evolve_cmd->add_option("--lambda", s.lambda, "population size");
  evolve_cmd->add_option("--runs", s.runs, "independent repetitions");

  auto* retest_cmd =
      app.add_subcommand("retest", "re-evaluate a genotype on fresh trials");
  auto* perturb_cmd = app.add_subcommand(
      "perturb", "paired static/moving-source deployment with weight metrics");
  auto* scale_cmd =
      app.add_subcommand("scale", "retest across swarm sizes");
  auto* flex_cmd =
      app.add_subcommand("flex", "retest across field kinds");
  for (auto* cmd : {retest_cmd, perturb_cmd, scale_cmd, flex_cmd}) {
    add_common_flags(cmd, s);
    add_experiment_flags(cmd, s);
    cmd->add_option("--genotype", s.genotype_path, "genotype JSON file")
        ->required();
    cmd->add_option("--repeats", s.repeats, "validation repetitions");
  }

  auto* grid_cmd = app.add_subcommand(
      "arch-grid", "evolve the baseline condition over a depth/width grid");
  add_common_flags(grid_cmd, s);
  add_experiment_flags(grid_cmd, s);
  grid_cmd->add_option("--generations", s.generations, "generations per cell");
  grid_cmd->add_option("--lambda", s.lambda, "population size");

  auto* plot_cmd = app.add_subcommand("plot", "render toolkit CSVs to SVG");
  plot_cmd->add_option("inputs", s.plot_inputs, "CSV files")->required();
  plot_cmd->add_option("--out", s.plot_out, "output directory for SVGs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }

  try {
    if (app.got_subcommand(evolve_cmd)) {
      ExperimentConfig cfg = build_config(evolve_cmd, s);
      cfg.validate();
      write_config_used(cfg);
      const auto reports = evolve_runs(cfg);
      for (const auto& r : reports)
        std::cout << "run seed " << r.seed << ": best fitness " << r.best_fitness
                  << '\n';
      std::cout << "outputs in " << cfg.out << '\n';
    } else if (app.got_subcommand(retest_cmd)) {
      ExperimentConfig cfg = build_config(retest_cmd, s);
      const auto genotype = load_genotype(s.genotype_path, cfg);
      cfg.validate();
      write_config_used(cfg);
      const auto summary = retest(genotype, cfg, cfg.out);
      std::cout << "retest over " << summary.fitnesses.size() << " trials: mean "
                << summary.mean << " std " << summary.std_dev << '\n';
    } else if (app.got_subcommand(perturb_cmd)) {
      ExperimentConfig cfg = build_config(perturb_cmd, s);
      const auto genotype = load_genotype(s.genotype_path, cfg);
      cfg.validate();
      write_config_used(cfg);
      const auto report = perturb_experiment(genotype, cfg, cfg.out);
      std::cout << "static fitness " << report.fitness_static
                << ", dynamic fitness " << report.fitness_dynamic
                << ", identical prefix " << report.identical_prefix_steps
                << " steps\n";
    } else if (app.got_subcommand(scale_cmd)) {
      ExperimentConfig cfg = build_config(scale_cmd, s);
      const auto genotype = load_genotype(s.genotype_path, cfg);
      cfg.validate();
      write_config_used(cfg);
      scale_experiment(genotype, cfg, cfg.out);
      std::cout << "scale summaries in " << cfg.out << '\n';
    } else if (app.got_subcommand(flex_cmd)) {
      ExperimentConfig cfg = build_config(flex_cmd, s);
      const auto genotype = load_genotype(s.genotype_path, cfg);
      cfg.validate();
      write_config_used(cfg);
      flex_experiment(genotype, cfg, cfg.out);
      std::cout << "flex summaries in " << cfg.out << '\n';
    } else if (app.got_subcommand(grid_cmd)) {
      ExperimentConfig cfg = build_config(grid_cmd, s);
      cfg.condition = Condition::baseline;
      if (grid_cmd->count("--generations")) cfg.grid_generations = s.generations;
      if (grid_cmd->count("--lambda")) cfg.lambda = s.lambda;
      cfg.validate();
      write_config_used(cfg);
      const auto cells = arch_grid(cfg, cfg.out);
      for (const auto& c : cells)
        if (!c.skipped)
          std::cout << "depth " << c.depth << " width " << c.width << " (dim "
                    << c.genotype_dim << "): best " << c.best_fitness << '\n';
    } else if (app.got_subcommand(plot_cmd)) {
      for (const auto& input : s.plot_inputs) {
        fs::path svg = plot_cmd->count("--out")
                           ? fs::path(s.plot_out) / fs::path(input).filename()
                           : fs::path(input);
        svg.replace_extension(".svg");
        plot_csv(input, svg);
        std::cout << svg.string() << '\n';
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
