#include "hebbswarm/trial.hpp"

#include <stdexcept>

namespace hebbswarm {

TrialOptions trial_options(const ExperimentConfig& config) {
  TrialOptions o;
  o.condition = config.condition;
  o.arch = config.architecture;
  o.n_robots = config.swarm_size;
  o.steps = config.trial_steps();
  o.field_kind = config.field;
  o.field_params = config.field_params;
  o.world = config.world;
  o.noise = config.noise;
  o.r_spawn = config.r_spawn;
  o.switch_period = config.switch_period;
  return o;
}

TrialLog run_trial(const Eigen::VectorXd& genotype, const TrialOptions& opts,
                   std::uint64_t seed) {
  if (opts.steps < 1) throw std::invalid_argument("run_trial: steps must be >= 1");

  const ScalarField field(opts.field_kind, opts.field_params);
  Rng spawn_rng(derive_key(seed, {seedtag::spawn}));
  Rng world_rng(derive_key(seed, {seedtag::world}));
  Rng ctrl_rng(derive_key(seed, {seedtag::controller}));

  World world(field, spawn_swarm(opts.n_robots, field, opts.r_spawn, spawn_rng),
              opts.world, opts.noise, world_rng);
  ControllerOptions copts;
  copts.switch_period = opts.switch_period;
  const auto controller = make_controller(opts.condition, genotype, opts.arch,
                                          opts.n_robots, ctrl_rng, copts);

  TrialLog log;
  log.seed = seed;
  log.field_kind = opts.field_kind;
  log.dt = opts.world.dt;
  log.robot_light.resize(opts.steps, opts.n_robots);
  log.poses.resize(opts.steps);
  if (opts.log_weights) log.weights.reserve(opts.steps);

  // The single-agent condition never sees neighbours, whatever the swarm size.
  const bool mask_neighbours = opts.condition == Condition::hebbian_single;

  std::vector<WheelCommand> commands(opts.n_robots);
  for (long t = 0; t < opts.steps; ++t) {
    log.poses[t] = world.robots();
    for (int i = 0; i < opts.n_robots; ++i)
      log.robot_light(t, i) = world.light_at(i);
    if (opts.log_weights) log.weights.push_back(controller->weight_snapshot());

    for (int i = 0; i < opts.n_robots; ++i) {
      SensorReading reading = world.sense(i);
      if (mask_neighbours)
        for (auto& q : reading.quadrants) q = QuadrantReading{};
      const Eigen::Vector2d u = controller->act(i, rescale(reading));
      commands[i] = {u[0], u[1]};
    }
    world.step(commands);
  }
  log.final_weights = controller->weight_snapshot();
  return log;
}

}  // namespace hebbswarm
