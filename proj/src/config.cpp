#include "hebbswarm/config.hpp"

#include <cmath>
#include <set>

#include "hebbswarm/io.hpp"

namespace hebbswarm {

long ExperimentConfig::trial_steps() const {
  return std::lround(trial_seconds / world.dt);
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };

  if (swarm_size < 1) fail("swarm_size must be >= 1");
  if (!(trial_seconds > 0.0)) fail("trial_seconds must be > 0");
  if (!(world.dt > 0.0)) fail("dt must be > 0");
  if (trial_steps() < 1) fail("trial_seconds too short for one step");
  if (repeats_per_individual < 1) fail("repeats_per_individual must be >= 1");
  if (lambda < 2) fail("lambda must be >= 2");
  if (generations < 1) fail("generations must be >= 1");
  if (runs < 1) fail("runs must be >= 1");
  if (!(sigma0 > 0.0)) fail("sigma0 must be > 0");
  if (!(init_lo < init_hi)) fail("init_lo must be below init_hi");
  if (!architecture.valid()) fail("architecture needs >= 2 layers, all sizes >= 1");
  if (architecture.input_size() != kSensorInputSize)
    fail("architecture input layer must match the 9 sensor inputs");
  if (architecture.output_size() != 2)
    fail("architecture output layer must be 2 (wheel commands)");
  if (noise.std_light < 0 || noise.std_theta < 0 || noise.std_dist < 0)
    fail("noise standard deviations must be >= 0");
  if (noise.p_dropout < 0.0 || noise.p_dropout > 1.0)
    fail("p_dropout must be in [0,1]");
  if (parallel < 1) fail("parallel must be >= 1");
  if (!(field_params.arena_size > 0.0)) fail("arena_size must be > 0");
  if (!(field_params.falloff_radius > 0.0)) fail("falloff_radius must be > 0");
  if (r_spawn < 0.0) fail("r_spawn must be >= 0");
  if (r_spawn + 1.5 > field_params.arena_size / 2.0)
    fail("r_spawn + 1.5 must fit inside the arena");
  if (!(world.max_speed > 0.0)) fail("max_speed must be > 0");
  if (!(world.wheel_base > 0.0)) fail("wheel_base must be > 0");
  if (!(world.body_radius > 0.0)) fail("body_radius must be > 0");
  if (2.0 * world.body_radius >= field_params.arena_size)
    fail("body_radius too large for the arena");
  if (switch_period < 1) fail("switch_period must be >= 1");
  if (validation_repeats < 1) fail("validation_repeats must be >= 1");
  for (int s : scale_sizes)
    if (s < 1) fail("scale_sizes entries must be >= 1");
  if (scale_sizes.empty()) fail("scale_sizes must not be empty");
  if (flex_fields.empty()) fail("flex_fields must not be empty");
  for (int d : grid_depths)
    if (d < 1) fail("grid_depths entries must be >= 1");
  for (int w : grid_widths)
    if (w < 1) fail("grid_widths entries must be >= 1");
  if (grid_depths.empty() || grid_widths.empty()) fail("grid axes must not be empty");
  if (grid_generations < 1) fail("grid_generations must be >= 1");
  if (histogram_bins < 1) fail("histogram_bins must be >= 1");
  if (!(histogram_lo < histogram_hi)) fail("histogram range must be ascending");
  if (!(histogram_interval_seconds > 0.0))
    fail("histogram_interval_seconds must be > 0");
  if (trajectory_stride < 1) fail("trajectory_stride must be >= 1");
}

void apply_profile(ExperimentConfig& config, const std::string& profile) {
  if (profile == "full") {
    config.lambda = 30;
    config.generations = 100;
    config.swarm_size = 20;
    config.trial_seconds = 600.0;
    config.runs = 10;
    config.validation_repeats = 60;
    config.grid_generations = 20;
  } else if (profile == "small") {
    config.lambda = 8;
    config.generations = 20;
    config.swarm_size = 10;
    config.trial_seconds = 120.0;
    config.runs = 1;
    config.validation_repeats = 12;
    config.grid_generations = 5;
  } else {
    throw ConfigError("unknown profile: " + profile + " (expected small or full)");
  }
}

namespace {

const std::set<std::string> kKnownKeys = {
    "condition", "swarm_size", "field", "trial_seconds",
    "repeats_per_individual", "lambda", "generations", "runs", "seed", "sigma0",
    "init_lo", "init_hi", "noise", "architecture", "parallel", "out", "r_spawn",
    "arena_size", "falloff_radius", "switch_seconds", "shifted_x", "shifted_y",
    "dt", "max_speed", "wheel_base", "body_radius", "collisions",
    "switch_period", "validation_repeats", "scale_sizes", "flex_fields",
    "grid_depths", "grid_widths", "grid_skip", "grid_generations",
    "histogram_bins", "histogram_lo", "histogram_hi",
    "histogram_interval_seconds", "trajectory_stride"};

ExperimentConfig overlay(ExperimentConfig c, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config key: " + key);

  try {
    if (j.contains("condition"))
      c.condition = condition_from_string(j["condition"].get<std::string>());
    if (j.contains("field"))
      c.field = field_kind_from_string(j["field"].get<std::string>());
    if (j.contains("swarm_size")) c.swarm_size = j["swarm_size"].get<int>();
    if (j.contains("trial_seconds")) c.trial_seconds = j["trial_seconds"].get<double>();
    if (j.contains("repeats_per_individual"))
      c.repeats_per_individual = j["repeats_per_individual"].get<int>();
    if (j.contains("lambda")) c.lambda = j["lambda"].get<int>();
    if (j.contains("generations")) c.generations = j["generations"].get<int>();
    if (j.contains("runs")) c.runs = j["runs"].get<int>();
    if (j.contains("seed")) {
      const auto& s = j["seed"];
      c.seed = s.is_string() ? u64_from_string(s.get<std::string>())
                             : s.get<std::uint64_t>();
    }
    if (j.contains("sigma0")) c.sigma0 = j["sigma0"].get<double>();
    if (j.contains("init_lo")) c.init_lo = j["init_lo"].get<double>();
    if (j.contains("init_hi")) c.init_hi = j["init_hi"].get<double>();
    if (j.contains("noise")) {
      const auto& n = j["noise"];
      if (n.contains("std_light")) c.noise.std_light = n["std_light"].get<double>();
      if (n.contains("std_theta")) c.noise.std_theta = n["std_theta"].get<double>();
      if (n.contains("std_dist")) c.noise.std_dist = n["std_dist"].get<double>();
      if (n.contains("p_dropout")) c.noise.p_dropout = n["p_dropout"].get<double>();
    }
    if (j.contains("architecture"))
      c.architecture = Architecture{j["architecture"].get<std::vector<int>>()};
    if (j.contains("parallel")) c.parallel = j["parallel"].get<int>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("r_spawn")) c.r_spawn = j["r_spawn"].get<double>();
    if (j.contains("arena_size"))
      c.field_params.arena_size = j["arena_size"].get<double>();
    if (j.contains("falloff_radius"))
      c.field_params.falloff_radius = j["falloff_radius"].get<double>();
    if (j.contains("switch_seconds"))
      c.field_params.switch_seconds = j["switch_seconds"].get<double>();
    if (j.contains("shifted_x")) c.field_params.shifted_x = j["shifted_x"].get<double>();
    if (j.contains("shifted_y")) c.field_params.shifted_y = j["shifted_y"].get<double>();
    if (j.contains("dt")) c.world.dt = j["dt"].get<double>();
    if (j.contains("max_speed")) c.world.max_speed = j["max_speed"].get<double>();
    if (j.contains("wheel_base")) c.world.wheel_base = j["wheel_base"].get<double>();
    if (j.contains("body_radius")) c.world.body_radius = j["body_radius"].get<double>();
    if (j.contains("collisions")) c.world.collisions = j["collisions"].get<bool>();
    if (j.contains("switch_period")) c.switch_period = j["switch_period"].get<int>();
    if (j.contains("validation_repeats"))
      c.validation_repeats = j["validation_repeats"].get<int>();
    if (j.contains("scale_sizes"))
      c.scale_sizes = j["scale_sizes"].get<std::vector<int>>();
    if (j.contains("flex_fields")) {
      c.flex_fields.clear();
      for (const auto& f : j["flex_fields"])
        c.flex_fields.push_back(field_kind_from_string(f.get<std::string>()));
    }
    if (j.contains("grid_depths"))
      c.grid_depths = j["grid_depths"].get<std::vector<int>>();
    if (j.contains("grid_widths"))
      c.grid_widths = j["grid_widths"].get<std::vector<int>>();
    if (j.contains("grid_skip")) {
      c.grid_skip.clear();
      for (const auto& pair : j["grid_skip"]) {
        if (!pair.is_array() || pair.size() != 2)
          throw ConfigError("grid_skip entries must be [depth, width] pairs");
        c.grid_skip.emplace_back(pair[0].get<int>(), pair[1].get<int>());
      }
    }
    if (j.contains("grid_generations"))
      c.grid_generations = j["grid_generations"].get<int>();
    if (j.contains("histogram_bins")) c.histogram_bins = j["histogram_bins"].get<int>();
    if (j.contains("histogram_lo")) c.histogram_lo = j["histogram_lo"].get<double>();
    if (j.contains("histogram_hi")) c.histogram_hi = j["histogram_hi"].get<double>();
    if (j.contains("histogram_interval_seconds"))
      c.histogram_interval_seconds = j["histogram_interval_seconds"].get<double>();
    if (j.contains("trajectory_stride"))
      c.trajectory_stride = j["trajectory_stride"].get<int>();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

}  // namespace

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["condition"] = to_string(c.condition);
  j["swarm_size"] = c.swarm_size;
  j["field"] = to_string(c.field);
  j["trial_seconds"] = c.trial_seconds;
  j["repeats_per_individual"] = c.repeats_per_individual;
  j["lambda"] = c.lambda;
  j["generations"] = c.generations;
  j["runs"] = c.runs;
  j["seed"] = u64_to_string(c.seed);
  j["sigma0"] = c.sigma0;
  j["init_lo"] = c.init_lo;
  j["init_hi"] = c.init_hi;
  j["noise"] = {{"std_light", c.noise.std_light},
                {"std_theta", c.noise.std_theta},
                {"std_dist", c.noise.std_dist},
                {"p_dropout", c.noise.p_dropout}};
  j["architecture"] = c.architecture.layer_sizes;
  j["parallel"] = c.parallel;
  j["out"] = c.out;
  j["r_spawn"] = c.r_spawn;
  j["arena_size"] = c.field_params.arena_size;
  j["falloff_radius"] = c.field_params.falloff_radius;
  j["switch_seconds"] = c.field_params.switch_seconds;
  j["shifted_x"] = c.field_params.shifted_x;
  j["shifted_y"] = c.field_params.shifted_y;
  j["dt"] = c.world.dt;
  j["max_speed"] = c.world.max_speed;
  j["wheel_base"] = c.world.wheel_base;
  j["body_radius"] = c.world.body_radius;
  j["collisions"] = c.world.collisions;
  j["switch_period"] = c.switch_period;
  j["validation_repeats"] = c.validation_repeats;
  j["scale_sizes"] = c.scale_sizes;
  nlohmann::json flex = nlohmann::json::array();
  for (FieldKind f : c.flex_fields) flex.push_back(to_string(f));
  j["flex_fields"] = std::move(flex);
  j["grid_depths"] = c.grid_depths;
  j["grid_widths"] = c.grid_widths;
  nlohmann::json skip = nlohmann::json::array();
  for (const auto& [d, w] : c.grid_skip) skip.push_back({d, w});
  j["grid_skip"] = std::move(skip);
  j["grid_generations"] = c.grid_generations;
  j["histogram_bins"] = c.histogram_bins;
  j["histogram_lo"] = c.histogram_lo;
  j["histogram_hi"] = c.histogram_hi;
  j["histogram_interval_seconds"] = c.histogram_interval_seconds;
  j["trajectory_stride"] = c.trajectory_stride;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  return overlay(ExperimentConfig{}, j);
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             const ExperimentConfig& base) {
  nlohmann::json j;
  try {
    j = read_json(path);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return overlay(base, j);
}

}  // namespace hebbswarm
