#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "canthex/allocation.hpp"
#include "canthex/contact.hpp"
#include "canthex/controller.hpp"
#include "canthex/dynamics.hpp"
#include "canthex/task_space.hpp"
#include "canthex/types.hpp"

namespace canthex {

enum class RunMode { interaction, inspection, ballistic };

const char* run_mode_name(RunMode m);

struct CampaignSpec {
  std::vector<SurfaceModel> surfaces;
  std::vector<double> approach_velocities;
  int trials_per_cell = 1;
};

struct ScenarioConfig {
  std::string name;
  RunMode mode = RunMode::interaction;
  std::uint64_t seed = 1;
  double dt = 1e-3;
  double max_time = 15.0;

  InertialModel vehicle;
  ActuatorGeometry actuators;
  EndEffectorModel tool;
  SurfaceModel surface;
  TaskSpec task;
  GainSet gains;
  Setpoints setpoints;

  Vec3 initial_position = Vec3::Zero();
  Vec3 initial_velocity = Vec3::Zero();
  double initial_yaw = 0.0;

  Vec6 external_wrench_bias = Vec6::Zero();

  CampaignSpec campaign;
  bool has_campaign = false;

  /// Fingerprint of the canonical serialized form; lands in the log header.
  std::string fingerprint;

  void validate() const;
};

/// Parse a scenario from its JSON form. Unknown keys anywhere in the tree are
/// configuration errors, reported with their path.
ScenarioConfig parse_scenario(const nlohmann::json& root);

/// Read and parse a scenario file.
ScenarioConfig load_scenario(const std::string& path);

/// Apply dotted-path overrides ("surface.stiffness=900") on the raw JSON
/// before parsing. Values are parsed as JSON scalars, falling back to string.
void apply_override(nlohmann::json& root, const std::string& dotted_key,
                    const std::string& value);

}  // namespace canthex
