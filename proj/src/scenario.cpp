#include "canthex/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "canthex/errors.hpp"
#include "canthex/hash.hpp"

namespace canthex {

namespace {

using nlohmann::json;

/// Strict reader over one JSON object: every key must be consumed exactly
/// once, leftovers are reported with their full path.
class Block {
 public:
  Block(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) {
      throw ConfigError(path_ + " must be an object");
    }
  }

  bool has(const std::string& key) {
    return node_.find(key) != node_.end();
  }

  const json& require(const std::string& key) {
    auto it = node_.find(key);
    if (it == node_.end()) {
      throw ConfigError("missing key " + join(key));
    }
    seen_.insert(key);
    return *it;
  }

  const json* optional(const std::string& key) {
    auto it = node_.find(key);
    if (it == node_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  double number(const std::string& key) { return as_number(require(key), key); }

  double number_or(const std::string& key, double fallback) {
    const json* j = optional(key);
    return j ? as_number(*j, key) : fallback;
  }

  std::string text(const std::string& key) {
    const json& j = require(key);
    if (!j.is_string()) throw ConfigError(join(key) + " must be a string");
    return j.get<std::string>();
  }

  Vec3 vec3(const std::string& key) { return as_vec3(require(key), key); }

  Vec3 vec3_or(const std::string& key, const Vec3& fallback) {
    const json* j = optional(key);
    return j ? as_vec3(*j, key) : fallback;
  }

  Vec6 vec6_or(const std::string& key, const Vec6& fallback) {
    const json* j = optional(key);
    if (!j) return fallback;
    if (!j->is_array() || j->size() != 6) {
      throw ConfigError(join(key) + " must be an array of 6 numbers");
    }
    Vec6 out;
    for (int i = 0; i < 6; ++i) out[i] = as_number((*j)[i], key);
    return out;
  }

  std::string path_of(const std::string& key) const { return join(key); }

  /// Call once after all reads: rejects keys the schema does not know.
  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (seen_.find(it.key()) == seen_.end()) {
        throw ConfigError("unknown key " + join(it.key()));
      }
    }
  }

 private:
  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  double as_number(const json& j, const std::string& key) const {
    if (!j.is_number()) throw ConfigError(join(key) + " must be a number");
    return j.get<double>();
  }

  Vec3 as_vec3(const json& j, const std::string& key) const {
    if (!j.is_array() || j.size() != 3) {
      throw ConfigError(join(key) + " must be an array of 3 numbers");
    }
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[i] = as_number(j[i], key);
    return out;
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

InertialModel parse_vehicle(const json& node, const std::string& path) {
  Block b(node, path);
  InertialModel m;
  m.mass = b.number("mass");
  m.inertia_diag = b.vec3("inertia");
  m.gravity = b.vec3_or("gravity", Vec3(0.0, 0.0, -9.81));
  m.arm_offset = b.vec3("arm_offset");
  b.finish();
  m.validate();
  return m;
}

ActuatorGeometry parse_actuators(const json& node, const std::string& path) {
  Block b(node, path);
  ActuatorGeometry g;
  g.radius = b.number_or("radius", g.radius);
  g.cant_angle = deg_to_rad(b.number_or("cant_angle_deg", rad_to_deg(g.cant_angle)));
  g.thrust_coefficient = b.number_or("thrust_coefficient", g.thrust_coefficient);
  g.torque_coefficient = b.number_or("torque_coefficient", g.torque_coefficient);
  g.rotor_speed_max = b.number_or("rotor_speed_max", g.rotor_speed_max);
  b.finish();
  g.validate();
  return g;
}

EndEffectorModel parse_tool(const json& node, const std::string& path) {
  Block b(node, path);
  EndEffectorModel t;
  t.tool_stiffness = b.number_or("stiffness", t.tool_stiffness);
  t.sensor_noise_sigma = b.number_or("sensor_noise_sigma", t.sensor_noise_sigma);
  t.sensor_axis = b.vec3_or("sensor_axis", t.sensor_axis);
  b.finish();
  t.validate();
  return t;
}

SurfaceModel parse_surface(const json& node, const std::string& path) {
  Block b(node, path);
  SurfaceModel s;
  s.label = b.text("label");
  s.plane_point = b.vec3("plane_point");
  s.normal = b.vec3("normal");
  s.stiffness = b.number("stiffness");
  s.restitution = b.number("restitution");
  s.friction = b.number_or("friction", 0.0);
  b.finish();
  s.validate();
  return s;
}

TaskSpec parse_task(const json& node, const std::string& path) {
  Block b(node, path);
  TaskSpec t;
  t.sigma_f = b.vec3_or("sigma_f", t.sigma_f);
  t.sigma_tau = b.vec3_or("sigma_tau", t.sigma_tau);
  b.finish();
  return t;
}

GainSet parse_gains(const json& node, const std::string& path) {
  Block b(node, path);
  GainSet g;
  g.pos_kp = b.vec6_or("pos_kp", g.pos_kp);
  g.pos_ki = b.vec6_or("pos_ki", g.pos_ki);
  g.pos_kd = b.vec6_or("pos_kd", g.pos_kd);
  g.pos_integrator_limit = b.vec6_or("pos_integrator_limit", g.pos_integrator_limit);
  g.vel_kp = b.number_or("vel_kp", g.vel_kp);
  g.vel_kd = b.number_or("vel_kd", g.vel_kd);
  g.force_kp = b.number_or("force_kp", g.force_kp);
  g.force_ki = b.number_or("force_ki", g.force_ki);
  g.force_integrator_limit =
      b.number_or("force_integrator_limit", g.force_integrator_limit);
  g.impact_kvf = b.number_or("impact_kvf", g.impact_kvf);
  g.normal_command_limit = b.number_or("normal_command_limit", g.normal_command_limit);
  b.finish();
  g.validate();
  return g;
}

Setpoints parse_setpoints(const json& node, const std::string& path) {
  Block b(node, path);
  Setpoints s;
  s.approach_velocity = b.number_or("approach_velocity", s.approach_velocity);
  s.force_setpoint = b.number_or("force_setpoint", s.force_setpoint);
  s.contact_duration = b.number_or("contact_duration", s.contact_duration);
  s.force_threshold_on = b.number_or("force_threshold_on", s.force_threshold_on);
  s.impact_window = b.number_or("impact_window", s.impact_window);
  s.hold_position = b.vec3_or("hold_position", s.hold_position);
  s.hold_yaw = deg_to_rad(b.number_or("hold_yaw_deg", rad_to_deg(s.hold_yaw)));
  s.retreat_standoff = b.number_or("retreat_standoff", s.retreat_standoff);
  s.retreat_timeout = b.number_or("retreat_timeout", s.retreat_timeout);
  s.measure_window = b.number_or("measure_window", s.measure_window);
  s.contact_lateral_drift =
      b.number_or("contact_lateral_drift", s.contact_lateral_drift);
  b.finish();
  return s;
}

CampaignSpec parse_campaign(const json& node, const std::string& path) {
  Block b(node, path);
  CampaignSpec c;
  const json& surfaces = b.require("surfaces");
  if (!surfaces.is_array() || surfaces.empty()) {
    throw ConfigError(b.path_of("surfaces") + " must be a non-empty array");
  }
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    c.surfaces.push_back(
        parse_surface(surfaces[i], path + ".surfaces[" + std::to_string(i) + "]"));
  }
  const json& vels = b.require("approach_velocities");
  if (!vels.is_array() || vels.empty()) {
    throw ConfigError(b.path_of("approach_velocities") +
                      " must be a non-empty array");
  }
  for (const auto& v : vels) {
    if (!v.is_number() || v.get<double>() <= 0.0) {
      throw ConfigError(b.path_of("approach_velocities") +
                        " entries must be positive numbers");
    }
    c.approach_velocities.push_back(v.get<double>());
  }
  const json* trials = b.optional("trials_per_cell");
  if (trials) {
    if (!trials->is_number_integer() || trials->get<int>() < 1) {
      throw ConfigError(b.path_of("trials_per_cell") +
                        " must be a positive integer");
    }
    c.trials_per_cell = trials->get<int>();
  }
  b.finish();
  return c;
}

RunMode parse_mode(const std::string& text) {
  if (text == "interaction") return RunMode::interaction;
  if (text == "inspection") return RunMode::inspection;
  if (text == "ballistic") return RunMode::ballistic;
  throw ConfigError("mode must be interaction, inspection, or ballistic "
                    "(got \"" + text + "\")");
}

}  // namespace

const char* run_mode_name(RunMode m) {
  switch (m) {
    case RunMode::interaction: return "interaction";
    case RunMode::inspection: return "inspection";
    case RunMode::ballistic: return "ballistic";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  if (name.empty()) throw ConfigError("name must not be empty");
  if (dt <= 0.0 || dt > 0.1) throw ConfigError("dt must lie in (0, 0.1] s");
  if (max_time < 0.0) throw ConfigError("max_time must be non-negative");
  vehicle.validate();
  actuators.validate();
  tool.validate();
  surface.validate();
  if (mode != RunMode::ballistic) {
    gains.validate();
    setpoints.validate(tool.sensor_noise_sigma);
  }
}

ScenarioConfig parse_scenario(const nlohmann::json& root) {
  Block b(root, "");
  ScenarioConfig cfg;
  cfg.name = b.text("name");
  cfg.mode = parse_mode(b.text("mode"));
  const json& seed = b.require("seed");
  if (!seed.is_number_unsigned()) {
    throw ConfigError("seed must be a non-negative integer");
  }
  cfg.seed = seed.get<std::uint64_t>();
  cfg.dt = b.number_or("dt", cfg.dt);
  cfg.max_time = b.number("max_time");

  cfg.vehicle = parse_vehicle(b.require("vehicle"), "vehicle");
  cfg.actuators = parse_actuators(b.require("actuators"), "actuators");
  cfg.tool = parse_tool(b.require("tool"), "tool");
  cfg.surface = parse_surface(b.require("surface"), "surface");

  if (const json* j = b.optional("task")) cfg.task = parse_task(*j, "task");
  if (const json* j = b.optional("gains")) cfg.gains = parse_gains(*j, "gains");
  if (const json* j = b.optional("setpoints")) {
    cfg.setpoints = parse_setpoints(*j, "setpoints");
  }

  if (const json* j = b.optional("initial")) {
    Block init(*j, "initial");
    cfg.initial_position = init.vec3_or("position", cfg.initial_position);
    cfg.initial_velocity = init.vec3_or("velocity", cfg.initial_velocity);
    cfg.initial_yaw = deg_to_rad(init.number_or("yaw_deg", 0.0));
    init.finish();
  }

  cfg.external_wrench_bias =
      b.vec6_or("external_wrench_bias", cfg.external_wrench_bias);

  if (const json* j = b.optional("campaign")) {
    cfg.campaign = parse_campaign(*j, "campaign");
    cfg.has_campaign = true;
  }

  b.finish();
  cfg.validate();

  // nlohmann's default object storage is key-sorted, so dump() is canonical
  // for hashing regardless of the order keys appeared in the file.
  cfg.fingerprint = hex64(fnv1a64(root.dump()));
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    return parse_scenario(root);
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    const std::string prefix = "config: ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    throw ConfigError(msg + " (in " + path + ")");
  }
}

void apply_override(nlohmann::json& root, const std::string& dotted_key,
                    const std::string& value) {
  if (dotted_key.empty()) throw ConfigError("empty override key");
  nlohmann::json* node = &root;
  std::stringstream keys(dotted_key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(keys, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    node = &(*node)[parts[i]];
  }
  nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value; // plain string
  (*node)[parts.back()] = parsed;
}

}  // namespace canthex
