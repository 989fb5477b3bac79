#include "canthex/sim.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "canthex/allocation.hpp"
#include "canthex/contact.hpp"
#include "canthex/dynamics.hpp"
#include "canthex/errors.hpp"
#include "canthex/rng.hpp"

namespace canthex {

namespace {

std::string strip_prefix(const std::string& text, const std::string& prefix) {
  return text.rfind(prefix, 0) == 0 ? text.substr(prefix.size()) : text;
}

double effective_normal_mass(const RigidBodyState& state, const InertialModel& inert,
                             const Vec3& direction) {
  const Mat6 lambda = operational_inertia(state, inert);
  const Mat6 phi = lambda.inverse();
  return 1.0 / direction.dot(phi.topLeftCorner<3, 3>() * direction);
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config) {
  config.validate();

  RigidBodyState state;
  state.position = config.initial_position;
  state.orientation =
      Quat(Eigen::AngleAxisd(config.initial_yaw, Vec3::UnitZ()));
  state.velocity = config.initial_velocity;

  const Vec3 dir = -config.surface.normal;

  GaussianRng rng(config.seed);
  const MixingMatrix mix = build_mixing_matrix(config.actuators);

  ContactModel contact(config.surface, config.tool,
                       effective_normal_mass(state, config.vehicle, dir));

  const bool has_controller = config.mode != RunMode::ballistic;
  std::optional<HybridController> controller;
  if (has_controller) {
    controller.emplace(config.gains, config.setpoints, config.task,
                       config.surface, config.vehicle,
                       config.mode == RunMode::inspection);
  }

  EpisodeConfig episode_config;
  episode_config.force_on = config.setpoints.force_threshold_on;
  episode_config.force_off = config.setpoints.force_threshold_off();
  EpisodeDetector detector(episode_config);

  LogHeader header;
  header.scenario = config.name;
  header.config_hash = config.fingerprint;
  header.seed = config.seed;
  header.dt = config.dt;

  RunResult result;
  result.log = TrajectoryLog(header);
  result.termination_reason = "max_time";

  const auto n_steps =
      static_cast<std::size_t>(std::llround(config.max_time / config.dt));
  double ballistic_stop = -1.0;
  Phase prev_phase = has_controller ? controller->phase() : Phase::approach;

  try {
    for (std::size_t i = 0; i < n_steps; ++i) {
      const Mat3 rot = state.rotation();
      const Vec3 op = state.op_point(config.vehicle.arm_offset);
      const Vec3 op_vel = state.op_velocity(config.vehicle.arm_offset);
      const Vec3 rho_w = rot * config.vehicle.arm_offset;

      const ContactReport report = contact.evaluate(op, op_vel, rot, rng);

      Vec6 command = Vec6::Zero();
      int phase_out = -1;
      if (has_controller) {
        command = controller->tick(state, report.sensed_force, config.dt);
        const Phase now = controller->phase();
        if (now != prev_phase) {
          result.transitions.push_back({state.time, prev_phase, now});
          prev_phase = now;
        }
        phase_out = phase_code(now);
      }

      // World command at the body origin -> body axes for the allocator.
      Vec6 body_wrench_demand;
      body_wrench_demand << rot.transpose() * command.head<3>(),
          rot.transpose() * command.tail<3>();
      const RotorCommand rotors = speeds_from_wrench(
          mix, body_wrench_demand, config.actuators.omega_sq_max());
      const Vec6 achieved = wrench_from_speeds(mix, rotors);

      Vec6 external = config.external_wrench_bias;
      external.head<3>() += report.force_world;
      external.tail<3>() += rho_w.cross(report.force_world);

      SimSample sample;
      sample.t = state.time;
      sample.position = state.position;
      sample.rpy = state.euler_rpy();
      sample.velocity = state.velocity;
      sample.omega_body = state.angular_velocity;
      sample.op_position = op;
      sample.op_velocity = op_vel;
      sample.vel_normal = dir.dot(op_vel);
      sample.gap_normal =
          std::max(0.0, (op - config.surface.plane_point).dot(config.surface.normal));
      sample.force_sensed = report.sensed_force;
      sample.in_contact = report.in_contact;
      sample.penetration = report.penetration;
      sample.force_normal = report.normal_force;
      sample.phase = phase_out;
      for (int r = 0; r < 6; ++r) sample.rotor_sq[r] = rotors.squared_speeds[r];
      sample.saturated = rotors.saturated;
      sample.command = command;
      result.log.append(sample);

      detector.feed(state.time, sample.vel_normal, report.sensed_force,
                    report.penetration);

      state = step(state, achieved, external, config.vehicle, config.dt);

      if (has_controller && controller->task_complete()) {
        result.reached_terminal = true;
        result.termination_reason = "task_complete";
        break;
      }
      if (!has_controller && detector.has_complete_episode()) {
        if (ballistic_stop < 0.0) ballistic_stop = state.time + 0.3;
        if (state.time >= ballistic_stop) {
          result.reached_terminal = true;
          result.termination_reason = "episode_complete";
          break;
        }
      }
    }
  } catch (const NonFiniteState& e) {
    throw NonFiniteState(strip_prefix(e.what(), "dynamics: ") +
                         " (scenario " + config.name + ")");
  } catch (const SingularMixing& e) {
    throw SingularMixing(strip_prefix(e.what(), "allocation: ") + " at t=" +
                         std::to_string(state.time) + " (scenario " +
                         config.name + ")");
  }

  detector.finish(state.time);
  result.episodes = detector.episodes();

  if (config.mode != RunMode::interaction && result.episodes.size() == 1 &&
      result.episodes.front().complete) {
    try {
      result.estimate = estimate_stiffness(result.episodes.front(),
                                           config.vehicle.mass,
                                           config.tool.tool_stiffness);
      result.estimate.surface_label = config.surface.label;
      result.has_estimate = true;
    } catch (const Error&) {
      // Degenerate episode (zero approach / series pole): leave unset.
    }
  }

  return result;
}

}  // namespace canthex
