#include "canthex/controller.hpp"

#include <cmath>

#include "canthex/errors.hpp"

namespace canthex {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::approach: return "approach";
    case Phase::impact: return "impact";
    case Phase::contact: return "contact";
    case Phase::retreat: return "retreat";
  }
  return "?";
}

int phase_code(Phase p) { return static_cast<int>(p); }

bool legal_transition(Phase from, Phase to) {
  if (from == Phase::approach && to == Phase::impact) return true;
  if (from == Phase::impact && to == Phase::contact) return true;
  if (from == Phase::contact && to == Phase::retreat) return true;
  return false;
}

void GainSet::validate() const {
  for (int i = 0; i < 6; ++i) {
    if (pos_kp[i] < 0.0 || pos_ki[i] < 0.0 || pos_kd[i] < 0.0 ||
        pos_integrator_limit[i] < 0.0) {
      throw ConfigError("gains: position PID terms must be non-negative");
    }
  }
  if (vel_kp <= 0.0 || vel_kd < 0.0) {
    throw ConfigError("gains: velocity law needs vel_kp > 0, vel_kd >= 0");
  }
  if (force_kp < 0.0 || force_ki < 0.0 || force_integrator_limit <= 0.0) {
    throw ConfigError("gains: force law terms out of range");
  }
  if (impact_kvf <= 0.0 || impact_kvf > 2.0) {
    throw ConfigError("gains: impact_kvf must lie in (0, 2]");
  }
  if (normal_command_limit <= 0.0) {
    throw ConfigError("gains: normal_command_limit must be positive");
  }
}

void Setpoints::validate(double noise_sigma) const {
  if (approach_velocity <= 0.0) {
    throw ConfigError("setpoints: approach_velocity must be positive");
  }
  if (force_setpoint <= 0.0) {
    throw ConfigError("setpoints: force_setpoint must be positive");
  }
  if (contact_duration < 0.0) {
    throw ConfigError("setpoints: contact_duration must be non-negative");
  }
  if (force_threshold_on <= 6.0 * noise_sigma) {
    throw ConfigError(
        "setpoints: force_threshold_on must clear the sensor noise floor "
        "(> 6 sigma)");
  }
  if (impact_window <= 0.0 || impact_window > 0.5) {
    throw ConfigError("setpoints: impact_window must lie in (0, 0.5] s");
  }
  if (retreat_standoff <= 0.0 || retreat_timeout <= 0.0) {
    throw ConfigError("setpoints: retreat standoff and timeout must be positive");
  }
  if (measure_window < 0.0) {
    throw ConfigError("setpoints: measure_window must be non-negative");
  }
}

Vec6 compose_command(const Vec6& motion, const Vec6& interaction, const Vec6& ccg,
                     const Selection& selection) {
  return selection.omega * motion + selection.omega_bar * interaction + ccg;
}

HybridController::HybridController(const GainSet& gains, const Setpoints& setpoints,
                                   const TaskSpec& task, const SurfaceModel& surface,
                                   const InertialModel& inert, bool inspection_mode)
    : gains_(gains),
      setpoints_(setpoints),
      task_(task),
      selection_(build_selection(task)),
      surface_(surface),
      inert_(inert),
      inspection_mode_(inspection_mode) {
  gains_.validate();
  surface_.validate();
  inert_.validate();
  dir_ = -surface_.normal;

  // The interaction axis must line up with a world axis; the remaining
  // translation axes carry the position hold.
  int axis = 0;
  dir_.cwiseAbs().maxCoeff(&axis);
  if (std::abs(std::abs(dir_[axis]) - 1.0) > 1e-9) {
    throw ConfigError("surface normal must be axis-aligned");
  }
  for (int i = 0; i < 3; ++i) {
    if (i != axis) {
      drift_axis_ = i;
      break;
    }
  }
  if (task_.sigma_f[axis] != 0.0) {
    throw ConfigError(
        "controller: motion selection must release the interaction axis");
  }
}

double HybridController::effective_mass(const RigidBodyState& state) const {
  // Apparent point mass at the op point along the interaction axis:
  // 1 / (u^T (J A^-1 J^T) u) restricted to the translational block.
  const Mat6 lambda = operational_inertia(state, inert_);
  const Mat6 phi = lambda.inverse();
  const double q = dir_.dot(phi.topLeftCorner<3, 3>() * dir_);
  return 1.0 / q;
}

Vec6 HybridController::hold_and_compose(const RigidBodyState& state,
                                        double interaction_force, double dt) {
  const Mat3 rot = state.rotation();
  const Vec3 rho_w = rot * inert_.arm_offset;

  // Position / attitude errors on the motion-selected axes only, so the
  // interaction axis never winds the integrator.
  Vec3 hold = setpoints_.hold_position;
  if (phase_ == Phase::contact && setpoints_.contact_lateral_drift != 0.0) {
    hold[drift_axis_] +=
        setpoints_.contact_lateral_drift * (state.time - contact_entry_time_);
  }
  const Vec3 pos_err = hold - state.op_point(inert_.arm_offset);

  const Mat3 rot_des =
      Eigen::AngleAxisd(setpoints_.hold_yaw, Vec3::UnitZ()).toRotationMatrix();
  const Eigen::AngleAxisd att_delta(rot_des * rot.transpose());
  const Vec3 att_err = att_delta.angle() * att_delta.axis();

  Vec6 err;
  err << pos_err, att_err;
  for (int i = 0; i < 3; ++i) err[i] *= task_.sigma_f[i];
  for (int i = 0; i < 3; ++i) err[3 + i] *= task_.sigma_tau[i];

  Vec6 derr = Vec6::Zero();
  if (have_prev_pos_error_ && dt > 0.0) derr = (err - prev_pos_error_) / dt;
  prev_pos_error_ = err;
  have_prev_pos_error_ = true;

  pos_integrator_ += err * dt;
  for (int i = 0; i < 6; ++i) {
    pos_integrator_[i] = clamp(pos_integrator_[i], -gains_.pos_integrator_limit[i],
                               gains_.pos_integrator_limit[i]);
  }

  Vec6 accel;
  for (int i = 0; i < 6; ++i) {
    accel[i] = gains_.pos_kp[i] * err[i] + gains_.pos_ki[i] * pos_integrator_[i] +
               gains_.pos_kd[i] * derr[i];
  }

  const Mat6 lambda = operational_inertia(state, inert_);

  // Gravity support applied at the op point needs a torque correction so the
  // net moment about the centre of mass vanishes.
  const Vec3 f_grav = -inert_.mass * inert_.gravity;
  Vec6 gravity_comp = make_wrench(f_grav, -rho_w.cross(f_grav));

  const Vec6 motion = lambda * accel + gravity_comp;

  const double f_int =
      clamp(interaction_force, -gains_.normal_command_limit, gains_.normal_command_limit);
  const Vec6 interaction = make_wrench(f_int * dir_, Vec3::Zero());

  const Vec6 ccg = coriolis_centrifugal(state, inert_);
  Vec6 ccg_world = Vec6::Zero();
  ccg_world.tail<3>() = rot * ccg.tail<3>();

  // Everything above acts at the operational point; the allocator wants the
  // equivalent wrench at the body origin.
  const Vec6 op_wrench = compose_command(motion, interaction, ccg_world, selection_);
  return op_to_com_wrench(op_wrench, rho_w);
}

double HybridController::velocity_law_force(const RigidBodyState& state,
                                            double velocity_setpoint, double dt) {
  const double v_n = dir_.dot(state.op_velocity(inert_.arm_offset));
  const double err = velocity_setpoint - v_n;
  double derr = 0.0;
  if (have_prev_vel_error_ && dt > 0.0) derr = (err - prev_vel_error_) / dt;
  prev_vel_error_ = err;
  have_prev_vel_error_ = true;

  const double accel = gains_.vel_kp * err + gains_.vel_kd * derr;
  return effective_mass(state) * accel;
}

Vec6 HybridController::approach_command(const RigidBodyState& state,
                                        double velocity_sign, double dt) {
  const double v_sp = velocity_sign * setpoints_.approach_velocity;
  return hold_and_compose(state, velocity_law_force(state, v_sp, dt), dt);
}

std::pair<Vec6, bool> HybridController::impact_command(const RigidBodyState& state,
                                                       double entry_velocity,
                                                       double elapsed, double dt) {
  // Constant-force realisation of the dissipating impulse: bring the
  // interaction-axis momentum from m*v_i to zero over the window.
  const double m_eff = effective_mass(state);
  const double impulse_total = gains_.impact_kvf * m_eff * (0.0 - entry_velocity);
  const double force = impulse_total / setpoints_.impact_window;

  const double v_n = dir_.dot(state.op_velocity(inert_.arm_offset));
  const bool spent = elapsed >= setpoints_.impact_window;
  const bool settled = std::abs(v_n) < 0.02 * std::abs(entry_velocity);
  const bool trivial = std::abs(entry_velocity) < 1e-9;
  const bool done = trivial || spent || settled;

  return {hold_and_compose(state, done ? 0.0 : force, dt), done};
}

Vec6 HybridController::contact_command(const RigidBodyState& state,
                                       double sensed_force, double dt) {
  if (inspection_mode_) {
    // Coast: leave the interaction axis unforced so the rebound that the
    // estimators need is not fought by the force loop.
    return hold_and_compose(state, 0.0, dt);
  }
  const double err = setpoints_.force_setpoint - sensed_force;
  force_integrator_ = clamp(force_integrator_ + err * dt,
                            -gains_.force_integrator_limit,
                            gains_.force_integrator_limit);
  const double force = setpoints_.force_setpoint + gains_.force_kp * err +
                       gains_.force_ki * force_integrator_;
  return hold_and_compose(state, force, dt);
}

void HybridController::transition_to(Phase next, double t) {
  if (!legal_transition(phase_, next)) {
    throw IllegalTransition(std::string(phase_name(phase_)) + " -> " +
                            phase_name(next));
  }
  phase_ = next;
  entry_time_ = t;
  if (next == Phase::contact) {
    force_integrator_ = 0.0;
    contact_entry_time_ = t;
    separation_time_ = -1.0;
  }
  if (next == Phase::impact || next == Phase::retreat) {
    have_prev_vel_error_ = false;
  }
}

Phase HybridController::update_phase(double sensed_force, double v_normal,
                                     double gap, double t) {
  switch (phase_) {
    case Phase::approach:
      if (sensed_force > setpoints_.force_threshold_on) {
        entry_velocity_ = v_normal;
        transition_to(Phase::impact, t);
      }
      break;
    case Phase::impact: {
      const bool spent = (t - entry_time_) >= setpoints_.impact_window;
      const bool settled = std::abs(v_normal) < 0.02 * std::abs(entry_velocity_);
      const bool trivial = std::abs(entry_velocity_) < 1e-9;
      if (trivial || spent || settled) transition_to(Phase::contact, t);
      break;
    }
    case Phase::contact:
      if (inspection_mode_) {
        if (sensed_force < setpoints_.force_threshold_off()) {
          if (separation_time_ < 0.0) separation_time_ = t;
          if (t - separation_time_ >= setpoints_.measure_window) {
            transition_to(Phase::retreat, t);
          }
        } else {
          separation_time_ = -1.0;
        }
      } else if (t - entry_time_ >= setpoints_.contact_duration) {
        transition_to(Phase::retreat, t);
      }
      break;
    case Phase::retreat:
      if (gap >= setpoints_.retreat_standoff ||
          t - entry_time_ >= setpoints_.retreat_timeout) {
        task_complete_ = true;
      }
      break;
  }
  return phase_;
}

Vec6 HybridController::tick(const RigidBodyState& state, double sensed_force,
                            double dt) {
  const Vec3 op = state.op_point(inert_.arm_offset);
  const double gap = std::max(0.0, (op - surface_.plane_point).dot(surface_.normal));
  const double v_n = dir_.dot(state.op_velocity(inert_.arm_offset));
  update_phase(sensed_force, v_n, gap, state.time);

  switch (phase_) {
    case Phase::approach:
      return approach_command(state, +1.0, dt);
    case Phase::impact:
      return impact_command(state, entry_velocity_, state.time - entry_time_, dt)
          .first;
    case Phase::contact:
      return contact_command(state, sensed_force, dt);
    case Phase::retreat: {
      double force =
          velocity_law_force(state, -setpoints_.approach_velocity, dt);
      // Breakaway pulse: one impulse-style kick during the first window so
      // separation does not stall against residual adhesion or integrators.
      const double elapsed = state.time - entry_time_;
      if (elapsed < setpoints_.impact_window) {
        const double pulse_total = gains_.impact_kvf * effective_mass(state) *
                                   (-setpoints_.approach_velocity);
        force += pulse_total / setpoints_.impact_window;
      }
      return hold_and_compose(state, force, dt);
    }
  }
  return Vec6::Zero();
}

}  // namespace canthex
