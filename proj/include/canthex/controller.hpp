#pragma once

#include <utility>

#include "canthex/contact.hpp"
#include "canthex/dynamics.hpp"
#include "canthex/task_space.hpp"
#include "canthex/types.hpp"

namespace canthex {

enum class Phase { approach, impact, contact, retreat };

const char* phase_name(Phase p);
int phase_code(Phase p);

/// True when `from -> to` is an edge of the task state machine.
bool legal_transition(Phase from, Phase to);

struct GainSet {
  // Position/attitude PID, acceleration units, axes x y z roll pitch yaw.
  Vec6 pos_kp = (Vec6() << 12.0, 12.0, 12.0, 80.0, 80.0, 40.0).finished();
  Vec6 pos_ki = (Vec6() << 2.0, 2.0, 2.0, 0.0, 0.0, 0.0).finished();
  Vec6 pos_kd = (Vec6() << 7.0, 7.0, 7.0, 18.0, 18.0, 10.0).finished();
  Vec6 pos_integrator_limit =
      (Vec6() << 0.5, 0.5, 0.5, 0.2, 0.2, 0.2).finished();

  // Velocity law on the interaction axis (approach / retreat).
  double vel_kp = 6.0;
  double vel_kd = 0.02;

  // Force law on the interaction axis (contact hold).
  double force_kp = 4.0;
  double force_ki = 10.0;
  double force_integrator_limit = 0.4;

  // Feed-forward impulse scale (dimensionless).
  double impact_kvf = 0.55;

  // Interaction-axis command clamp; keeps the allocator out of saturation.
  double normal_command_limit = 5.5; // [N]

  void validate() const;
};

struct Setpoints {
  double approach_velocity = 0.2;   // [m/s], toward the surface
  double force_setpoint = 2.0;      // [N]
  double contact_duration = 6.0;    // [s]
  double force_threshold_on = 0.3;  // [N], contact detection
  double impact_window = 0.030;     // [s]
  Vec3 hold_position = Vec3(0.0, 0.0, 0.34); // interaction-axis entry ignored
  double hold_yaw = 0.0;            // [rad]
  double retreat_standoff = 0.28;   // [m] gap that ends the task
  double retreat_timeout = 5.0;     // [s]
  double measure_window = 0.25;     // [s] post-separation coast (inspection)
  double contact_lateral_drift = 0.0; // [m/s] optional overlay on the first hold axis

  double force_threshold_off() const { return 0.5 * force_threshold_on; }

  /// `noise_sigma` is the force-sensor noise; the detection threshold must
  /// clear it by a wide margin.
  void validate(double noise_sigma) const;
};

/// F = omega * motion + omega_bar * interaction + ccg.
Vec6 compose_command(const Vec6& motion, const Vec6& interaction, const Vec6& ccg,
                     const Selection& selection);

/// Three-stage interaction controller (approach, impact, contact) plus
/// retreat. Runs at the fixed simulation rate; emits a world-frame wrench at
/// the body origin. In inspection mode the contact phase coasts on the
/// interaction axis after separation so the rebound stays observable.
class HybridController {
 public:
  HybridController(const GainSet& gains, const Setpoints& setpoints,
                   const TaskSpec& task, const SurfaceModel& surface,
                   const InertialModel& inert, bool inspection_mode);

  /// One control step. `sensed_force` is the 1-D tool sensor reading.
  Vec6 tick(const RigidBodyState& state, double sensed_force, double dt);

  /// Phase bookkeeping. `v_normal` is the op-point velocity along the
  /// approach direction (positive toward the surface), `gap` the free-space
  /// distance between op point and surface. Returns the (possibly new) phase.
  Phase update_phase(double sensed_force, double v_normal, double gap, double t);

  // Individual phase laws, exposed with explicit arguments so they can be
  // exercised in isolation. Each returns the fully composed wrench at the
  // body origin in world axes (selection applied, gravity and gyroscopic
  // terms included, lever arm accounted for).
  Vec6 approach_command(const RigidBodyState& state, double velocity_sign,
                        double dt);
  std::pair<Vec6, bool> impact_command(const RigidBodyState& state,
                                       double entry_velocity, double elapsed,
                                       double dt);
  Vec6 contact_command(const RigidBodyState& state, double sensed_force, double dt);

  Phase phase() const { return phase_; }
  double phase_entry_time() const { return entry_time_; }
  double entry_velocity() const { return entry_velocity_; }
  bool task_complete() const { return task_complete_; }
  const Vec3& approach_direction() const { return dir_; }

 private:
  Vec6 hold_and_compose(const RigidBodyState& state, double interaction_force,
                        double dt);
  double velocity_law_force(const RigidBodyState& state, double velocity_setpoint,
                            double dt);
  double effective_mass(const RigidBodyState& state) const;
  void transition_to(Phase next, double t);

  GainSet gains_;
  Setpoints setpoints_;
  TaskSpec task_;
  Selection selection_;
  SurfaceModel surface_;
  InertialModel inert_;
  bool inspection_mode_ = false;

  Vec3 dir_ = Vec3(0.0, 1.0, 0.0); // unit, toward the surface
  int drift_axis_ = 0;             // first motion-held translation axis

  Phase phase_ = Phase::approach;
  double entry_time_ = 0.0;
  double entry_velocity_ = 0.0;
  bool task_complete_ = false;
  double separation_time_ = -1.0; // inspection: first time force fell away

  // Law state.
  Vec6 pos_integrator_ = Vec6::Zero();
  Vec6 prev_pos_error_ = Vec6::Zero();
  bool have_prev_pos_error_ = false;
  double prev_vel_error_ = 0.0;
  bool have_prev_vel_error_ = false;
  double force_integrator_ = 0.0;
  double contact_entry_time_ = 0.0;
};

}  // namespace canthex
