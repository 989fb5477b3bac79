#pragma once

#include "canthex/types.hpp"

namespace canthex {

/// Mass properties plus the rigid arm that carries the interaction tool.
struct InertialModel {
  double mass = 2.5;                      // [kg]
  Vec3 inertia_diag = Vec3(0.12, 0.12, 0.20); // body-frame principal inertia [kg m^2]
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);   // world frame [m/s^2]
  Vec3 arm_offset = Vec3(0.0, 0.30, 0.0); // body origin -> operational point, body frame [m]

  void validate() const;

  /// Block-diagonal generalized inertia diag(m, m, m, Ix, Iy, Iz).
  Mat6 generalized_inertia() const;
};

/// Rigid-body state. Orientation is a unit quaternion (body -> world);
/// angular velocity is kept in the body frame. Euler angles are derived for
/// logging only.
struct RigidBodyState {
  Vec3 position = Vec3::Zero();       // world [m]
  Quat orientation = Quat::Identity();
  Vec3 velocity = Vec3::Zero();       // world [m/s]
  Vec3 angular_velocity = Vec3::Zero(); // body [rad/s]
  double time = 0.0;                  // [s]

  Mat3 rotation() const { return orientation.toRotationMatrix(); }
  Vec3 euler_rpy() const;             // roll, pitch, yaw (ZYX convention)
  Vec3 op_point(const Vec3& arm_offset_body) const;
  Vec3 op_velocity(const Vec3& arm_offset_body) const;
  bool finite() const;
};

/// One fixed-step semi-implicit (symplectic) Euler step. body_wrench is the
/// rotor wrench in body axes; external_wrench_world collects contact and bias
/// forces in world axes, applied at the body origin. Gravity and the
/// gyroscopic torque are handled internally. Throws NonFiniteState when the
/// result stops being finite.
RigidBodyState step(const RigidBodyState& state, const Vec6& body_wrench,
                    const Vec6& external_wrench_world, const InertialModel& inert,
                    double dt);

/// Gyroscopic wrench [0; w x (J w)] in body axes. The integrator subtracts
/// it; the controller adds it back as compensation.
Vec6 coriolis_centrifugal(const RigidBodyState& state, const InertialModel& inert);

/// Operational-space inertia at the arm tip, world axes:
/// lambda = (J A^-1 J^T)^-1 with J the rigid point-offset Jacobian and A the
/// generalized inertia with the rotational block rotated into world axes.
Mat6 operational_inertia(const RigidBodyState& state, const InertialModel& inert);

}  // namespace canthex
