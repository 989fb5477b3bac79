#include "canthex/dynamics.hpp"

#include <cmath>

#include "canthex/errors.hpp"

namespace canthex {

void InertialModel::validate() const {
  if (mass <= 0.0) throw ConfigError("mass must be positive");
  if ((inertia_diag.array() <= 0.0).any())
    throw ConfigError("inertia diagonal must be positive");
  if (!arm_offset.allFinite() || !gravity.allFinite())
    throw ConfigError("inertial vectors must be finite");
}

Mat6 InertialModel::generalized_inertia() const {
  Mat6 a = Mat6::Zero();
  a.topLeftCorner<3, 3>() = mass * Mat3::Identity();
  a.bottomRightCorner<3, 3>() = inertia_diag.asDiagonal();
  return a;
}

Vec3 RigidBodyState::euler_rpy() const {
  const Mat3 r = rotation();
  const double pitch = std::asin(clamp(-r(2, 0), -1.0, 1.0));
  const double roll = std::atan2(r(2, 1), r(2, 2));
  const double yaw = std::atan2(r(1, 0), r(0, 0));
  return Vec3(roll, pitch, yaw);
}

Vec3 RigidBodyState::op_point(const Vec3& arm_offset_body) const {
  return position + rotation() * arm_offset_body;
}

Vec3 RigidBodyState::op_velocity(const Vec3& arm_offset_body) const {
  return velocity + rotation() * angular_velocity.cross(arm_offset_body);
}

bool RigidBodyState::finite() const {
  return position.allFinite() && velocity.allFinite() &&
         angular_velocity.allFinite() && orientation.coeffs().allFinite() &&
         std::isfinite(time);
}

RigidBodyState step(const RigidBodyState& state, const Vec6& body_wrench,
                    const Vec6& external_wrench_world, const InertialModel& inert,
                    double dt) {
  const Mat3 r = state.rotation();
  const Vec3 inertia = inert.inertia_diag;

  const Vec3 force_world = r * body_wrench.head<3>() +
                           external_wrench_world.head<3>() +
                           inert.mass * inert.gravity;
  const Vec3 j_omega = inertia.cwiseProduct(state.angular_velocity);
  const Vec3 torque_body = body_wrench.tail<3>() +
                           r.transpose() * external_wrench_world.tail<3>() -
                           state.angular_velocity.cross(j_omega);

  RigidBodyState next = state;
  // Semi-implicit Euler: velocities first, then configuration with the
  // updated velocities. Preserves the energy-accounting identity tested
  // against midpoint power.
  next.velocity += dt * force_world / inert.mass;
  next.position += dt * next.velocity;
  next.angular_velocity += dt * torque_body.cwiseQuotient(inertia);

  const double angle = next.angular_velocity.norm() * dt;
  if (angle > 0.0) {
    const Vec3 axis = next.angular_velocity.normalized();
    next.orientation = state.orientation * Quat(Eigen::AngleAxisd(angle, axis));
  }
  next.orientation.normalize();
  next.time += dt;

  if (!next.finite())
    throw NonFiniteState("non-finite state at t=" + std::to_string(next.time));
  return next;
}

Vec6 coriolis_centrifugal(const RigidBodyState& state, const InertialModel& inert) {
  const Vec3 j_omega = inert.inertia_diag.cwiseProduct(state.angular_velocity);
  return make_wrench(Vec3::Zero(), state.angular_velocity.cross(j_omega));
}

Mat6 operational_inertia(const RigidBodyState& state, const InertialModel& inert) {
  const Mat3 r = state.rotation();
  const Vec3 rho_w = r * inert.arm_offset;

  Mat6 a_inv = Mat6::Zero();
  a_inv.topLeftCorner<3, 3>() = Mat3::Identity() / inert.mass;
  a_inv.bottomRightCorner<3, 3>() =
      r * inert.inertia_diag.cwiseInverse().asDiagonal() * r.transpose();

  Mat6 jac = Mat6::Identity();
  jac.topRightCorner<3, 3>() = -skew(rho_w);

  return (jac * a_inv * jac.transpose()).inverse();
}

}  // namespace canthex
