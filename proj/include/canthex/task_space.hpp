#pragma once

#include "canthex/types.hpp"

namespace canthex {

/// Binary axis selection for the hybrid task. sigma_f marks motion-controlled
/// translation axes with 1; the complement (the interaction direction) is
/// handled by the force/velocity/impulse law. sigma_tau does the same for the
/// rotational axes (all motion-controlled in the shipped scenarios). The
/// rotations let the selection act in a frame other than the world axes.
struct TaskSpec {
  Vec3 sigma_f = Vec3(1.0, 0.0, 1.0);
  Vec3 sigma_tau = Vec3(1.0, 1.0, 1.0);
  Mat3 rotation_f = Mat3::Identity();
  Mat3 rotation_tau = Mat3::Identity();
};

/// Complementary orthogonal projectors onto the motion- and
/// interaction-controlled subspaces: omega + omega_bar == I.
struct Selection {
  Mat6 omega = Mat6::Zero();
  Mat6 omega_bar = Mat6::Zero();
};

/// Throws InvalidSpec for sigma entries outside {0,1} or non-orthonormal
/// rotations.
Selection build_selection(const TaskSpec& spec);

/// Moves a wrench applied at the operational point to the body origin, both
/// expressed in the same axes; the moment arm rho points from the origin to
/// the operational point. Force is unchanged, torque picks up rho x f.
Vec6 op_to_com_wrench(const Vec6& wrench_op, const Vec3& rho);

/// Re-expresses a world wrench at the body origin as the equivalent wrench at
/// the operational point in operational axes. `rotation` maps operational
/// axes to world axes, `rho_world` points origin -> operational point in
/// world axes. Inverse of op_to_com_wrench composed with the axes rotation.
Vec6 world_to_op_wrench(const Vec6& wrench_world, const Mat3& rotation,
                        const Vec3& rho_world);

}  // namespace canthex
