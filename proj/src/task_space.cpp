#include "canthex/task_space.hpp"

#include <cmath>

#include "canthex/errors.hpp"

namespace canthex {

namespace {

void check_binary(const Vec3& sigma, const char* name) {
  for (int i = 0; i < 3; ++i) {
    if (sigma(i) != 0.0 && sigma(i) != 1.0)
      throw InvalidSpec(std::string(name) + " entries must be exactly 0 or 1");
  }
}

void check_orthonormal(const Mat3& r, const char* name) {
  if ((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9)
    throw InvalidSpec(std::string(name) + " must be orthonormal");
}

Mat3 projector(const Mat3& rotation, const Vec3& sigma) {
  return rotation.transpose() * sigma.asDiagonal() * rotation;
}

}  // namespace

Selection build_selection(const TaskSpec& spec) {
  check_binary(spec.sigma_f, "sigma_f");
  check_binary(spec.sigma_tau, "sigma_tau");
  check_orthonormal(spec.rotation_f, "rotation_f");
  check_orthonormal(spec.rotation_tau, "rotation_tau");

  const Vec3 ones = Vec3::Ones();
  Selection sel;
  sel.omega.topLeftCorner<3, 3>() = projector(spec.rotation_f, spec.sigma_f);
  sel.omega.bottomRightCorner<3, 3>() = projector(spec.rotation_tau, spec.sigma_tau);
  sel.omega_bar.topLeftCorner<3, 3>() = projector(spec.rotation_f, ones - spec.sigma_f);
  sel.omega_bar.bottomRightCorner<3, 3>() =
      projector(spec.rotation_tau, ones - spec.sigma_tau);
  return sel;
}

Vec6 op_to_com_wrench(const Vec6& wrench_op, const Vec3& rho) {
  const Vec3 f = wrench_op.head<3>();
  const Vec3 t = wrench_op.tail<3>();
  return make_wrench(f, t + rho.cross(f));
}

Vec6 world_to_op_wrench(const Vec6& wrench_world, const Mat3& rotation,
                        const Vec3& rho_world) {
  const Vec3 f_w = wrench_world.head<3>();
  const Vec3 t_w = wrench_world.tail<3>();
  const Mat3 r_t = rotation.transpose();
  return make_wrench(r_t * f_w, r_t * (t_w - rho_world.cross(f_w)));
}

}  // namespace canthex
