#include <cmath>

#include <doctest.h>

#include "canthex/dynamics.hpp"
#include "canthex/errors.hpp"
#include "canthex/rng.hpp"

using namespace canthex;

namespace {

RigidBodyState random_state(GaussianRng& rng) {
  RigidBodyState state;
  for (int i = 0; i < 3; ++i) {
    state.position[i] = rng.normal(1.0);
    state.velocity[i] = rng.normal(0.5);
    state.angular_velocity[i] = rng.normal(0.8);
  }
  Quat q(rng.normal(1.0), rng.normal(1.0), rng.normal(1.0), rng.normal(1.0));
  q.normalize();
  state.orientation = q;
  return state;
}

}  // namespace

TEST_CASE("hover wrench is a fixed point of the integrator") {
  const InertialModel inert;
  RigidBodyState state;
  state.position = Vec3(0.0, 0.0, 0.34);

  Vec6 hover = Vec6::Zero();
  hover[2] = inert.mass * 9.81;

  RigidBodyState current = state;
  for (int i = 0; i < 2000; ++i) {
    current = step(current, hover, Vec6::Zero(), inert, 1e-3);
  }
  CHECK((current.position - state.position).norm() < 1e-12);
  CHECK(current.velocity.norm() < 1e-12);
  CHECK(current.angular_velocity.norm() < 1e-12);
  CHECK(current.time == doctest::Approx(2.0));
}

TEST_CASE("free fall matches the closed form to first order in dt") {
  const InertialModel inert;
  const double dt = 1e-3;
  RigidBodyState state;
  for (int i = 0; i < 1000; ++i) {
    state = step(state, Vec6::Zero(), Vec6::Zero(), inert, dt);
  }
  const double t = state.time;
  CHECK(t == doctest::Approx(1.0));

  // Semi-implicit Euler lands exactly g*t*dt/2 below the analytic parabola.
  const double analytic = -0.5 * 9.81 * t * t;
  const double scheme_bias = 0.5 * 9.81 * t * dt;
  CHECK(std::abs(state.position[2] - (analytic - scheme_bias)) <
        1e-9 * std::abs(analytic));
  CHECK(state.velocity[2] == doctest::Approx(-9.81 * t).epsilon(1e-12));
}

TEST_CASE("gyroscopic wrench matches a hand-computed cross product") {
  InertialModel inert;
  inert.inertia_diag = Vec3(0.1, 0.2, 0.3);
  RigidBodyState state;
  state.angular_velocity = Vec3(1.0, 2.0, 3.0);

  // w x (J w) with J w = (0.1, 0.4, 0.9):
  // (2*0.9 - 3*0.4, 3*0.1 - 1*0.9, 1*0.4 - 2*0.1) = (0.6, -0.6, 0.2)
  const Vec6 ccg = coriolis_centrifugal(state, inert);
  CHECK(ccg.head<3>().norm() < 1e-15);
  CHECK(ccg[3] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(ccg[4] == doctest::Approx(-0.6).epsilon(1e-12));
  CHECK(ccg[5] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("energy bookkeeping closes exactly at midpoint velocities") {
  // For semi-implicit Euler the discrete kinetic-energy increment equals the
  // work of the applied-plus-gravity forces evaluated at the velocity
  // midpoint, with the gyroscopic term evaluated at the old angular rate.
  // This identity holds to rounding, so it pins both the ordering of the
  // updates and the gyroscopic sign.
  const InertialModel inert;
  GaussianRng rng(5);
  const double dt = 1e-3;

  for (int trial = 0; trial < 200; ++trial) {
    const RigidBodyState before = random_state(rng);
    Vec6 body_wrench;
    Vec6 external;
    for (int i = 0; i < 6; ++i) {
      body_wrench[i] = rng.normal(3.0);
      external[i] = rng.normal(1.0);
    }

    const RigidBodyState after = step(before, body_wrench, external, inert, dt);

    const Mat3 inertia = inert.inertia_diag.asDiagonal();
    const auto kinetic = [&](const RigidBodyState& s) {
      return 0.5 * inert.mass * s.velocity.squaredNorm() +
             0.5 * s.angular_velocity.dot(inertia * s.angular_velocity);
    };

    const Mat3 rot = before.rotation();
    const Vec3 force_world = rot * body_wrench.head<3>() +
                             external.head<3>() + inert.mass * inert.gravity;
    const Vec3 torque_body = body_wrench.tail<3>() +
                             rot.transpose() * external.tail<3>() -
                             before.angular_velocity.cross(
                                 inertia * before.angular_velocity);

    const Vec3 v_mid = 0.5 * (before.velocity + after.velocity);
    const Vec3 w_mid = 0.5 * (before.angular_velocity + after.angular_velocity);
    const double work = (force_world.dot(v_mid) + torque_body.dot(w_mid)) * dt;

    const double delta = kinetic(after) - kinetic(before);
    CHECK(delta == doctest::Approx(work).epsilon(1e-10));
  }
}

TEST_CASE("orientation stays unit length over long spins") {
  const InertialModel inert;
  RigidBodyState state;
  state.angular_velocity = Vec3(2.0, -1.5, 3.0);
  Vec6 wrench = Vec6::Zero();
  wrench[2] = inert.mass * 9.81;

  for (int i = 0; i < 20000; ++i) {
    state = step(state, wrench, Vec6::Zero(), inert, 1e-3);
  }
  CHECK(std::abs(state.orientation.norm() - 1.0) < 1e-12);
  CHECK(state.finite());
}

TEST_CASE("operational inertia reduces to the rigid blocks at zero offset") {
  InertialModel inert;
  inert.arm_offset = Vec3::Zero();
  GaussianRng rng(21);
  const RigidBodyState state = random_state(rng);

  const Mat6 lambda = operational_inertia(state, inert);
  const Mat3 rot = state.rotation();
  const Mat3 inertia_world =
      rot * Mat3(inert.inertia_diag.asDiagonal()) * rot.transpose();

  CHECK((lambda.topLeftCorner<3, 3>() -
         inert.mass * Mat3::Identity()).norm() < 1e-9);
  CHECK((lambda.bottomRightCorner<3, 3>() - inertia_world).norm() < 1e-9);
  CHECK(lambda.topRightCorner<3, 3>().norm() < 1e-9);
}

TEST_CASE("operational inertia is symmetric positive definite with the arm") {
  const InertialModel inert; // 0.30 m arm along body y
  GaussianRng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const RigidBodyState state = random_state(rng);
    const Mat6 lambda = operational_inertia(state, inert);
    CHECK((lambda - lambda.transpose()).norm() < 1e-9);
    Eigen::LLT<Mat6> llt(lambda);
    CHECK(llt.info() == Eigen::Success);
  }
}

TEST_CASE("effective mass along the arm axis equals the vehicle mass") {
  // Pushing along the arm direction cannot excite rotation (rho x f == 0), so
  // the apparent inertia along that axis is exactly m.
  const InertialModel inert;
  RigidBodyState state; // identity attitude: arm along world y
  const Mat6 lambda = operational_inertia(state, inert);
  const Mat6 lambda_inv = lambda.inverse();
  Vec3 dir(0.0, 1.0, 0.0);
  const double m_eff =
      1.0 / dir.dot(lambda_inv.topLeftCorner<3, 3>() * dir);
  CHECK(m_eff == doctest::Approx(inert.mass).epsilon(1e-12));

  // Perpendicular to the arm the end point is easier to accelerate.
  Vec3 perp(0.0, 0.0, 1.0);
  const double m_perp =
      1.0 / perp.dot(lambda_inv.topLeftCorner<3, 3>() * perp);
  CHECK(m_perp < inert.mass);
}

TEST_CASE("operational kinematics follow the rigid offset") {
  RigidBodyState state;
  state.position = Vec3(1.0, 2.0, 3.0);
  state.orientation = Quat(Eigen::AngleAxisd(kPi / 2.0, Vec3::UnitZ()));
  state.velocity = Vec3(0.1, 0.0, 0.0);
  state.angular_velocity = Vec3(0.0, 0.0, 1.0);

  const Vec3 arm(0.0, 0.3, 0.0);
  const Vec3 op = state.op_point(arm);
  // Arm along body y, yawed +90 deg: world offset is (-0.3, 0, 0).
  CHECK((op - Vec3(0.7, 2.0, 3.0)).norm() < 1e-12);

  const Vec3 vel = state.op_velocity(arm);
  // v + w x r with w = +z, r = (-0.3, 0, 0): adds (0, -0.3, 0).
  CHECK((vel - Vec3(0.1, -0.3, 0.0)).norm() < 1e-12);
}

TEST_CASE("non-finite inputs are reported, not propagated") {
  const InertialModel inert;
  RigidBodyState state;
  state.velocity[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(step(state, Vec6::Zero(), Vec6::Zero(), inert, 1e-3),
                  NonFiniteState);
}

TEST_CASE("inertial model validation") {
  InertialModel inert;
  inert.mass = 0.0;
  CHECK_THROWS_AS(inert.validate(), ConfigError);

  inert = InertialModel{};
  inert.inertia_diag[1] = -0.1;
  CHECK_THROWS_AS(inert.validate(), ConfigError);
}
