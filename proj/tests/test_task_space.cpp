#include <cmath>

#include <doctest.h>

#include "canthex/errors.hpp"
#include "canthex/rng.hpp"
#include "canthex/task_space.hpp"

using namespace canthex;

namespace {

Mat3 random_rotation(GaussianRng& rng) {
  // Random unit quaternion -> uniformly distributed rotation.
  Quat q(rng.normal(1.0), rng.normal(1.0), rng.normal(1.0), rng.normal(1.0));
  q.normalize();
  return q.toRotationMatrix();
}

Vec3 random_binary(GaussianRng& rng) {
  return Vec3(rng.uniform() < 0.5 ? 0.0 : 1.0, rng.uniform() < 0.5 ? 0.0 : 1.0,
              rng.uniform() < 0.5 ? 0.0 : 1.0);
}

}  // namespace

TEST_CASE("selection projectors are complementary, idempotent, orthogonal") {
  GaussianRng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    TaskSpec spec;
    spec.sigma_f = random_binary(rng);
    spec.sigma_tau = random_binary(rng);
    spec.rotation_f = random_rotation(rng);
    spec.rotation_tau = random_rotation(rng);

    const Selection sel = build_selection(spec);
    const Mat6 identity = Mat6::Identity();

    CHECK((sel.omega + sel.omega_bar - identity).norm() < 1e-12);
    CHECK((sel.omega * sel.omega_bar).norm() < 1e-12);
    CHECK((sel.omega * sel.omega - sel.omega).norm() < 1e-12);
    CHECK((sel.omega_bar * sel.omega_bar - sel.omega_bar).norm() < 1e-12);
    CHECK((sel.omega - sel.omega.transpose()).norm() < 1e-12);
  }
}

TEST_CASE("default spec selects x/z translation and all rotation") {
  const Selection sel = build_selection(TaskSpec{});
  Vec6 wrench;
  wrench << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0;
  const Vec6 motion_part = sel.omega * wrench;
  const Vec6 interaction_part = sel.omega_bar * wrench;

  CHECK(motion_part[0] == doctest::Approx(1.0));
  CHECK(motion_part[1] == doctest::Approx(0.0));
  CHECK(motion_part[2] == doctest::Approx(3.0));
  CHECK(motion_part[3] == doctest::Approx(4.0));
  CHECK(motion_part[5] == doctest::Approx(6.0));
  CHECK(interaction_part[1] == doctest::Approx(2.0));
  CHECK(interaction_part.norm() == doctest::Approx(2.0));
}

TEST_CASE("invalid specs are rejected") {
  TaskSpec spec;
  spec.sigma_f = Vec3(1.0, 0.5, 0.0);
  CHECK_THROWS_AS(build_selection(spec), InvalidSpec);

  spec = TaskSpec{};
  spec.sigma_tau = Vec3(2.0, 0.0, 0.0);
  CHECK_THROWS_AS(build_selection(spec), InvalidSpec);

  spec = TaskSpec{};
  spec.rotation_f(0, 0) = 2.0; // not orthonormal any more
  CHECK_THROWS_AS(build_selection(spec), InvalidSpec);
}

TEST_CASE("moving a wrench to the body origin adds the moment arm") {
  Vec6 wrench_op;
  wrench_op << 1.0, 2.0, 3.0, 0.0, 0.0, 0.0;
  const Vec3 rho(0.0, 0.3, 0.0);
  const Vec6 at_origin = op_to_com_wrench(wrench_op, rho);

  CHECK(at_origin.head<3>() == wrench_op.head<3>());
  // rho x f = (0.3*3 - 0, 0 - 0, 0 - 0.3*1)
  CHECK(at_origin[3] == doctest::Approx(0.9));
  CHECK(at_origin[4] == doctest::Approx(0.0));
  CHECK(at_origin[5] == doctest::Approx(-0.3));
}

TEST_CASE("existing torque passes through the lever-arm shift") {
  Vec6 wrench_op;
  wrench_op << 0.0, 0.0, 0.0, 0.1, -0.2, 0.3;
  const Vec6 at_origin = op_to_com_wrench(wrench_op, Vec3(0.5, -0.1, 0.2));
  CHECK((at_origin.tail<3>() - wrench_op.tail<3>()).norm() < 1e-15);
  CHECK(at_origin.head<3>().norm() < 1e-15);
}

TEST_CASE("world_to_op inverts the lever shift and the axes rotation") {
  GaussianRng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat3 rotation = random_rotation(rng);
    Vec6 wrench_op;
    for (int i = 0; i < 6; ++i) {
      wrench_op[i] = rng.normal(1.0);
    }
    Vec3 rho_body;
    for (int i = 0; i < 3; ++i) {
      rho_body[i] = rng.normal(0.3);
    }
    const Vec3 rho_world = rotation * rho_body;

    // Build the equivalent world wrench at the origin by hand...
    Vec6 world_at_op;
    world_at_op.head<3>() = rotation * wrench_op.head<3>();
    world_at_op.tail<3>() = rotation * wrench_op.tail<3>();
    const Vec6 world_at_origin = op_to_com_wrench(world_at_op, rho_world);

    // ...and check the library recovers the original operational wrench.
    const Vec6 recovered = world_to_op_wrench(world_at_origin, rotation, rho_world);
    CHECK((recovered - wrench_op).norm() < 1e-12);
  }
}
