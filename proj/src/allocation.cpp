#include "canthex/allocation.hpp"

#include <cmath>
#include <limits>

#include "canthex/errors.hpp"

namespace canthex {

ActuatorGeometry::ActuatorGeometry() {
  for (int i = 0; i < 6; ++i) {
    rotor_angles[static_cast<size_t>(i)] = deg_to_rad(60.0 * (i + 1));
    spin_signs[static_cast<size_t>(i)] = (i % 2 == 0) ? +1 : -1;
  }
}

void ActuatorGeometry::validate() const {
  if (radius <= 0.0) throw ConfigError("rotor radius must be positive");
  if (thrust_coefficient <= 0.0) throw ConfigError("thrust coefficient must be positive");
  if (torque_coefficient <= 0.0) throw ConfigError("torque coefficient must be positive");
  if (rotor_speed_max <= 0.0) throw ConfigError("rotor speed limit must be positive");
  if (cant_angle < 0.0 || cant_angle >= kPi / 2.0)
    throw ConfigError("cant angle must lie in [0, 90) degrees");
  for (int i = 0; i < 6; ++i) {
    const size_t j = static_cast<size_t>(i);
    if (spin_signs[j] != 1 && spin_signs[j] != -1)
      throw ConfigError("spin signs must be +1 or -1");
    if (i > 0 && spin_signs[j] == spin_signs[j - 1])
      throw ConfigError("spin signs must alternate between adjacent rotors");
    if (i > 0) {
      const double gap = rotor_angles[j] - rotor_angles[j - 1];
      if (std::abs(gap - deg_to_rad(60.0)) > 1e-9)
        throw ConfigError("rotor azimuths must be 60 degrees apart");
    }
  }
}

MixingMatrix build_mixing_matrix(const ActuatorGeometry& geom) {
  geom.validate();
  const double cf = geom.thrust_coefficient;
  const double cq = geom.torque_coefficient;
  const double d = geom.radius;
  const double sa = std::sin(geom.cant_angle);
  const double ca = std::cos(geom.cant_angle);

  MixingMatrix mix;
  for (int i = 0; i < 6; ++i) {
    const size_t j = static_cast<size_t>(i);
    const double phi = geom.rotor_angles[j];
    const double s = static_cast<double>(geom.spin_signs[j]);
    const double sp = std::sin(phi);
    const double cp = std::cos(phi);
    // Lateral force terms carry the alternating tilt sign; roll/pitch terms do
    // not (tilt and spin signs cancel there); yaw carries it through the drag
    // torque. This is what keeps all six rows independent for cant > 0.
    mix.entries(0, i) = s * cf * sp * sa;
    mix.entries(1, i) = s * cf * cp * sa;
    mix.entries(2, i) = cf * ca;
    mix.entries(3, i) = sp * (cq * sa - d * cf * ca);
    mix.entries(4, i) = cp * (cq * sa - d * cf * ca);
    mix.entries(5, i) = s * (cq * ca + d * cf * sa);
  }

  Eigen::FullPivLU<Mat6> lu(mix.entries);
  mix.rank = static_cast<int>(lu.rank());

  Eigen::JacobiSVD<Mat6> svd(mix.entries);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  mix.condition_number = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  return mix;
}

Vec6 wrench_from_speeds(const MixingMatrix& mix, const RotorCommand& cmd) {
  return mix.entries * cmd.squared_speeds;
}

RotorCommand speeds_from_wrench(const MixingMatrix& mix, const Vec6& wrench,
                                double omega_sq_max) {
  if (mix.rank < 6)
    throw SingularMixing("mixing matrix rank " + std::to_string(mix.rank) +
                         " < 6; wrench not allocatable");
  RotorCommand cmd;
  cmd.squared_speeds = mix.entries.fullPivLu().solve(wrench);
  for (int i = 0; i < 6; ++i) {
    const double raw = cmd.squared_speeds(i);
    const double clamped = clamp(raw, 0.0, omega_sq_max);
    if (clamped != raw) cmd.saturated = true;
    cmd.squared_speeds(i) = clamped;
  }
  return cmd;
}

double lateral_capacity(const ActuatorGeometry& geom, double cant_angle,
                        double hover_weight) {
  ActuatorGeometry g = geom;
  g.cant_angle = cant_angle;
  MixingMatrix mix;
  try {
    mix = build_mixing_matrix(g);
  } catch (const ConfigError&) {
    return 0.0;
  }
  if (mix.rank < 6) return 0.0;

  const double cap = g.omega_sq_max();
  Vec6 hover = Vec6::Zero();
  hover(2) = hover_weight;
  Vec6 lateral_unit = Vec6::Zero();
  lateral_unit(1) = 1.0; // arm axis

  Eigen::FullPivLU<Mat6> lu(mix.entries);
  const Vec6 base = lu.solve(hover);
  const Vec6 dir = lu.solve(lateral_unit);

  for (int i = 0; i < 6; ++i)
    if (base(i) < -1e-9 || base(i) > cap + 1e-9) return 0.0; // hover infeasible

  double fmax = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 6; ++i) {
    if (dir(i) > 1e-18)
      fmax = std::min(fmax, (cap - base(i)) / dir(i));
    else if (dir(i) < -1e-18)
      fmax = std::min(fmax, -base(i) / dir(i));
  }
  return std::max(fmax, 0.0);
}

double lift_capacity(const ActuatorGeometry& geom, double cant_angle) {
  return 6.0 * geom.thrust_coefficient * std::cos(cant_angle) * geom.omega_sq_max();
}

double optimize_cant_angle(const ActuatorGeometry& geom, const CantSweep& sweep) {
  if (sweep.step <= 0.0) throw ConfigError("cant sweep step must be positive");
  if (sweep.lateral_target <= 0.0) return sweep.alpha_min; // constraint vacuous
  for (double a = sweep.alpha_min; a <= sweep.alpha_max + 1e-12; a += sweep.step) {
    if (lateral_capacity(geom, a, sweep.hover_weight) >= sweep.lateral_target)
      return a;
  }
  throw Infeasible("no cant angle in sweep range reaches the lateral target");
}

}  // namespace canthex
