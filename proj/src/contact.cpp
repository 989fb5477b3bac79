#include "canthex/contact.hpp"

#include <cmath>

#include "canthex/errors.hpp"

namespace canthex {

void SurfaceModel::validate() const {
  if (std::abs(normal.norm() - 1.0) > 1e-9)
    throw ConfigError("surface normal must be unit length");
  if (stiffness <= 0.0) throw ConfigError("surface stiffness must be positive");
  if (restitution <= 0.0 || restitution > 1.0)
    throw ConfigError("restitution must lie in (0, 1]");
  if (friction < 0.0) throw ConfigError("friction must be non-negative");
}

void EndEffectorModel::validate() const {
  if (tool_stiffness <= 0.0) throw ConfigError("tool stiffness must be positive");
  if (sensor_noise_sigma < 0.0) throw ConfigError("sensor noise sigma must be non-negative");
  if (std::abs(sensor_axis.norm() - 1.0) > 1e-9)
    throw ConfigError("sensor axis must be unit length");
}

double series_stiffness(double tool_k, double environment_k) {
  return tool_k * environment_k / (tool_k + environment_k);
}

double clamped_rebound_ratio(double zeta) {
  if (zeta <= 0.0) return 1.0;
  if (zeta >= 1.0) return 0.0;
  // Normalized oscillator x'' + 2 zeta x' + x = 0, x(0)=0, x'(0)=1 (into the
  // spring). Contact force ~ x + 2 zeta x' reaches zero at t_c; the body then
  // coasts out at constant speed, so |x'(t_c)| is the rebound ratio.
  const double wd = std::sqrt(1.0 - zeta * zeta);
  const double tc = (kPi - std::atan2(2.0 * zeta * wd, 1.0 - 2.0 * zeta * zeta)) / wd;
  const double xdot = std::exp(-zeta * tc) *
                      (std::cos(wd * tc) - (zeta / wd) * std::sin(wd * tc));
  return std::abs(xdot);
}

double restitution_to_damping(double restitution, double effective_mass,
                              double series_k) {
  if (restitution <= 0.0 || restitution > 1.0)
    throw ConfigError("restitution must lie in (0, 1]");
  if (effective_mass <= 0.0 || series_k <= 0.0)
    throw ConfigError("mass and stiffness must be positive");
  if (restitution >= 1.0) return 0.0;

  // clamped_rebound_ratio decreases monotonically in zeta; bisect.
  double lo = 0.0, hi = 0.999999;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (clamped_rebound_ratio(mid) > restitution)
      lo = mid;
    else
      hi = mid;
  }
  const double zeta = 0.5 * (lo + hi);
  return 2.0 * zeta * std::sqrt(series_k * effective_mass);
}

ContactModel::ContactModel(const SurfaceModel& surface, const EndEffectorModel& tool,
                           double effective_mass)
    : surface_(surface), tool_(tool) {
  surface_.validate();
  tool_.validate();
  series_k_ = series_stiffness(tool_.tool_stiffness, surface_.stiffness);
  damping_ = restitution_to_damping(surface_.restitution, effective_mass, series_k_);
}

ContactReport ContactModel::evaluate(const Vec3& op_position, const Vec3& op_velocity,
                                     const Mat3& rotation, GaussianRng& rng) const {
  ContactReport report;
  const Vec3 n = surface_.normal;
  const double penetration = (surface_.plane_point - op_position).dot(n);

  if (penetration > 0.0) {
    report.in_contact = true;
    report.penetration = penetration;
    const double pen_rate = -op_velocity.dot(n);
    report.normal_force = std::max(0.0, series_k_ * penetration + damping_ * pen_rate);
    report.force_world = report.normal_force * n;

    if (surface_.friction > 0.0 && report.normal_force > 0.0) {
      const Vec3 v_t = op_velocity - op_velocity.dot(n) * n;
      const double speed = v_t.norm();
      if (speed > 1e-12) {
        // Regularized Coulomb: linear below v_ref, capped at mu * Fn above.
        const double v_ref = 0.01;
        const double scale = std::min(speed / v_ref, 1.0);
        report.force_world -= surface_.friction * report.normal_force * scale *
                              (v_t / speed);
      }
    }
  }

  const Vec3 sensor_axis_world = rotation * tool_.sensor_axis;
  const double alignment = -sensor_axis_world.dot(n); // compression positive
  report.sensed_force = report.normal_force * alignment +
                        rng.normal(tool_.sensor_noise_sigma);
  return report;
}

}  // namespace canthex
