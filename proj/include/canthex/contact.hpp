#pragma once

#include <string>

#include "canthex/rng.hpp"
#include "canthex/types.hpp"

namespace canthex {

/// Planar environment surface. `normal` is unit length and points away from
/// the material, toward free space.
struct SurfaceModel {
  std::string label = "surface";
  Vec3 plane_point = Vec3::Zero();
  Vec3 normal = Vec3(0.0, -1.0, 0.0);
  double stiffness = 750.0;    // [N/m]
  double restitution = 0.7;    // target rebound speed ratio, (0, 1]
  double friction = 0.0;       // Coulomb coefficient, dimensionless

  void validate() const;
};

/// Spring-loaded interaction tool at the arm tip with a 1-D force sensor
/// reading along sensor_axis (body frame).
struct EndEffectorModel {
  double tool_stiffness = 500.0;     // [N/m]
  double sensor_noise_sigma = 0.005; // [N]
  Vec3 sensor_axis = Vec3(0.0, 1.0, 0.0);

  void validate() const;
};

struct ContactReport {
  bool in_contact = false;
  double penetration = 0.0;    // [m], >= 0
  double normal_force = 0.0;   // [N], >= 0 (true force magnitude)
  double sensed_force = 0.0;   // [N], normal force + sensor noise
  Vec3 force_world = Vec3::Zero(); // force on the vehicle at the op point
};

/// 1/k = 1/ku + 1/ke.
double series_stiffness(double tool_k, double environment_k);

/// Rebound speed ratio of a unit mass hitting a spring-damper with damping
/// ratio zeta when the contact force is clamped non-negative (contact ends at
/// the force zero crossing, not at zero penetration). Closed form.
double clamped_rebound_ratio(double zeta);

/// Damping coefficient making a free mass rebound from the spring-damper with
/// speed ratio e, accounting for the non-negative force clamp. Inverts
/// clamped_rebound_ratio by bisection.
double restitution_to_damping(double restitution, double effective_mass,
                              double series_k);

/// Penalty contact between the op point and one surface. Precomputes the
/// series stiffness and the restitution-matched damping at construction.
class ContactModel {
 public:
  ContactModel(const SurfaceModel& surface, const EndEffectorModel& tool,
               double effective_mass);

  /// Evaluates the contact force at the op point. `rotation` maps body axes
  /// to world axes (orients the force sensor). Sensor noise is always added,
  /// in or out of contact.
  ContactReport evaluate(const Vec3& op_position, const Vec3& op_velocity,
                         const Mat3& rotation, GaussianRng& rng) const;

  double series_k() const { return series_k_; }
  double damping() const { return damping_; }
  const SurfaceModel& surface() const { return surface_; }

 private:
  SurfaceModel surface_;
  EndEffectorModel tool_;
  double series_k_ = 0.0;
  double damping_ = 0.0;
};

}  // namespace canthex
