#pragma once

#include <array>

#include "canthex/types.hpp"

namespace canthex {

/// Geometry of the canted coplanar hexrotor. Rotor i sits at azimuth
/// rotor_angles[i] on a circle of `radius`, its thrust axis tilted off
/// vertical by `cant_angle` about the radial direction. Adjacent rotors tilt
/// and spin in opposite directions (spin_signs alternate); that alternation is
/// what makes the wrench map full rank for any positive cant angle.
struct ActuatorGeometry {
  double radius = 0.25;                 // boom length [m]
  double cant_angle = deg_to_rad(25.0); // tilt off vertical [rad]
  double thrust_coefficient = 1.2e-5;   // thrust per squared speed [N s^2]
  double torque_coefficient = 2.0e-7;   // drag torque per squared speed [N m s^2]
  double rotor_speed_max = 900.0;       // [rad/s]
  std::array<double, 6> rotor_angles{}; // azimuths [rad], 60 deg spacing
  std::array<int, 6> spin_signs{};      // +1/-1, alternating

  ActuatorGeometry();

  double omega_sq_max() const { return rotor_speed_max * rotor_speed_max; }

  /// Throws ConfigError when an invariant is broken (spacing, signs, ranges).
  void validate() const;
};

/// Linear map from squared rotor speeds to the body wrench, plus diagnostics.
struct MixingMatrix {
  Mat6 entries = Mat6::Zero();
  double condition_number = 0.0;
  int rank = 0;
};

struct RotorCommand {
  Vec6 squared_speeds = Vec6::Zero(); // [rad^2/s^2], non-negative
  bool saturated = false;             // any element was clamped to [0, max]
};

MixingMatrix build_mixing_matrix(const ActuatorGeometry& geom);

/// Forward map: body wrench produced by the given squared speeds.
Vec6 wrench_from_speeds(const MixingMatrix& mix, const RotorCommand& cmd);

/// Inverse map with box clamping. Throws SingularMixing when rank < 6.
RotorCommand speeds_from_wrench(const MixingMatrix& mix, const Vec6& wrench,
                                double omega_sq_max);

/// Grid sweep options for the cant-angle trade study.
struct CantSweep {
  double lateral_target = 6.0;        // required lateral force at hover [N]
  double hover_weight = 25.9;         // design gross weight the envelope is sized for [N]
  double alpha_min = 0.0;             // [rad]
  double alpha_max = deg_to_rad(45.0);
  double step = deg_to_rad(0.5);
};

/// Max lateral force along the arm axis (+y) while holding the hover wrench,
/// all rotors inside [0, omega_sq_max]. Returns 0 when hover itself is
/// infeasible or the matrix is singular at this angle.
double lateral_capacity(const ActuatorGeometry& geom, double cant_angle,
                        double hover_weight);

/// Total thrust with every rotor at the speed limit (pure lift by symmetry).
double lift_capacity(const ActuatorGeometry& geom, double cant_angle);

/// Smallest swept angle whose hover envelope reaches the lateral target; since
/// lift falls monotonically with cant angle this is also the lift-optimal
/// feasible angle. Throws Infeasible when no angle in range qualifies.
double optimize_cant_angle(const ActuatorGeometry& geom, const CantSweep& sweep);

}  // namespace canthex
