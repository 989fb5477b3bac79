#pragma once

#include <string>
#include <vector>

#include "canthex/trajectory_log.hpp"
#include "canthex/types.hpp"

namespace canthex {

/// One complete touch-and-release event extracted from a trajectory.
struct ImpactEpisode {
  double t_contact = 0.0;        // first force-threshold crossing [s]
  double t_separation = 0.0;     // force fell below the release threshold [s]
  double approach_velocity = 0.0; // v_i, mean normal velocity pre-contact [m/s]
  double rebound_velocity = 0.0;  // v_f, peak post-separation speed, >= 0 [m/s]
  double contact_duration = 0.0;  // [s]
  double peak_force = 0.0;        // [N]
  double max_penetration = 0.0;   // [m]
  bool complete = false;          // rebound window closed
};

struct EpisodeConfig {
  double force_on = 0.3;        // [N] contact detection threshold
  double force_off = 0.15;      // [N] separation threshold
  double pre_window = 0.05;     // [s] averaging window for v_i
  double rebound_window = 0.2;  // [s] search window for v_f
};

/// Streaming episode extractor. Feed one sample per control tick; the same
/// object backs both the in-flight estimate and the offline batch path, so
/// the two can never disagree.
class EpisodeDetector {
 public:
  explicit EpisodeDetector(const EpisodeConfig& config = EpisodeConfig{});

  /// `v_normal` is positive toward the surface; `sensed_force` is the tool
  /// sensor reading; `penetration` >= 0 while in contact.
  void feed(double t, double v_normal, double sensed_force, double penetration);

  /// Close out a rebound still being tracked at end of data (no-op otherwise).
  void finish(double t_end);

  const std::vector<ImpactEpisode>& episodes() const { return episodes_; }
  bool has_complete_episode() const;

 private:
  enum class Tracking { idle, in_contact, rebound };

  EpisodeConfig config_;
  Tracking tracking_ = Tracking::idle;
  std::vector<ImpactEpisode> episodes_;
  ImpactEpisode current_;
  std::vector<std::pair<double, double>> approach_buffer_; // (t, v_normal)

  void begin_contact(double t, double v_normal);
  void close_rebound();
};

/// Batch extraction over a finished log. Requires exactly one complete
/// episode; throws NoEpisode or MultipleEpisodes otherwise.
ImpactEpisode detect_episode(const TrajectoryLog& log,
                             const EpisodeConfig& config = EpisodeConfig{});

/// e = |v_f| / v_i, clamped to [0, 1]. `clamped` (optional) reports whether
/// the raw ratio fell outside the physical range. Throws ZeroApproach.
double estimate_restitution(const ImpactEpisode& episode, bool* clamped = nullptr);

struct SurfaceEstimate {
  int trial_id = 0;
  std::string surface_label;
  double restitution_e = 0.0;
  double stiffness_kt = 0.0;         // rebound kinetic energy [J]
  double kinetic_approach = 0.0;     // approach kinetic energy [J]
  double stiffness_ke = 0.0;         // series-transfer estimate
  double deflection_stiffness = 0.0; // m v_i^2 / delta_max^2 [N/m]
};

/// Stiffness estimators from one episode. `tool_stiffness` is K_u. Throws
/// ZeroApproach and SeriesPole.
SurfaceEstimate estimate_stiffness(const ImpactEpisode& episode, double mass,
                                   double tool_stiffness);

struct MetricOrdering {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double pooled_sd = 0.0;
  bool strict = false;      // |mean_a - mean_b| > pooled_sd
  std::string higher;       // label of the larger mean ("" unless strict)
};

struct ClassificationReport {
  std::string surface_a;
  std::string surface_b;
  MetricOrdering restitution;
  MetricOrdering stiffness_ke;
  MetricOrdering deflection;
  std::string verdict; // "<label> harder" or "indistinguishable"
};

/// Compare two surfaces given repeated trials of each. Requires >= 2 trials
/// per surface (InsufficientTrials otherwise). Declares a surface harder only
/// when restitution and deflection stiffness agree and both separate by more
/// than one pooled standard deviation.
ClassificationReport classify_surfaces(const std::string& label_a,
                                       const std::vector<SurfaceEstimate>& trials_a,
                                       const std::string& label_b,
                                       const std::vector<SurfaceEstimate>& trials_b);

}  // namespace canthex
