#pragma once

#include <string>
#include <vector>

#include "canthex/controller.hpp"
#include "canthex/inspection.hpp"
#include "canthex/scenario.hpp"
#include "canthex/trajectory_log.hpp"

namespace canthex {

struct PhaseTransition {
  double time = 0.0;
  Phase from = Phase::approach;
  Phase to = Phase::approach;
};

struct RunResult {
  TrajectoryLog log;
  bool reached_terminal = false;
  std::string termination_reason; // task_complete | episode_complete | max_time
  std::vector<PhaseTransition> transitions;
  std::vector<ImpactEpisode> episodes; // from the streaming detector
  bool has_estimate = false;
  SurfaceEstimate estimate; // streaming estimate, when exactly one episode
};

/// Fixed-step closed-loop simulation of one scenario. Deterministic for a
/// fixed config and seed. Propagates NonFiniteState / SingularMixing with the
/// offending timestamp appended.
RunResult run_scenario(const ScenarioConfig& config);

}  // namespace canthex
