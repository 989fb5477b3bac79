#pragma once

#include <string>
#include <vector>

#include "canthex/inspection.hpp"
#include "canthex/scenario.hpp"
#include "canthex/sim.hpp"

namespace canthex {

struct CampaignCell {
  int index = 0;
  std::string name;          // "<base>_<surface>_v<velocity>_t<trial>"
  std::string surface_label;
  double approach_velocity = 0.0;
  int trial = 0;             // 1-based within a surface
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure; // non-empty when the cell raised an error
  RunResult result;
  bool estimate_valid = false;
  SurfaceEstimate estimate;
};

struct CampaignResult {
  std::vector<CampaignCell> cells;
  std::vector<SurfaceEstimate> estimates; // successful cells, campaign order
  std::string estimates_table;            // delimited text, Table-1 layout
  bool has_classification = false;
  ClassificationReport classification;
};

/// Runs the scenario's campaign grid (surfaces x approach velocities x
/// trials). A config without a campaign block degenerates to a single cell.
/// Per-cell seeds derive deterministically from the base seed and the cell
/// index. Cell failures are captured in the report, not thrown.
CampaignResult run_campaign(const ScenarioConfig& base);

/// "trial,surface,e,K_t,K_e,deflection_stiffness" rows.
std::string render_estimates_table(const std::vector<SurfaceEstimate>& estimates);

}  // namespace canthex
