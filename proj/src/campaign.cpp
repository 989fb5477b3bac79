#include "canthex/campaign.hpp"

#include <cstdio>
#include <map>
#include <sstream>

#include "canthex/errors.hpp"
#include "canthex/rng.hpp"

namespace canthex {

namespace {

std::string compact_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string cell_name(const ScenarioConfig& base, const SurfaceModel& surface,
                      double velocity, int trial) {
  std::ostringstream name;
  name << base.name << "_" << surface.label << "_v" << compact_number(velocity)
       << "_t" << trial;
  return name.str();
}

}  // namespace

std::string render_estimates_table(const std::vector<SurfaceEstimate>& estimates) {
  std::ostringstream out;
  out << "trial,surface,e,K_t,K_e,deflection_stiffness\n";
  for (const auto& est : estimates) {
    out << est.trial_id << "," << est.surface_label << ","
        << compact_number(est.restitution_e) << ","
        << compact_number(est.stiffness_kt) << ","
        << compact_number(est.stiffness_ke) << ","
        << compact_number(est.deflection_stiffness) << "\n";
  }
  return out.str();
}

CampaignResult run_campaign(const ScenarioConfig& base) {
  CampaignSpec grid = base.campaign;
  if (!base.has_campaign) {
    grid.surfaces = {base.surface};
    grid.approach_velocities = {base.setpoints.approach_velocity};
    grid.trials_per_cell = 1;
  }

  CampaignResult result;
  int index = 0;
  for (const auto& surface : grid.surfaces) {
    int trial = 0;
    for (double velocity : grid.approach_velocities) {
      for (int rep = 0; rep < grid.trials_per_cell; ++rep) {
        ++trial;
        CampaignCell cell;
        cell.index = index;
        cell.surface_label = surface.label;
        cell.approach_velocity = velocity;
        cell.trial = trial;
        cell.seed = GaussianRng::derive_seed(base.seed,
                                             static_cast<std::uint64_t>(index));
        cell.name = cell_name(base, surface, velocity, trial);

        ScenarioConfig cfg = base;
        cfg.name = cell.name;
        cfg.surface = surface;
        cfg.setpoints.approach_velocity = velocity;
        cfg.seed = cell.seed;
        cfg.has_campaign = false;

        try {
          cell.result = run_scenario(cfg);
          if (cell.result.has_estimate) {
            cell.estimate = cell.result.estimate;
            cell.estimate.trial_id = trial;
            cell.estimate.surface_label = surface.label;
            cell.estimate_valid = true;
            result.estimates.push_back(cell.estimate);
          }
        } catch (const Error& e) {
          cell.failed = true;
          cell.failure = e.what();
        }

        result.cells.push_back(std::move(cell));
        ++index;
      }
    }
  }

  result.estimates_table = render_estimates_table(result.estimates);

  // Classification needs exactly two surfaces with enough trials each.
  std::map<std::string, std::vector<SurfaceEstimate>> groups;
  for (const auto& est : result.estimates) {
    groups[est.surface_label].push_back(est);
  }
  if (groups.size() == 2) {
    auto it = groups.begin();
    const auto& [label_a, trials_a] = *it;
    ++it;
    const auto& [label_b, trials_b] = *it;
    if (trials_a.size() >= 2 && trials_b.size() >= 2) {
      result.classification = classify_surfaces(label_a, trials_a, label_b, trials_b);
      result.has_classification = true;
    }
  }
  return result;
}

}  // namespace canthex
