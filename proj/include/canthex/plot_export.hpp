#pragma once

#include <string>
#include <vector>

#include "canthex/trajectory_log.hpp"

namespace canthex {

struct PlotSeries {
  std::string name;         // series name in the preset ("force", ...)
  std::string source;       // log column backing it
  std::vector<double> t;
  std::vector<double> values;
};

struct PhaseMarker {
  double time = 0.0;
  int from_phase = 0;
  int to_phase = 0;
};

struct PlotBundle {
  std::string preset;
  std::vector<PlotSeries> series;
  std::vector<PhaseMarker> markers; // phase-column change points
};

/// Names of the available presets: fig7, fig8, fig9.
std::vector<std::string> plot_presets();

/// Extracts a preset's series from a log. `selection` limits the output to
/// the named subset (empty keeps the whole preset; an empty result is fine).
/// Unknown preset or series names raise UnknownSeries.
PlotBundle export_plot_data(const TrajectoryLog& log, const std::string& preset,
                            const std::vector<std::string>& selection = {});

/// Writes one delimited file per series ("<preset>_<name>.csv") plus a
/// "<preset>_markers.csv" sidecar. Returns the file names written.
std::vector<std::string> write_plot_bundle(const PlotBundle& bundle,
                                           const std::string& directory);

}  // namespace canthex
