#include "canthex/plot_export.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "canthex/errors.hpp"

namespace canthex {

namespace {

struct SeriesSpec {
  const char* name;
  const char* column;
};

struct PresetSpec {
  const char* name;
  std::vector<SeriesSpec> series;
};

// fig7: interaction-axis position / velocity / sensed force triple.
// fig8: in-plane hold — lateral position and altitude.
// fig9: same triple as fig7 (the soft-surface counterpart; the preset is the
// view, the scenario supplies the surface).
const std::vector<PresetSpec>& presets() {
  static const std::vector<PresetSpec> table = {
      {"fig7",
       {{"position_normal", "gap_normal"},
        {"velocity_normal", "vel_normal"},
        {"force", "force_sensed"}}},
      {"fig8", {{"position_x", "pos_x"}, {"altitude", "pos_z"}}},
      {"fig9",
       {{"position_normal", "gap_normal"},
        {"velocity_normal", "vel_normal"},
        {"force", "force_sensed"}}},
  };
  return table;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::vector<std::string> plot_presets() {
  std::vector<std::string> names;
  for (const auto& p : presets()) names.push_back(p.name);
  return names;
}

PlotBundle export_plot_data(const TrajectoryLog& log, const std::string& preset,
                            const std::vector<std::string>& selection) {
  const PresetSpec* spec = nullptr;
  for (const auto& p : presets()) {
    if (preset == p.name) {
      spec = &p;
      break;
    }
  }
  if (!spec) throw UnknownSeries("no preset named " + preset);

  for (const auto& wanted : selection) {
    const bool known = std::any_of(
        spec->series.begin(), spec->series.end(),
        [&](const SeriesSpec& s) { return wanted == s.name; });
    if (!known) {
      throw UnknownSeries("preset " + preset + " has no series " + wanted);
    }
  }

  PlotBundle bundle;
  bundle.preset = preset;
  const auto t = log.column("t");
  for (const auto& s : spec->series) {
    if (!selection.empty() &&
        std::find(selection.begin(), selection.end(), s.name) == selection.end()) {
      continue;
    }
    PlotSeries series;
    series.name = s.name;
    series.source = s.column;
    series.t = t;
    series.values = log.column(s.column);
    bundle.series.push_back(std::move(series));
  }

  // Phase boundaries straight from the log so the export stands alone.
  if (log.has_column("phase") && log.row_count() > 1) {
    const auto phase = log.column("phase");
    for (std::size_t i = 1; i < phase.size(); ++i) {
      if (phase[i] != phase[i - 1]) {
        bundle.markers.push_back(
            {t[i], static_cast<int>(phase[i - 1]), static_cast<int>(phase[i])});
      }
    }
  }
  return bundle;
}

std::vector<std::string> write_plot_bundle(const PlotBundle& bundle,
                                           const std::string& directory) {
  std::filesystem::create_directories(directory);
  std::vector<std::string> written;
  for (const auto& series : bundle.series) {
    const std::string name = bundle.preset + "_" + series.name + ".csv";
    const std::string path = directory + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LogFormatError("cannot open " + path + " for writing");
    out << "t," << series.name << "\n";
    for (std::size_t i = 0; i < series.t.size(); ++i) {
      out << format_value(series.t[i]) << "," << format_value(series.values[i])
          << "\n";
    }
    written.push_back(name);
  }

  if (!bundle.series.empty()) {
    const std::string name = bundle.preset + "_markers.csv";
    const std::string path = directory + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LogFormatError("cannot open " + path + " for writing");
    out << "time,from_phase,to_phase\n";
    for (const auto& m : bundle.markers) {
      out << format_value(m.time) << "," << m.from_phase << "," << m.to_phase
          << "\n";
    }
    written.push_back(name);
  }
  return written;
}

}  // namespace canthex
