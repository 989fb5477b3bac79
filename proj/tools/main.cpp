#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "canthex/campaign.hpp"
#include "canthex/errors.hpp"
#include "canthex/hash.hpp"
#include "canthex/plot_export.hpp"
#include "canthex/rng.hpp"
#include "canthex/scenario.hpp"
#include "canthex/sim.hpp"

namespace {

using canthex::ScenarioConfig;
using nlohmann::json;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw canthex::ConfigError("cannot open " + path);
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw canthex::ConfigError(path + ": " + e.what());
  }
  return root;
}

void apply_kv_overrides(json& root, const std::vector<std::string>& sets) {
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw canthex::ConfigError("--set expects key=value, got " + kv);
    }
    canthex::apply_override(root, kv.substr(0, eq), kv.substr(eq + 1));
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

json transitions_json(const canthex::RunResult& result) {
  json out = json::array();
  for (const auto& tr : result.transitions) {
    out.push_back({{"t", tr.time},
                   {"from", canthex::phase_name(tr.from)},
                   {"to", canthex::phase_name(tr.to)}});
  }
  return out;
}

json estimate_json(const canthex::SurfaceEstimate& est) {
  return {{"trial", est.trial_id},
          {"surface", est.surface_label},
          {"e", est.restitution_e},
          {"K_t", est.stiffness_kt},
          {"K_e", est.stiffness_ke},
          {"deflection_stiffness", est.deflection_stiffness}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw canthex::ConfigError("cannot write " + path);
  out << text;
}

int cmd_run(const std::string& scenario_path, std::uint64_t seed, bool seed_set,
            const std::vector<std::string>& sets, const std::string& out_dir) {
  json root = load_json_file(scenario_path);
  apply_kv_overrides(root, sets);
  if (seed_set) canthex::apply_override(root, "seed", std::to_string(seed));
  const ScenarioConfig cfg = canthex::parse_scenario(root);

  const canthex::RunResult result = canthex::run_scenario(cfg);

  std::filesystem::create_directories(out_dir);
  const std::string log_name = cfg.name + ".log";
  result.log.write_file(out_dir + "/" + log_name);

  json manifest = {{"schema", "canthex-manifest-1"},
                   {"verb", "run"},
                   {"scenario", cfg.name},
                   {"config_hash", cfg.fingerprint},
                   {"seed", cfg.seed},
                   {"mode", canthex::run_mode_name(cfg.mode)},
                   {"reached_terminal", result.reached_terminal},
                   {"termination", result.termination_reason},
                   {"transitions", transitions_json(result)},
                   {"outputs", json::array({log_name})}};
  if (result.has_estimate) manifest["estimate"] = estimate_json(result.estimate);
  write_text(out_dir + "/manifest.json", manifest.dump(2) + "\n");

  std::cout << cfg.name << ": " << result.termination_reason << " after "
            << result.log.row_count() << " steps";
  for (const auto& tr : result.transitions) {
    std::cout << "; " << canthex::phase_name(tr.from) << "->"
              << canthex::phase_name(tr.to) << " at t=" << tr.time;
  }
  std::cout << "\n";
  if (result.has_estimate) {
    std::cout << "estimate: e=" << result.estimate.restitution_e
              << " deflection_stiffness=" << result.estimate.deflection_stiffness
              << "\n";
  }
  std::cout << "log: " << out_dir << "/" << log_name << "\n";
  return result.reached_terminal ? 0 : 1;
}

int cmd_campaign(const std::string& scenario_path, std::uint64_t seed, bool seed_set,
                 const std::vector<std::string>& sets,
                 const std::vector<std::string>& sweeps, const std::string& out_dir) {
  json base = load_json_file(scenario_path);
  apply_kv_overrides(base, sets);
  if (seed_set) canthex::apply_override(base, "seed", std::to_string(seed));

  // Each --sweep key=v1,v2,... adds a grid dimension on top of the scenario's
  // own campaign block; combos get decorrelated derived seeds.
  struct Dim {
    std::string key;
    std::vector<std::string> values;
  };
  std::vector<Dim> dims;
  for (const auto& sweep : sweeps) {
    const auto eq = sweep.find('=');
    if (eq == std::string::npos) {
      throw canthex::ConfigError("--sweep expects key=v1,v2,..., got " + sweep);
    }
    Dim dim{sweep.substr(0, eq), split_list(sweep.substr(eq + 1))};
    if (dim.values.empty()) {
      throw canthex::ConfigError("--sweep " + dim.key + " has no values");
    }
    dims.push_back(std::move(dim));
  }

  std::vector<json> combos{base};
  for (const auto& dim : dims) {
    std::vector<json> next;
    for (const auto& combo : combos) {
      for (const auto& value : dim.values) {
        json variant = combo;
        canthex::apply_override(variant, dim.key, value);
        next.push_back(std::move(variant));
      }
    }
    combos = std::move(next);
  }

  std::filesystem::create_directories(out_dir);
  const std::uint64_t base_seed = base.at("seed").get<std::uint64_t>();

  json manifest = {{"schema", "canthex-manifest-1"},
                   {"verb", "campaign"},
                   {"config_hash", canthex::hex64(canthex::fnv1a64(base.dump()))},
                   {"cells", json::array()}};
  std::vector<canthex::SurfaceEstimate> all_estimates;
  bool all_ok = true;

  for (std::size_t ci = 0; ci < combos.size(); ++ci) {
    if (combos.size() > 1) {
      canthex::apply_override(
          combos[ci], "seed",
          std::to_string(canthex::GaussianRng::derive_seed(base_seed, ci)));
    }
    const ScenarioConfig cfg = canthex::parse_scenario(combos[ci]);
    const canthex::CampaignResult campaign = canthex::run_campaign(cfg);

    for (const auto& cell : campaign.cells) {
      json cell_json = {{"name", cell.name},
                        {"surface", cell.surface_label},
                        {"approach_velocity", cell.approach_velocity},
                        {"trial", cell.trial},
                        {"seed", cell.seed},
                        {"failed", cell.failed}};
      if (cell.failed) {
        all_ok = false;
        cell_json["failure"] = cell.failure;
        std::cout << cell.name << ": FAILED (" << cell.failure << ")\n";
      } else {
        const std::string log_name = cell.name + ".log";
        cell.result.log.write_file(out_dir + "/" + log_name);
        cell_json["log"] = log_name;
        cell_json["reached_terminal"] = cell.result.reached_terminal;
        cell_json["termination"] = cell.result.termination_reason;
        if (!cell.result.reached_terminal) all_ok = false;
        if (cell.estimate_valid) cell_json["estimate"] = estimate_json(cell.estimate);
        std::cout << cell.name << ": " << cell.result.termination_reason;
        if (cell.estimate_valid) {
          std::cout << " (e=" << cell.estimate.restitution_e << ")";
        }
        std::cout << "\n";
      }
      manifest["cells"].push_back(std::move(cell_json));
    }
    all_estimates.insert(all_estimates.end(), campaign.estimates.begin(),
                         campaign.estimates.end());

    if (campaign.has_classification) {
      const auto& cls = campaign.classification;
      manifest["classification"] = {
          {"surface_a", cls.surface_a},
          {"surface_b", cls.surface_b},
          {"verdict", cls.verdict},
          {"restitution_means", {cls.restitution.mean_a, cls.restitution.mean_b}},
          {"deflection_means", {cls.deflection.mean_a, cls.deflection.mean_b}}};
      std::cout << "classification: " << cls.verdict << "\n";
    }
  }

  const std::string table = canthex::render_estimates_table(all_estimates);
  write_text(out_dir + "/estimates.csv", table);
  manifest["estimates_table"] = "estimates.csv";
  write_text(out_dir + "/manifest.json", manifest.dump(2) + "\n");
  std::cout << "estimates: " << out_dir << "/estimates.csv\n";
  return all_ok ? 0 : 1;
}

int cmd_export(const std::string& log_path, const std::string& preset,
               const std::vector<std::string>& series, const std::string& out_dir) {
  const canthex::TrajectoryLog log = canthex::TrajectoryLog::read_file(log_path);
  const canthex::PlotBundle bundle = canthex::export_plot_data(log, preset, series);
  std::filesystem::create_directories(out_dir);
  const auto files = canthex::write_plot_bundle(bundle, out_dir);
  for (const auto& f : files) std::cout << out_dir << "/" << f << "\n";
  return 0;
}

int cmd_validate(const std::string& scenario_path,
                 const std::vector<std::string>& sets) {
  json root = load_json_file(scenario_path);
  apply_kv_overrides(root, sets);
  ScenarioConfig cfg;
  try {
    cfg = canthex::parse_scenario(root);
  } catch (const canthex::ConfigError& e) {
    std::string msg = e.what();
    const std::string prefix = "config: ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    throw canthex::ConfigError(msg + " (in " + scenario_path + ")");
  }
  std::cout << "ok " << cfg.name << " " << cfg.fingerprint << " mode="
            << canthex::run_mode_name(cfg.mode) << "\n";
  return 0;
}

int cmd_calibrate(const std::string& scenario_path, const std::string& e_grid,
                  const std::string& out_dir, double tolerance) {
  const json base = load_json_file(scenario_path);
  std::ostringstream table;
  table << "configured_e,estimated_e,error\n";
  bool all_within = true;

  for (const auto& text : split_list(e_grid)) {
    json variant = base;
    canthex::apply_override(variant, "surface.restitution", text);
    const ScenarioConfig cfg = canthex::parse_scenario(variant);
    const canthex::RunResult result = canthex::run_scenario(cfg);
    if (!result.has_estimate) {
      std::cout << "e=" << text << ": no complete contact episode\n";
      all_within = false;
      continue;
    }
    const double configured = cfg.surface.restitution;
    const double estimated = result.estimate.restitution_e;
    const double error = estimated - configured;
    all_within = all_within && std::abs(error) <= tolerance;
    table << configured << "," << estimated << "," << error << "\n";
    std::cout << "e=" << configured << " -> estimated " << estimated
              << " (error " << error << ")\n";
  }

  std::filesystem::create_directories(out_dir);
  write_text(out_dir + "/calibration.csv", table.str());
  std::cout << "table: " << out_dir << "/calibration.csv\n";
  return all_within ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"canted-hexrotor interaction simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string log_path;
  std::string out_dir = "out";
  std::string preset = "fig7";
  std::string e_grid = "0.3,0.5,0.7,0.9";
  std::uint64_t seed = 0;
  double tolerance = 0.03;
  std::vector<std::string> sets;
  std::vector<std::string> sweeps;
  std::vector<std::string> series;

  auto* run = app.add_subcommand("run", "simulate one scenario");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  auto* run_seed = run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--set", sets, "dotted-key config override, key=value");

  auto* campaign = app.add_subcommand("campaign", "run a scenario's grid");
  campaign->add_option("--scenario", scenario_path, "scenario file")->required();
  auto* campaign_seed =
      campaign->add_option("--seed", seed, "override the scenario seed");
  campaign->add_option("--out", out_dir, "output directory");
  campaign->add_option("--set", sets, "dotted-key config override, key=value");
  campaign->add_option("--sweep", sweeps, "extra grid dimension, key=v1,v2,...");

  auto* exp = app.add_subcommand("export", "extract plot series from a log");
  exp->add_option("--log", log_path, "trajectory log file")->required();
  exp->add_option("--preset", preset, "fig7 | fig8 | fig9");
  exp->add_option("--series", series, "subset of the preset's series names");
  exp->add_option("--out", out_dir, "output directory");

  auto* validate = app.add_subcommand("validate-config", "parse and check a scenario");
  validate->add_option("--scenario", scenario_path, "scenario file")->required();
  validate->add_option("--set", sets, "dotted-key config override, key=value");

  auto* calibrate =
      app.add_subcommand("calibrate-contact", "ballistic restitution calibration");
  calibrate->add_option("--scenario", scenario_path, "ballistic scenario file")
      ->required();
  calibrate->add_option("--e-grid", e_grid, "comma-separated restitution values");
  calibrate->add_option("--tolerance", tolerance, "acceptance band on |error|");
  calibrate->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(scenario_path, seed, run_seed->count() > 0, sets, out_dir);
    }
    if (campaign->parsed()) {
      return cmd_campaign(scenario_path, seed, campaign_seed->count() > 0, sets,
                          sweeps, out_dir);
    }
    if (exp->parsed()) return cmd_export(log_path, preset, series, out_dir);
    if (validate->parsed()) return cmd_validate(scenario_path, sets);
    if (calibrate->parsed()) {
      return cmd_calibrate(scenario_path, e_grid, out_dir, tolerance);
    }
  } catch (const canthex::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
