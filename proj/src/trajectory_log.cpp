#include "canthex/trajectory_log.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "canthex/errors.hpp"

namespace canthex {

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

std::vector<double> SimSample::to_row() const {
  std::vector<double> row;
  row.reserve(39);
  row.push_back(t);
  for (int i = 0; i < 3; ++i) row.push_back(position[i]);
  for (int i = 0; i < 3; ++i) row.push_back(rpy[i]);
  for (int i = 0; i < 3; ++i) row.push_back(velocity[i]);
  for (int i = 0; i < 3; ++i) row.push_back(omega_body[i]);
  for (int i = 0; i < 3; ++i) row.push_back(op_position[i]);
  for (int i = 0; i < 3; ++i) row.push_back(op_velocity[i]);
  row.push_back(vel_normal);
  row.push_back(gap_normal);
  row.push_back(force_sensed);
  row.push_back(in_contact ? 1.0 : 0.0);
  row.push_back(penetration);
  row.push_back(force_normal);
  row.push_back(static_cast<double>(phase));
  for (int i = 0; i < 6; ++i) row.push_back(rotor_sq[i]);
  row.push_back(saturated ? 1.0 : 0.0);
  for (int i = 0; i < 6; ++i) row.push_back(command[i]);
  return row;
}

const std::vector<std::string>& TrajectoryLog::canonical_columns() {
  static const std::vector<std::string> cols = {
      "t",
      "pos_x", "pos_y", "pos_z",
      "roll", "pitch", "yaw",
      "vel_x", "vel_y", "vel_z",
      "omega_x", "omega_y", "omega_z",
      "op_x", "op_y", "op_z",
      "op_vx", "op_vy", "op_vz",
      "vel_normal", "gap_normal", "force_sensed",
      "in_contact", "penetration", "force_normal",
      "phase",
      "rotor_sq_1", "rotor_sq_2", "rotor_sq_3",
      "rotor_sq_4", "rotor_sq_5", "rotor_sq_6",
      "saturated",
      "cmd_fx", "cmd_fy", "cmd_fz", "cmd_tx", "cmd_ty", "cmd_tz",
  };
  return cols;
}

TrajectoryLog::TrajectoryLog() : columns_(canonical_columns()) {}

TrajectoryLog::TrajectoryLog(LogHeader header)
    : header_(std::move(header)), columns_(canonical_columns()) {}

void TrajectoryLog::append(const SimSample& sample) { append_row(sample.to_row()); }

void TrajectoryLog::append_row(const std::vector<double>& row) {
  if (row.size() != columns_.size()) {
    throw LogFormatError("row has " + std::to_string(row.size()) +
                         " values, schema has " + std::to_string(columns_.size()));
  }
  rows_.push_back(row);
}

int TrajectoryLog::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return static_cast<int>(i);
  }
  throw LogFormatError("no column named " + name);
}

bool TrajectoryLog::has_column(const std::string& name) const {
  for (const auto& c : columns_) {
    if (c == name) return true;
  }
  return false;
}

double TrajectoryLog::at(std::size_t row, const std::string& name) const {
  return rows_.at(row).at(static_cast<std::size_t>(column_index(name)));
}

std::vector<double> TrajectoryLog::column(const std::string& name) const {
  const auto idx = static_cast<std::size_t>(column_index(name));
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[idx]);
  return out;
}

void TrajectoryLog::write(std::ostream& out) const {
  out << "# schema=" << header_.schema << "\n";
  out << "# scenario=" << header_.scenario << "\n";
  out << "# config_hash=" << header_.config_hash << "\n";
  out << "# seed=" << header_.seed << "\n";
  out << "# dt=" << format_value(header_.dt) << "\n";
  out << "# columns=";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out << ",";
    out << columns_[i];
  }
  out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << format_value(row[i]);
    }
    out << "\n";
  }
}

void TrajectoryLog::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary); // fixed newlines on any platform
  if (!out) throw LogFormatError("cannot open " + path + " for writing");
  write(out);
}

std::string TrajectoryLog::to_string() const {
  std::ostringstream ss;
  write(ss);
  return ss.str();
}

TrajectoryLog TrajectoryLog::read(std::istream& in) {
  TrajectoryLog log;
  log.columns_.clear();
  std::string line;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body = body.substr(1);
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      if (key == "schema") {
        log.header_.schema = value;
      } else if (key == "scenario") {
        log.header_.scenario = value;
      } else if (key == "config_hash") {
        log.header_.config_hash = value;
      } else if (key == "seed") {
        log.header_.seed = std::strtoull(value.c_str(), nullptr, 10);
      } else if (key == "dt") {
        log.header_.dt = std::strtod(value.c_str(), nullptr);
      } else if (key == "columns") {
        log.columns_ = split(value, ',');
        have_columns = true;
      }
      continue;
    }
    if (!have_columns) throw LogFormatError("data before columns header");
    const auto fields = split(line, ',');
    if (fields.size() != log.columns_.size()) {
      throw LogFormatError("row " + std::to_string(log.rows_.size()) + " has " +
                           std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(log.columns_.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (end == f.c_str()) throw LogFormatError("unparseable value '" + f + "'");
      row.push_back(v);
    }
    log.rows_.push_back(std::move(row));
  }
  if (!have_columns) throw LogFormatError("missing columns header");
  return log;
}

TrajectoryLog TrajectoryLog::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LogFormatError("cannot open " + path);
  return read(in);
}

}  // namespace canthex
