#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "canthex/types.hpp"

namespace canthex {

struct LogHeader {
  std::string schema = "canthex-log-1";
  std::string scenario;
  std::string config_hash; // scenario fingerprint, hex
  std::uint64_t seed = 0;
  double dt = 0.0;
};

/// One simulator tick, in the order of TrajectoryLog::canonical_columns().
/// Keep the two in lockstep when adding fields.
struct SimSample {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 rpy = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 omega_body = Vec3::Zero();
  Vec3 op_position = Vec3::Zero();
  Vec3 op_velocity = Vec3::Zero();
  double vel_normal = 0.0;
  double gap_normal = 0.0;
  double force_sensed = 0.0;
  bool in_contact = false;
  double penetration = 0.0;
  double force_normal = 0.0;
  int phase = -1; // -1 when no controller is active
  double rotor_sq[6] = {0, 0, 0, 0, 0, 0};
  bool saturated = false;
  Vec6 command = Vec6::Zero();

  std::vector<double> to_row() const;
};

/// Fixed-schema numeric trajectory table with a key=value comment header.
/// Serialization uses %.12g, so a written-and-reread log is bitwise stable
/// and two runs of the same scenario/seed produce identical bytes.
class TrajectoryLog {
 public:
  static const std::vector<std::string>& canonical_columns();

  TrajectoryLog();
  explicit TrajectoryLog(LogHeader header);

  const LogHeader& header() const { return header_; }
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t row_count() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  void append(const SimSample& sample);
  void append_row(const std::vector<double>& row);

  int column_index(const std::string& name) const; // LogFormatError if absent
  bool has_column(const std::string& name) const;
  double at(std::size_t row, const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
  const std::vector<double>& row(std::size_t i) const { return rows_.at(i); }

  void write(std::ostream& out) const;
  void write_file(const std::string& path) const;
  std::string to_string() const;

  static TrajectoryLog read(std::istream& in);
  static TrajectoryLog read_file(const std::string& path);

 private:
  LogHeader header_;
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace canthex
