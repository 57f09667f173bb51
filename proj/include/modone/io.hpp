#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modone/experiments.hpp"

namespace modone {

// Points file: header "# modone-points v1 n=<N>", then one value per line
// with 17 significant digits.
void write_points(std::ostream& os, std::span<const double> values);
std::vector<double> read_points(std::istream& is);
void save_points(const std::string& path, std::span<const double> values);
std::vector<double> load_points(const std::string& path);

inline constexpr int kSchemaVersion = 1;

struct ResultRecord {
  int schema_version = kSchemaVersion;
  std::string command;
  std::vector<std::uint64_t> seeds;
  std::optional<std::size_t> n;
  std::string window;  // descriptor, empty when the statistic has none
  std::string statistic;
  double value = 0.0;
  std::optional<double> error_bound;
  std::optional<double> standard_error;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> trial;
  std::optional<bool> pass;
  std::map<std::string, double> extra;
  std::optional<double> wall_time_ms;

  bool operator==(const ResultRecord&) const = default;
};

// One JSON object per line, fixed key order.
std::string to_json_line(const ResultRecord& r);
ResultRecord parse_record(const std::string& line);

// TrialPlan configuration, JSON:
//   {"generator": {"kind": "theorem1", "c": 1},
//    "n_schedule": [1000, 10000],
//    "windows": ["-1:1", {"intervals": [[0, 1], [0, 1]]}],
//    "trials": 20, "master_seed": 7,
//    "alpha_mode": {"kind": "uniform_range", "lo": 1, "hi": 2},
//    "retain_values": false}
// master_seed is mandatory.
TrialPlan parse_plan(const std::string& json_text);
TrialPlan load_plan(const std::string& path);
std::string plan_to_json(const TrialPlan& plan);

// Generator kinds shared by the config file and the command line.
GeneratorConfig parse_generator_kind(const std::string& kind, double alpha, double theta,
                                     unsigned base, double c);
std::string generator_kind(const GeneratorConfig& gen);

}  // namespace modone
