#pragma once

// System definition files and run reports (CSV, markdown, JSON).

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "msdelay/lmi.hpp"
#include "msdelay/sdp.hpp"
#include "msdelay/stability.hpp"

namespace msdelay {

inline constexpr const char* kVersion = "0.1.0";

/// Thrown for unreadable or malformed system files.
struct SystemFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// JSON schema: {"name", "n_x", "A", "A_d", optional "tau", optional "scan": [lo, hi]}
/// with A and A_d as flat row-major arrays of n_x^2 finite numbers.
struct SystemFile {
  std::string name;
  int nx = 0;
  std::vector<double> A;
  std::vector<double> Ad;
  std::optional<int> tau;
  std::optional<std::pair<int, int>> scan;

  SystemModel model(int tau) const;
  void validate() const;
};

SystemFile parse_system(const std::string& json_text);
SystemFile load_system(const std::filesystem::path& path);
nlohmann::json to_json(const SystemFile& file);

struct RunRecord {
  int m = 1;
  std::vector<int> nus;
  int tau = 0;
  bool feasible = false;
  double margin = 0.0;
  int iterations = 0;
  int nodv = 0;
  double wall_time = 0.0;

  bool operator==(const RunRecord&) const = default;
};

struct RunReport {
  std::map<std::string, std::string> metadata;
  std::vector<RunRecord> records;

  bool operator==(const RunReport&) const = default;
};

/// Report with solver options and version filled into the metadata.
RunReport make_report(const SolverOptions& opts, const std::string& system_name = {});
RunRecord make_record(const LmiSpec& spec, int nx, const DelayPoint& point);

/// Doubles are written with 17 significant digits, so parsing reproduces them exactly.
std::string to_csv(const RunReport& report);
RunReport parse_csv(const std::string& text);
std::string to_markdown(const RunReport& report);
RunReport parse_markdown(const std::string& text);
nlohmann::json to_json(const RunReport& report);

/// Triangular table of tau_max values, rows l = 1..lmax, columns nu1 = 0..numax.
std::string hierarchy_markdown(const HierarchyTable& table);
/// One line per cell: l, nu1, tau_max, tau_min, NoDV ("none" when no delay was certified).
std::string hierarchy_csv(const HierarchyTable& table, int nx);

}  // namespace msdelay
