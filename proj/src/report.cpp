#include "msdelay/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace msdelay {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  std::size_t used = 0;
  const int v = std::stoi(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

std::string join_nus(const std::vector<int>& nus) {
  std::string out;
  for (std::size_t i = 0; i < nus.size(); ++i) out += (i ? ";" : "") + std::to_string(nus[i]);
  return out;
}

std::vector<int> split_nus(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ';');) out.push_back(parse_int(item));
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

const char* kColumns[] = {"m", "nus", "tau", "feasible", "margin", "iterations", "nodv", "wall_time"};

std::vector<std::string> record_fields(const RunRecord& r) {
  return {std::to_string(r.m),          join_nus(r.nus),     std::to_string(r.tau), r.feasible ? "1" : "0",
          fmt_double(r.margin),         std::to_string(r.iterations), std::to_string(r.nodv),
          fmt_double(r.wall_time)};
}

RunRecord record_from_fields(const std::vector<std::string>& f) {
  if (f.size() != std::size(kColumns)) throw std::invalid_argument("record has " + std::to_string(f.size()) + " fields");
  RunRecord r;
  r.m = parse_int(f[0]);
  r.nus = split_nus(f[1]);
  r.tau = parse_int(f[2]);
  if (f[3] != "0" && f[3] != "1") throw std::invalid_argument("bad feasible flag '" + f[3] + "'");
  r.feasible = f[3] == "1";
  r.margin = parse_double(f[4]);
  r.iterations = parse_int(f[5]);
  r.nodv = parse_int(f[6]);
  r.wall_time = parse_double(f[7]);
  return r;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string item; std::getline(ss, item, sep);) out.push_back(trim(item));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<double> read_matrix(const json& j, const char* key, int nx) {
  if (!j.contains(key)) throw SystemFileError(std::string("missing field '") + key + "'");
  const json& arr = j.at(key);
  if (!arr.is_array()) throw SystemFileError(std::string("'") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) throw SystemFileError(std::string("'") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  if (static_cast<int>(out.size()) != nx * nx)
    throw SystemFileError(std::string("'") + key + "' must hold n_x^2 = " + std::to_string(nx * nx) + " entries");
  return out;
}

std::string cell_text(const std::optional<int>& v) { return v ? std::to_string(*v) : "none"; }

}  // namespace

void SystemFile::validate() const {
  if (nx < 1) throw SystemFileError("n_x must be positive");
  if (static_cast<int>(A.size()) != nx * nx || static_cast<int>(Ad.size()) != nx * nx)
    throw SystemFileError("A and A_d must hold n_x^2 entries");
  for (double v : A)
    if (!std::isfinite(v)) throw SystemFileError("A has a non-finite entry");
  for (double v : Ad)
    if (!std::isfinite(v)) throw SystemFileError("A_d has a non-finite entry");
  if (tau && *tau < 1) throw SystemFileError("tau must be >= 1");
  if (scan && (scan->first < 1 || scan->second < scan->first)) throw SystemFileError("scan must be [lo, hi], 1 <= lo <= hi");
}

SystemModel SystemFile::model(int delay) const {
  validate();
  SystemModel sys;
  sys.A = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(A.data(), nx, nx);
  sys.Ad = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(Ad.data(), nx, nx);
  sys.tau = delay;
  return sys;
}

SystemFile parse_system(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SystemFileError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SystemFileError("system file must be a JSON object");
  SystemFile f;
  try {
    f.name = j.value("name", std::string{});
    if (!j.contains("n_x") || !j.at("n_x").is_number_integer()) throw SystemFileError("missing integer field 'n_x'");
    f.nx = j.at("n_x").get<int>();
    if (f.nx < 1) throw SystemFileError("n_x must be positive");
    f.A = read_matrix(j, "A", f.nx);
    f.Ad = read_matrix(j, "A_d", f.nx);
    if (j.contains("tau")) {
      if (!j.at("tau").is_number_integer()) throw SystemFileError("'tau' must be an integer");
      f.tau = j.at("tau").get<int>();
    }
    if (j.contains("scan")) {
      const json& s = j.at("scan");
      if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
        throw SystemFileError("'scan' must be [lo, hi]");
      f.scan = std::pair{s[0].get<int>(), s[1].get<int>()};
    }
  } catch (const json::exception& e) {
    throw SystemFileError(std::string("malformed system file: ") + e.what());
  }
  f.validate();
  return f;
}

SystemFile load_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SystemFileError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_system(buf.str());
  } catch (const SystemFileError& e) {
    throw SystemFileError(path.string() + ": " + e.what());
  }
}

nlohmann::json to_json(const SystemFile& file) {
  json j = {{"name", file.name}, {"n_x", file.nx}, {"A", file.A}, {"A_d", file.Ad}};
  if (file.tau) j["tau"] = *file.tau;
  if (file.scan) j["scan"] = {file.scan->first, file.scan->second};
  return j;
}

RunReport make_report(const SolverOptions& opts, const std::string& system_name) {
  RunReport r;
  r.metadata["version"] = kVersion;
  r.metadata["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION);
  r.metadata["feas_tol"] = fmt_double(opts.feas_tol);
  r.metadata["duality_gap_tol"] = fmt_double(opts.duality_gap_tol);
  r.metadata["max_iterations"] = std::to_string(opts.max_iterations);
  r.metadata["trace_budget"] = fmt_double(opts.trace_budget);
  if (!system_name.empty()) r.metadata["system"] = system_name;
  return r;
}

RunRecord make_record(const LmiSpec& spec, int nx, const DelayPoint& point) {
  RunRecord r;
  r.m = spec.m();
  r.nus = spec.nus;
  r.tau = point.tau;
  r.feasible = point.result.feasible;
  r.margin = point.result.margin;
  r.iterations = point.result.iterations;
  r.nodv = nodv(nx, spec.nu1(), spec.m());
  r.wall_time = point.seconds;
  return r;
}

std::string to_csv(const RunReport& report) {
  std::string out;
  for (const auto& [k, v] : report.metadata) out += "# " + k + "=" + v + "\n";
  for (std::size_t i = 0; i < std::size(kColumns); ++i) out += std::string(i ? "," : "") + kColumns[i];
  out += "\n";
  for (const auto& r : report.records) {
    const auto f = record_fields(r);
    for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + f[i];
    out += "\n";
  }
  return out;
}

RunReport parse_csv(const std::string& text) {
  RunReport report;
  std::stringstream ss(text);
  bool header = false;
  for (std::string line; std::getline(ss, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("bad metadata line: " + line);
      report.metadata[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    if (!header) {
      if (split(line, ',') != std::vector<std::string>(std::begin(kColumns), std::end(kColumns)))
        throw std::invalid_argument("unexpected CSV header: " + line);
      header = true;
      continue;
    }
    report.records.push_back(record_from_fields(split(line, ',')));
  }
  return report;
}

std::string to_markdown(const RunReport& report) {
  std::string out;
  for (const auto& [k, v] : report.metadata) out += "- " + k + ": " + v + "\n";
  if (!report.metadata.empty()) out += "\n";
  out += "|";
  for (const char* c : kColumns) out += std::string(" ") + c + " |";
  out += "\n|";
  for (std::size_t i = 0; i < std::size(kColumns); ++i) out += "---|";
  out += "\n";
  for (const auto& r : report.records) {
    out += "|";
    for (const auto& f : record_fields(r)) out += " " + f + " |";
    out += "\n";
  }
  return out;
}

RunReport parse_markdown(const std::string& text) {
  RunReport report;
  std::stringstream ss(text);
  int table_line = 0;
  for (std::string line; std::getline(ss, line);) {
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("- ", 0) == 0) {
      const auto colon = line.find(": ");
      if (colon == std::string::npos) throw std::invalid_argument("bad metadata line: " + line);
      report.metadata[line.substr(2, colon - 2)] = line.substr(colon + 2);
      continue;
    }
    if (line.front() != '|' || line.back() != '|') throw std::invalid_argument("not a table row: " + line);
    auto cells = split(line.substr(1, line.size() - 2), '|');
    if (table_line++ < 2) continue;  // header and separator
    report.records.push_back(record_from_fields(cells));
  }
  return report;
}

nlohmann::json to_json(const RunReport& report) {
  json records = json::array();
  for (const auto& r : report.records)
    records.push_back({{"m", r.m},
                       {"nus", r.nus},
                       {"tau", r.tau},
                       {"feasible", r.feasible},
                       {"margin", r.margin},
                       {"iterations", r.iterations},
                       {"nodv", r.nodv},
                       {"wall_time", r.wall_time}});
  return {{"metadata", report.metadata}, {"records", records}};
}

std::string hierarchy_markdown(const HierarchyTable& table) {
  std::string out = "| l \\ nu1 |";
  for (int nu = 0; nu <= table.numax; ++nu) out += " " + std::to_string(nu) + " |";
  out += "\n|---|";
  for (int nu = 0; nu <= table.numax; ++nu) out += "---|";
  out += "\n";
  for (int l = 1; l <= table.lmax; ++l) {
    out += "| " + std::to_string(l) + " |";
    for (int nu = 0; nu <= table.numax; ++nu)
      out += " " + (nu >= l - 1 ? cell_text(table.tau_max(l, nu)) : std::string("")) + " |";
    out += "\n";
  }
  return out;
}

std::string hierarchy_csv(const HierarchyTable& table, int nx) {
  std::string out = "l,nu1,tau_max,tau_min,nodv\n";
  for (const auto& [key, range] : table.cells) {
    const auto [l, nu] = key;
    out += std::to_string(l) + "," + std::to_string(nu) + "," + cell_text(range.tau_max_feasible) + "," +
           cell_text(range.tau_min_feasible) + "," + std::to_string(nodv(nx, nu, l)) + "\n";
  }
  return out;
}

}  // namespace msdelay
