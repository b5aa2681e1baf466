// msdelay: delay-dependent stability certificates for x(t+1) = A x(t) + A_d x(t - tau).
//
// Exit codes: 0 feasible / ok, 1 infeasible, 2 error, 3 hierarchy violation.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "msdelay/ineq.hpp"
#include "msdelay/report.hpp"
#include "msdelay/stability.hpp"

namespace {

using namespace msdelay;

constexpr int kOk = 0;
constexpr int kInfeasible = 1;
constexpr int kError = 2;
constexpr int kViolation = 3;

struct Common {
  int jobs = 1;
  bool json = false;
};

std::pair<int, int> parse_scan(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("scan must look like LO:HI, got '" + text + "'");
  std::size_t a = 0, b = 0;
  const int lo = std::stoi(text.substr(0, colon), &a);
  const int hi = std::stoi(text.substr(colon + 1), &b);
  if (a != colon || b != text.size() - colon - 1) throw std::invalid_argument("scan must look like LO:HI, got '" + text + "'");
  if (hi < lo) throw std::invalid_argument("scan range is empty: " + text);
  return {lo, hi};
}

std::pair<int, int> scan_range(const std::string& flag, const SystemFile& file) {
  if (!flag.empty()) return parse_scan(flag);
  if (file.scan) return *file.scan;
  throw std::invalid_argument("no --scan given and the system file has no scan range");
}

LmiSpec make_spec(int m, int nu1, const std::vector<int>& nus) {
  LmiSpec spec = nus.empty() ? LmiSpec::hierarchy(m, nu1) : LmiSpec{nus};
  spec.validate();
  return spec;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string nus_text(const LmiSpec& spec) {
  std::string s;
  for (std::size_t i = 0; i < spec.nus.size(); ++i) s += (i ? "," : "") + std::to_string(spec.nus[i]);
  return s;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-dependent stability analysis with multiple-summation Lyapunov-Krasovskii LMIs"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--jobs", common.jobs, "Worker threads for scans (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
  app.add_flag("--json", common.json, "Print the full run report as JSON");

  std::string system_path, scan_text, csv_path, format = "md";
  int tau = 0, m = 1, nu1 = 0, lmax = 1, numax = 0;
  std::vector<int> nus;
  double tol = SolverOptions{}.feas_tol;
  IneqSuiteOptions ineq;

  auto* certify_cmd = app.add_subcommand("certify", "Decide the LMI for one delay");
  certify_cmd->add_option("--system", system_path, "System JSON file")->required();
  certify_cmd->add_option("--tau", tau, "Delay (defaults to the file's tau)");
  certify_cmd->add_option("--m", m, "Summation multiplicity")->check(CLI::PositiveNumber);
  certify_cmd->add_option("--nu1", nu1, "Leading polynomial degree")->check(CLI::NonNegativeNumber);
  certify_cmd->add_option("--nus", nus, "Explicit descending degrees nu_1,...,nu_m")->delimiter(',');
  certify_cmd->add_option("--tol", tol, "Feasibility threshold on the margin")->check(CLI::PositiveNumber);

  auto* max_cmd = app.add_subcommand("max-delay", "Scan delays and report the largest certified one");
  max_cmd->add_option("--system", system_path, "System JSON file")->required();
  max_cmd->add_option("--m", m, "Summation multiplicity")->check(CLI::PositiveNumber);
  max_cmd->add_option("--nu1", nu1, "Leading polynomial degree")->check(CLI::NonNegativeNumber);
  max_cmd->add_option("--nus", nus, "Explicit descending degrees nu_1,...,nu_m")->delimiter(',');
  max_cmd->add_option("--scan", scan_text, "Delay range LO:HI (defaults to the file's scan)");
  max_cmd->add_option("--csv", csv_path, "Write per-delay records to this CSV file");
  max_cmd->add_option("--tol", tol, "Feasibility threshold on the margin")->check(CLI::PositiveNumber);

  auto* hier_cmd = app.add_subcommand("hierarchy", "Fill the (l, nu1) table of maximal delays");
  hier_cmd->add_option("--system", system_path, "System JSON file")->required();
  hier_cmd->add_option("--lmax", lmax, "Largest multiplicity")->check(CLI::PositiveNumber);
  hier_cmd->add_option("--numax", numax, "Largest leading degree")->check(CLI::NonNegativeNumber);
  hier_cmd->add_option("--scan", scan_text, "Delay range LO:HI (defaults to the file's scan)");
  hier_cmd->add_option("--format", format, "Table format")->check(CLI::IsMember({"md", "csv"}));
  hier_cmd->add_option("--tol", tol, "Feasibility threshold on the margin")->check(CLI::PositiveNumber);

  auto* lift_cmd = app.add_subcommand("lift", "Exact stable delay set from the lifted system");
  lift_cmd->add_option("--system", system_path, "System JSON file")->required();
  lift_cmd->add_option("--scan", scan_text, "Delay range LO:HI (defaults to 0:HI of the file's scan)");

  auto* ineq_cmd = app.add_subcommand("verify-ineq", "Randomized check of the summation inequalities");
  ineq_cmd->add_option("--trials", ineq.trials, "Trials per configuration")->check(CLI::PositiveNumber);
  ineq_cmd->add_option("--seed", ineq.seed, "Generator seed");
  ineq_cmd->add_option("--nmax", ineq.nmax, "Largest horizon N")->check(CLI::Range(1, 40));
  ineq_cmd->add_option("--mmax", ineq.mmax, "Largest multiplicity")->check(CLI::Range(1, 6));
  ineq_cmd->add_flag("--exhaustive", ineq.exhaustive, "Run --trials samples for every admissible (N, m, nu1, nu_m)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }
  if (common.jobs == 0) common.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  try {
    SolverOptions opts;
    opts.feas_tol = tol;
    opts.validate();

    if (*ineq_cmd) {
      const IneqSuiteReport rep = run_inequality_suite(ineq);
      if (common.json) {
        nlohmann::json j = {{"passed", rep.passed()}, {"failed", rep.failed()}, {"digest", rep.digest}};
        for (const auto& c : rep.checks)
          j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"failed", c.failed}, {"worst", c.worst}});
        std::cout << j.dump(2) << "\n";
      } else {
        for (const auto& c : rep.checks)
          std::cout << c.name << ": " << c.passed << " passed, " << c.failed << " failed, worst " << fmt(c.worst) << "\n";
        std::cout << "total: " << rep.passed() << " passed, " << rep.failed() << " failed (digest " << std::hex
                  << rep.digest << std::dec << ")\n";
      }
      return rep.ok() ? kOk : kInfeasible;
    }

    const SystemFile file = load_system(system_path);

    if (*certify_cmd) {
      if (certify_cmd->count("--tau") == 0) {
        if (!file.tau) throw std::invalid_argument("no --tau given and the system file has no tau");
        tau = *file.tau;
      }
      const LmiSpec spec = make_spec(m, nu1, nus);
      const SystemModel sys = file.model(tau);
      spec.validate(tau);
      DelayPoint pt;
      pt.tau = tau;
      const auto start = std::chrono::steady_clock::now();
      pt.result = certify(sys, spec, opts);
      pt.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (common.json) {
        RunReport rep = make_report(opts, file.name);
        rep.records.push_back(make_record(spec, file.nx, pt));
        std::cout << to_json(rep).dump(2) << "\n";
      } else {
        std::cout << (pt.result.feasible ? "feasible" : "infeasible") << " tau=" << tau << " nus=" << nus_text(spec)
                  << " margin=" << fmt(pt.result.margin) << " iterations=" << pt.result.iterations
                  << " status=" << to_string(pt.result.status) << (pt.result.borderline ? " (borderline)" : "")
                  << "\n";
      }
      return pt.result.feasible ? kOk : kInfeasible;
    }

    if (*max_cmd) {
      const auto [lo, hi] = scan_range(scan_text, file);
      const LmiSpec spec = make_spec(m, nu1, nus);
      const DelayRange range = max_delay(file.model(lo), spec, lo, hi, opts, common.jobs);
      RunReport rep = make_report(opts, file.name);
      for (const auto& pt : range.points)
        if (pt.admissible) rep.records.push_back(make_record(spec, file.nx, pt));
      if (!csv_path.empty()) write_file(csv_path, to_csv(rep));
      if (common.json) {
        std::cout << to_json(rep).dump(2) << "\n";
      } else {
        std::cout << "nus=" << nus_text(spec) << " scan=" << lo << ":" << hi << "\n";
        std::cout << "tau_M=" << (range.tau_max_feasible ? std::to_string(*range.tau_max_feasible) : "none") << "\n";
        if (range.has_left_edge()) std::cout << "tau_min=" << *range.tau_min_feasible << "\n";
        std::cout << "NoDV=" << nodv(file.nx, spec.nu1(), spec.m()) << "\n";
      }
      return range.tau_max_feasible ? kOk : kInfeasible;
    }

    if (*hier_cmd) {
      const auto [lo, hi] = scan_range(scan_text, file);
      const HierarchyTable table = hierarchy_table(file.model(lo), lmax, numax, lo, hi, opts, common.jobs);
      const auto bad = table.violations();
      if (common.json) {
        RunReport rep = make_report(opts, file.name);
        for (const auto& [key, range] : table.cells)
          for (const auto& pt : range.points)
            if (pt.admissible) rep.records.push_back(make_record(LmiSpec::hierarchy(key.first, key.second), file.nx, pt));
        std::cout << to_json(rep).dump(2) << "\n";
      } else {
        std::cout << (format == "csv" ? hierarchy_csv(table, file.nx) : hierarchy_markdown(table));
      }
      for (const auto& v : bad)
        std::cerr << "hierarchy violation (" << v.relation << "): (" << v.weaker.first << "," << v.weaker.second
                  << ") -> (" << v.stronger.first << "," << v.stronger.second << ")\n";
      return bad.empty() ? kOk : kViolation;
    }

    if (*lift_cmd) {
      std::pair<int, int> range;
      if (!scan_text.empty()) {
        range = parse_scan(scan_text);
      } else if (file.scan) {
        range = {0, file.scan->second};
      } else {
        throw std::invalid_argument("no --scan given and the system file has no scan range");
      }
      const LiftingScan scan = lifting_scan(file.model(1), range.first, range.second, common.jobs);
      if (common.json) {
        nlohmann::json j = {{"system", file.name}, {"scan", {range.first, range.second}}, {"stable", scan.stable}};
        if (scan.interval) {
          j["interval"] = {scan.interval->first, scan.interval->second};
          j["nodv"] = nodv_lifting(file.nx, scan.interval->second);
        }
        std::cout << j.dump(2) << "\n";
      } else if (scan.stable.empty()) {
        std::cout << "no stable delay in " << range.first << ":" << range.second << "\n";
      } else if (scan.interval) {
        std::cout << "[" << scan.interval->first << ", " << scan.interval->second << "]\n";
        std::cout << "NoDV=" << nodv_lifting(file.nx, scan.interval->second) << "\n";
      } else {
        std::cout << "stable set is not an interval:";
        for (int t : scan.stable) std::cout << " " << t;
        std::cout << "\n";
      }
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
