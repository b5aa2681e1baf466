#include "msdelay/stability.hpp"

#include <chrono>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "parallel.hpp"

namespace msdelay {

FeasibilityResult certify(const SystemModel& sys, const LmiSpec& spec, const SolverOptions& opts) {
  return solve_feasibility(assemble(sys, spec), opts);
}

bool DelayRange::has_left_edge() const {
  return tau_min_feasible && !points.empty() && *tau_min_feasible > points.front().tau;
}

namespace {

DelayPoint certify_point(const SystemModel& sys_template, const LmiSpec& spec, int tau, const SolverOptions& opts) {
  DelayPoint pt;
  pt.tau = tau;
  if (spec.nu1() > tau - 1) {
    pt.admissible = false;
    pt.result.status = SolveStatus::MarginNonpositive;
    return pt;
  }
  const auto start = std::chrono::steady_clock::now();
  pt.result = certify(sys_template.with_delay(tau), spec, opts);
  pt.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return pt;
}

void summarize(DelayRange& range) {
  for (const auto& pt : range.points) {
    if (!pt.result.feasible) continue;
    if (!range.tau_min_feasible) range.tau_min_feasible = pt.tau;
    range.tau_max_feasible = pt.tau;
  }
}

}  // namespace

DelayRange max_delay(const SystemModel& sys_template, const LmiSpec& spec, int tau_lo, int tau_hi,
                     const SolverOptions& opts, int jobs) {
  if (tau_lo < 1 || tau_hi < tau_lo) throw std::invalid_argument("max_delay: empty delay range");
  spec.validate();
  DelayRange range;
  range.points.resize(static_cast<std::size_t>(tau_hi - tau_lo + 1));
  detail::parallel_for(static_cast<int>(range.points.size()), jobs, [&](int i) {
    range.points[i] = certify_point(sys_template, spec, tau_lo + i, opts);
  });
  summarize(range);
  return range;
}

Eigen::MatrixXd companion_matrix(const SystemModel& sys) {
  if (sys.tau == 0) {
    sys.with_delay(1).validate();
    return sys.A + sys.Ad;
  }
  sys.validate();
  const int n = sys.nx();
  const int dim = (sys.tau + 1) * n;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(dim, dim);
  C.topLeftCorner(n, n) = sys.A;
  C.topRightCorner(n, n) += sys.Ad;
  C.bottomLeftCorner(dim - n, dim - n).setIdentity();
  return C;
}

double spectral_radius(const SystemModel& sys) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion_matrix(sys), /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw std::runtime_error("spectral_radius: eigenvalue iteration failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool lifting_oracle(const SystemModel& sys) { return spectral_radius(sys) < 1.0 - 1e-10; }

LiftingScan lifting_scan(const SystemModel& sys_template, int tau_lo, int tau_hi, int jobs) {
  if (tau_lo < 0 || tau_hi < tau_lo) throw std::invalid_argument("lifting_scan: empty delay range");
  const int count = tau_hi - tau_lo + 1;
  LiftingScan scan;
  scan.radius.resize(static_cast<std::size_t>(count));
  detail::parallel_for(count, jobs,
                       [&](int i) { scan.radius[i] = spectral_radius(sys_template.with_delay(tau_lo + i)); });
  for (int i = 0; i < count; ++i)
    if (scan.radius[i] < 1.0 - 1e-10) scan.stable.push_back(tau_lo + i);
  if (!scan.stable.empty()) {
    scan.contiguous = scan.stable.back() - scan.stable.front() + 1 == static_cast<int>(scan.stable.size());
    if (scan.contiguous) scan.interval = std::pair{scan.stable.front(), scan.stable.back()};
  }
  return scan;
}

long nodv_lifting(int nx, int tau) {
  const long N = long(tau + 1) * nx;
  return N * (N + 1) / 2;
}

std::optional<int> HierarchyTable::tau_max(int l, int nu1) const {
  auto it = cells.find({l, nu1});
  if (it == cells.end()) throw std::out_of_range("HierarchyTable: no cell (" + std::to_string(l) + ", " +
                                                 std::to_string(nu1) + ")");
  return it->second.tau_max_feasible;
}

std::vector<HierarchyViolation> HierarchyTable::violations() const {
  auto rank = [](const std::optional<int>& v) { return v ? *v : -1; };
  std::vector<HierarchyViolation> out;
  for (const auto& [key, range] : cells) {
    const auto [l, nu1] = key;
    const std::pair<int, int> right{l, nu1 + 1};
    const std::pair<int, int> down{l + 1, nu1};
    for (const auto& [next, relation] : {std::pair{right, "row"}, std::pair{down, "column"}}) {
      auto it = cells.find(next);
      if (it == cells.end()) continue;
      if (rank(it->second.tau_max_feasible) < rank(range.tau_max_feasible))
        out.push_back({key, next, relation, range.tau_max_feasible, it->second.tau_max_feasible});
    }
  }
  return out;
}

HierarchyTable hierarchy_table(const SystemModel& sys_template, int lmax, int numax, int tau_lo, int tau_hi,
                               const SolverOptions& opts, int jobs) {
  if (lmax < 1 || numax < 0) throw std::invalid_argument("hierarchy_table: need lmax >= 1, numax >= 0");
  if (tau_lo < 1 || tau_hi < tau_lo) throw std::invalid_argument("hierarchy_table: empty delay range");
  HierarchyTable table;
  table.lmax = lmax;
  table.numax = numax;

  struct Task {
    std::pair<int, int> cell;
    int tau;
  };
  std::vector<Task> tasks;
  for (int l = 1; l <= lmax; ++l)
    for (int nu1 = l - 1; nu1 <= numax; ++nu1) {
      auto& range = table.cells[{l, nu1}];
      range.points.resize(static_cast<std::size_t>(tau_hi - tau_lo + 1));
      for (int tau = tau_lo; tau <= tau_hi; ++tau) tasks.push_back({{l, nu1}, tau});
    }

  detail::parallel_for(static_cast<int>(tasks.size()), jobs, [&](int i) {
    const Task& task = tasks[i];
    const LmiSpec spec = LmiSpec::hierarchy(task.cell.first, task.cell.second);
    // Distinct tasks write distinct slots; the map itself is not modified here.
    table.cells.at(task.cell).points[task.tau - tau_lo] = certify_point(sys_template, spec, task.tau, opts);
  });
  for (auto& [key, range] : table.cells) summarize(range);
  return table;
}

}  // namespace msdelay
