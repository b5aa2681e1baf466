#pragma once

// Delay-dependent stability analyses built on the LMI certificate, plus the
// exact lifted-system test used as ground truth.

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msdelay/lmi.hpp"
#include "msdelay/sdp.hpp"

namespace msdelay {

FeasibilityResult certify(const SystemModel& sys, const LmiSpec& spec, const SolverOptions& opts = {});

struct DelayPoint {
  int tau = 0;
  bool admissible = true;  // false when nu1 > tau - 1; no LMI exists then
  FeasibilityResult result;
  double seconds = 0.0;
};

struct DelayRange {
  std::optional<int> tau_min_feasible;
  std::optional<int> tau_max_feasible;
  std::vector<DelayPoint> points;  // ascending tau
  /// True when the scan starts with at least one infeasible delay.
  bool has_left_edge() const;
};

/// Certifies every tau in [tau_lo, tau_hi]; no monotonicity in tau is assumed.
/// `jobs` worker threads share the scan, results are ordered by tau.
DelayRange max_delay(const SystemModel& sys_template, const LmiSpec& spec, int tau_lo, int tau_hi,
                     const SolverOptions& opts = {}, int jobs = 1);

/// Companion matrix of the lifted state col{x(t), x(t-1), ..., x(t-tau)};
/// tau = 0 gives A + A_d.
Eigen::MatrixXd companion_matrix(const SystemModel& sys);
double spectral_radius(const SystemModel& sys);

/// Exact test: spectral radius of the companion matrix < 1 - 1e-10.
bool lifting_oracle(const SystemModel& sys);

struct LiftingScan {
  std::vector<int> stable;             // every stable tau in the scan, ascending
  std::vector<double> radius;          // spectral radius per scanned tau
  std::optional<std::pair<int, int>> interval;  // [min, max] when the stable set is contiguous
  bool contiguous = true;
};

/// tau_lo may be 0.
LiftingScan lifting_scan(const SystemModel& sys_template, int tau_lo, int tau_hi, int jobs = 1);

/// Decision variables in the lifted Lyapunov inequality: N(N+1)/2, N = (tau+1) nx.
long nodv_lifting(int nx, int tau);

struct HierarchyViolation {
  std::pair<int, int> weaker;    // (l, nu1) cell expected to be dominated
  std::pair<int, int> stronger;
  std::string relation;          // "row" or "column"
  std::optional<int> weaker_tau;
  std::optional<int> stronger_tau;
};

/// Cells keyed by (l, nu1) with l - 1 <= nu1; each uses spec nu_j = nu1 - (j-1).
struct HierarchyTable {
  int lmax = 0;
  int numax = 0;
  std::map<std::pair<int, int>, DelayRange> cells;

  std::optional<int> tau_max(int l, int nu1) const;
  /// Entries must not decrease to the right along a row or downward along a
  /// column; "none" ranks below every delay.
  std::vector<HierarchyViolation> violations() const;
};

HierarchyTable hierarchy_table(const SystemModel& sys_template, int lmax, int numax, int tau_lo, int tau_hi,
                               const SolverOptions& opts = {}, int jobs = 1);

}  // namespace msdelay
