#pragma once

// Stability LMI for x(t+1) = A x(t) + A_d x(t - tau) built from a
// Lyapunov-Krasovskii functional with multiple-summation terms.

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "msdelay/block_lmi.hpp"

namespace msdelay {

struct SystemModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd Ad;
  int tau = 1;

  int nx() const { return static_cast<int>(A.rows()); }
  void validate() const;
  SystemModel with_delay(int new_tau) const { return {A, Ad, new_tau}; }
};

/// Multiplicity m and degrees nu_1 > nu_2 > ... > nu_m >= 0.
struct LmiSpec {
  std::vector<int> nus;

  int m() const { return static_cast<int>(nus.size()); }
  int nu1() const { return nus.front(); }
  /// nu_j = nu1 - (j-1), the row-l / column-nu1 entry of the hierarchy table.
  static LmiSpec hierarchy(int m, int nu1);
  /// Throws std::invalid_argument for a malformed spec and std::domain_error
  /// when nu1 exceeds the horizon tau - 1.
  void validate(int tau) const;
  void validate() const;
};

struct StructuralMatrices {
  int nx = 0;
  int tau = 0;
  int nu1 = 0;
  Eigen::MatrixXd e1, e2;          // selectors of x(t), x(t - tau) in Phi~
  Eigen::MatrixXd script_a;        // A e1 + A_d e2
  Eigen::MatrixXd T;               // diag{I_2, tau I_nu1}, unexpanded
  Eigen::MatrixXd gamma;           // x~(t) = gamma Phi~(t)
  Eigen::MatrixXd lambda_under;    // x~(t+1) = lambda_under Phi~(t)
  std::vector<Eigen::MatrixXd> ztilde;       // Z_k T, k = 1..m, unexpanded
  std::vector<std::vector<double>> chi;      // chi_{k,j} = 1 / ||p_kj||_k^2

  int phi_dim() const { return nx * (nu1 + 2); }
  int state_dim() const { return nx * (nu1 + 1); }
};

StructuralMatrices structural(const SystemModel& sys, const LmiSpec& spec);

/// Variables are ordered P, Q, R_1..R_m. Blocks: P > 0, Q > 0, R_k > 0 and
/// M = Psi1 + Psi2 - Psi3 < 0.
BlockLmi assemble(const SystemModel& sys, const LmiSpec& spec);

/// s(nx(nu1+1)) + (m+1) s(nx), s(n) = n(n+1)/2.
int nodv(int nx, int nu1, int m);

/// States x(first), x(first+1), ...
struct Trajectory {
  int first = 0;
  std::vector<Eigen::VectorXd> states;

  int last() const { return first + static_cast<int>(states.size()) - 1; }
  const Eigen::VectorXd& at(int t) const { return states.at(static_cast<std::size_t>(t - first)); }
};

/// Runs the delay recursion from the initial function x(-tau..0) (tau+1 columns).
Trajectory simulate(const SystemModel& sys, const Eigen::MatrixXd& history, int steps);

/// x~(t) = col{x(t), phi_0(t), ..., phi_{nu1-1}(t)}.
Eigen::VectorXd extended_state(const SystemModel& sys, int nu1, const Trajectory& traj, int t);
/// Phi~(t) = col{x(t), x(t - tau), phi_0(t)/tau, ..., phi_{nu1-1}(t)/tau}.
Eigen::VectorXd augmented_state(const SystemModel& sys, int nu1, const Trajectory& traj, int t);

/// Value of the functional V at time t, evaluated from its definition.
double lkf_value(const SystemModel& sys, const LmiSpec& spec, const Eigen::MatrixXd& P,
                 const Eigen::MatrixXd& Q, std::span<const Eigen::MatrixXd> R, const Trajectory& traj, int t);

struct DeltaVCheck {
  double max_violation = 0.0;  // max_t [V(t+1) - V(t) - Phi~(t)' M Phi~(t)]
  double scale = 0.0;          // max_t of |V(t)| + |V(t+1)| + |Phi~' M Phi~|
  int steps = 0;
};

/// Compares the forward difference of V along a trajectory against the LMI
/// quadratic form at every t the trajectory supports. max_violation is
/// nonpositive up to roundoff for any P, Q, R_k > 0.
DeltaVCheck delta_v_bound_check(const SystemModel& sys, const LmiSpec& spec, const Eigen::MatrixXd& P,
                                const Eigen::MatrixXd& Q, std::span<const Eigen::MatrixXd> R,
                                const Trajectory& traj);

}  // namespace msdelay
