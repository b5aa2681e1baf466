#pragma once

// Strict LMI feasibility by margin maximization:
//
//   maximize t  s.t.  F_b(X) - t I >= 0   for every positive block,
//                     -F_b(X) - t I >= 0  for every negative block,
//                     sum_v trace(X_v) = budget.
//
// The constraint system is homogeneous in X, so the trace budget only fixes
// the scale. The LMI is strictly feasible iff the optimal margin t* > 0.

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msdelay/block_lmi.hpp"

namespace msdelay {

struct EigenDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns
};

/// Symmetrizes (M + M')/2 and diagonalizes. Throws on non-finite input.
EigenDecomposition symmetric_eigen(const Eigen::MatrixXd& M);

struct SolverOptions {
  double feas_tol = 1e-8;          // decide feasible iff t* > feas_tol
  double duality_gap_tol = 1e-9;   // stop when the barrier gap bound drops below this
  int max_iterations = 400;        // Newton steps over all barrier stages
  double trace_budget = 0.0;       // <= 0 selects the total variable dimension
  double borderline_band = 1e-6;   // |t*| inside this band sets the borderline flag

  void validate() const;
};

enum class SolveStatus { MarginPositive, MarginNonpositive, MaxIterations, NumericalFailure };

std::string to_string(SolveStatus s);

struct FeasibilityResult {
  bool feasible = false;
  double margin = 0.0;        // best t found (a lower bound on t*)
  double margin_upper = 0.0;  // t + barrier gap bound at the last centered point
  int iterations = 0;
  std::optional<std::vector<Eigen::MatrixXd>> certificate;
  SolveStatus status = SolveStatus::NumericalFailure;
  bool borderline = false;
};

FeasibilityResult solve_feasibility(const BlockLmi& lmi, const SolverOptions& opts = {});

/// Evaluates every block at the assignment and checks strictness with
/// symmetric_eigen: lambda_min >= tol * scale on positive blocks and
/// lambda_max <= -tol * scale on negative ones, where scale is the mean
/// eigenvalue sum_v trace(X_v) / sum_v dim(X_v) of the assignment.
bool verify_certificate(const BlockLmi& lmi, std::span<const Eigen::MatrixXd> assignment, double tol);

}  // namespace msdelay
