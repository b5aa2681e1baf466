#pragma once

// Multiple summation functionals J_m and their lower bounds, for vector-valued
// functions sampled on the integer grid.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "msdelay/polys.hpp"

namespace msdelay {

/// Samples f(0), f(1), ... stored as the columns of `values`. Functionals use
/// indices 0..N-1; difference bounds additionally read f(N).
struct GridFunction {
  Eigen::MatrixXd values;
  int N = 0;

  GridFunction() = default;
  GridFunction(Eigen::MatrixXd v, int horizon);

  int dim() const { return static_cast<int>(values.rows()); }
  Eigen::VectorXd operator()(int i) const { return values.col(i); }
};

/// rho(i) = f(i+1) - f(i) for i = 0..N-1. Needs f through index N.
GridFunction differences(const GridFunction& f);

/// J_m(f) evaluated through the weight form (1/(m-1)!) sum_i r_{N,m-1}(i) f(i)'Rf(i).
/// Throws std::invalid_argument unless R is symmetric positive definite.
double j_functional(const GridFunction& f, const Eigen::MatrixXd& R, int m);

/// J_m(f) by literal nested summation over i_1 >= i_2 >= ... >= i_m. Exponential
/// in m; kept as a reference evaluator for the property suite.
double j_functional_nested(const GridFunction& f, const Eigen::MatrixXd& R, int m);

/// col{phi_0, ..., phi_{count-1}}, phi_j = sum_{i<N} p_{1j}(i) f(i).
Eigen::VectorXd phi_vector(const GridFunction& f, const OrthoBasis& p1, int count);

/// col{f(N), f(0), phi_0, ..., phi_{nu1-1}}.
Eigen::VectorXd phi_tilde(const GridFunction& f, const OrthoBasis& p1, int nu1);

/// Lower bound on J_m(f) from projections on p_{m0..num}, expressed through
/// phi_0..phi_{nu1}. Requires num + m - 1 <= nu1 < N.
double lower_bound_function(const GridFunction& f, const Eigen::MatrixXd& R, int m, int nu1, int num,
                            Normalization normalization = Normalization::SignAtMinusOne);
double lower_bound_function(const GridFunction& f, const Eigen::MatrixXd& R, const OrthoBasis& p1,
                            const OrthoBasis& pm, int nu1, int num);

/// Lower bound on J_m(rho), rho the forward difference of f, expressed through
/// f(N), f(0) and phi_0..phi_{nu1-1}. Requires num + m - 1 <= nu1 < N.
double lower_bound_difference(const GridFunction& f, const Eigen::MatrixXd& R, int m, int nu1, int num,
                              Normalization normalization = Normalization::SignAtMinusOne);
double lower_bound_difference(const GridFunction& f, const Eigen::MatrixXd& R, const OrthoBasis& p1,
                              const OrthoBasis& pm, int nu1, int num);

struct IneqSuiteOptions {
  int trials = 1000;
  /// false: `trials` random configurations. true: `trials` samples for every
  /// admissible (N <= nmax, m <= mmax, nu1, num).
  bool exhaustive = false;
  std::uint64_t seed = 20160901;
  int nmax = 12;
  int mmax = 3;
  double validity_tol = 1e-9;   // relative to the magnitude of J
  double equality_tol = 1e-9;
  double corollary_tol = 1e-12;
};

struct IneqCheckTally {
  std::string name;
  int passed = 0;
  int failed = 0;
  double worst = 0.0;  // largest observed violation, relative
};

struct IneqSuiteReport {
  std::vector<IneqCheckTally> checks;
  std::uint64_t digest = 0;  // hash of every sampled trial value

  int passed() const;
  int failed() const;
  bool ok() const { return failed() == 0; }
};

/// Seeded randomized check of both bounds against the nested-sum reference,
/// equality on the projection span and the classical closed-form corollaries.
IneqSuiteReport run_inequality_suite(const IneqSuiteOptions& opts);

}  // namespace msdelay
