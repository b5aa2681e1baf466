#pragma once

// Expansion coefficients that express the projections used by the summation
// bounds in terms of phi_l = sum_i p_{1l}(i) f(i).

#include <Eigen/Dense>

#include <vector>

#include "msdelay/polys.hpp"

namespace msdelay {

/// Row-major dense matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, Rational(0)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
  const Rational& operator()(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }

  Eigen::MatrixXd to_double() const;
  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

struct CoeffParams {
  int N = 0;
  int m = 0;
  int nu1 = 0;
  int num = 0;
  Normalization normalization = Normalization::SignAtMinusOne;
};

/// Xi_m: row j holds xi^m_{j,l}, the coefficients of r_{N,m-1}(i) p_{mj}(i) in
/// {p_{1l}}; shape (num+1) x (nu1+1).
struct XiMatrix {
  RationalMatrix entries;
  CoeffParams params;
};

/// Z_m: row j = [c_{m,j,1}, c_{m,j,0}, zeta^m_{j,0}, ..., zeta^m_{j,nu1-1}];
/// shape (num+1) x (nu1+2).
struct ZetaMatrix {
  RationalMatrix entries;
  CoeffParams params;
};

/// Shift expansion of p_{1l}(i-1) in {p_{1s}(i)} plus its boundary values.
struct LambdaRow {
  Rational c1;                   // p_{1l}(N-1)
  Rational c0;                   // -p_{1l}(-1)
  std::vector<Rational> lambdas; // lambda_{l,0..nu1-1}
};

/// Requires num + m - 1 <= nu1 < N.
XiMatrix xi_matrix(int N, int m, int nu1, int num,
                   Normalization normalization = Normalization::SignAtMinusOne);
XiMatrix xi_matrix(const OrthoBasis& p1, const OrthoBasis& pm, int nu1, int num);

/// Requires num + m - 1 <= nu1 < N.
ZetaMatrix zeta_matrix(int N, int m, int nu1, int num,
                       Normalization normalization = Normalization::SignAtMinusOne);
ZetaMatrix zeta_matrix(const OrthoBasis& p1, const OrthoBasis& pm, int nu1, int num);

/// Requires 0 <= l <= nu1 <= N. Always uses the SignAtMinusOne m = 1 basis;
/// nu1 = N appends the zero-norm node polynomial prod_{i<N} (x - i).
LambdaRow lambda_row(int N, int l, int nu1);

}  // namespace msdelay
