#include "msdelay/coeffs.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace msdelay {

Eigen::MatrixXd RationalMatrix::to_double() const {
  Eigen::MatrixXd out(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c).get_d();
  return out;
}

namespace {

void check_params(int N, int m, int nu1, int num, const char* who) {
  if (m < 1 || num < 0 || N < 1 || num + m - 1 > nu1 || nu1 >= N)
    throw std::invalid_argument(std::string(who) + ": need m >= 1 and num + m - 1 <= nu1 < N (got N=" +
                                std::to_string(N) + ", m=" + std::to_string(m) + ", nu1=" +
                                std::to_string(nu1) + ", num=" + std::to_string(num) + ")");
}

void check_bases(const OrthoBasis& p1, const OrthoBasis& pm, int nu1, int num, const char* who) {
  check_params(pm.N, pm.m, nu1, num, who);
  if (p1.m != 1 || p1.N != pm.N || p1.nu < nu1 || pm.nu < num)
    throw std::invalid_argument(std::string(who) + ": basis shapes do not cover (nu1, num)");
}

}  // namespace

XiMatrix xi_matrix(const OrthoBasis& p1, const OrthoBasis& pm, int nu1, int num) {
  check_bases(p1, pm, nu1, num, "xi_matrix");
  const int N = pm.N;
  const int m = pm.m;
  const Poly r = weight_poly(N, m - 1);

  XiMatrix xi{RationalMatrix(num + 1, nu1 + 1), {N, m, nu1, num, pm.normalization}};
  for (int j = 0; j <= num; ++j) {
    const auto c = expand_in_basis(r * pm.polys[j], p1);
    for (int l = 0; l <= nu1; ++l) xi.entries(j, l) = c[l];
  }
  return xi;
}

XiMatrix xi_matrix(int N, int m, int nu1, int num, Normalization normalization) {
  check_params(N, m, nu1, num, "xi_matrix");
  return xi_matrix(build_basis(N, 1, nu1, normalization), build_basis(N, m, num, normalization), nu1, num);
}

ZetaMatrix zeta_matrix(const OrthoBasis& p1, const OrthoBasis& pm, int nu1, int num) {
  check_bases(p1, pm, nu1, num, "zeta_matrix");
  const int N = pm.N;
  const int m = pm.m;
  const Poly r = weight_poly(N, m - 1);

  ZetaMatrix z{RationalMatrix(num + 1, nu1 + 2), {N, m, nu1, num, pm.normalization}};
  for (int j = 0; j <= num; ++j) {
    const Poly q = r * pm.polys[j];
    // q~(i) = q(i-1) - q(i), of exact degree m+j-2 <= nu1-1.
    const Poly qt = q.shifted(-1) - q;
    z.entries(j, 0) = eval(q, Rational(N - 1));
    z.entries(j, 1) = -eval(q, Rational(-1));
    const auto c = expand_in_basis(qt, p1);
    if (c[nu1] != 0) throw std::logic_error("zeta_matrix: difference polynomial degree too high");
    for (int l = 0; l < nu1; ++l) z.entries(j, l + 2) = c[l];
  }
  return z;
}

ZetaMatrix zeta_matrix(int N, int m, int nu1, int num, Normalization normalization) {
  check_params(N, m, nu1, num, "zeta_matrix");
  return zeta_matrix(build_basis(N, 1, nu1, normalization), build_basis(N, m, num, normalization), nu1, num);
}

LambdaRow lambda_row(int N, int l, int nu1) {
  if (l < 0 || l > nu1 || nu1 > N)
    throw std::invalid_argument("lambda_row: need 0 <= l <= nu1 <= N (got N=" + std::to_string(N) +
                                ", l=" + std::to_string(l) + ", nu1=" + std::to_string(nu1) + ")");
  // For nu1 = N the top polynomial is the node polynomial prod (x - i), which is
  // orthogonal to everything on the N support points (zero norm).
  OrthoBasis p1 = build_basis(N, 1, std::min(nu1, N - 1), Normalization::SignAtMinusOne);
  if (nu1 == N) {
    Poly node = Poly::constant(Rational(1));
    for (int i = 0; i < N; ++i) node = node * Poly::linear_factor(Rational(i));
    node *= Rational(N % 2 == 0 ? 1 : -1) / eval(node, Rational(-1));
    p1.polys.push_back(std::move(node));
    p1.norm_sq.push_back(Rational(0));
    p1.nu = N;
  }
  const Poly& p = p1.polys[l];

  LambdaRow row;
  row.c1 = eval(p, Rational(N - 1));
  row.c0 = -eval(p, Rational(-1));
  const auto c = expand_in_basis(p.shifted(-1), p1);
  row.lambdas.assign(c.begin(), c.begin() + nu1);
  return row;
}

}  // namespace msdelay
