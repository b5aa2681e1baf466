#pragma once

// Reference computations written independently of the library: literal
// nested sums, closed-form polynomials and norms, and the displayed shift
// matrix.

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "msdelay/rational.hpp"

namespace oracle {

using msdelay::Rational;

/// J_m(f) = sum_{i1=0}^{N-1} sum_{i2=0}^{i1} ... sum_{im=0}^{i_{m-1}} f(im)' R f(im),
/// f given as columns 0..N-1.
inline double nested_j(const Eigen::MatrixXd& f, int N, const Eigen::MatrixXd& R, int m) {
  std::function<double(int, int)> rec = [&](int level, int upper) -> double {
    double acc = 0.0;
    for (int i = 0; i <= upper; ++i) {
      if (level == m) {
        acc += f.col(i).dot(R * f.col(i));
      } else {
        acc += rec(level + 1, i);
      }
    }
    return acc;
  };
  return rec(1, N - 1);
}

inline Rational prod_ratio(int tau, int j) {
  Rational r(1);
  for (int i = 1; i <= j; ++i) r *= Rational(tau - i) / Rational(tau + i);
  return r;
}

inline Rational prod_plus(int tau, int from, int to) {
  Rational r(1);
  for (int i = from; i <= to; ++i) r *= tau + i;
  return r;
}

/// ||p_1j||^2 under p_1j(-1) = (-1)^j.
inline Rational sign_normalized_norm_sq(int tau, int j) {
  return Rational(tau) / Rational(2 * j + 1) * prod_ratio(tau, j);
}

/// Rows l = 0..5 of the shift matrix: [c1, c0, lambda_0..lambda_4].
inline std::vector<std::vector<Rational>> lambda5(int tau) {
  const Rational t(tau), t2 = t * t;
  const Rational z(0), one(1);
  std::vector<std::vector<Rational>> L(6, std::vector<Rational>(7, z));
  L[0] = {one, -one, one, z, z, z, z};
  L[1] = {prod_ratio(tau, 1), one, Rational(-2) / (t + 1), one, z, z, z};
  L[2] = {prod_ratio(tau, 2), -one, Rational(6) / prod_plus(tau, 1, 2), Rational(-6) / (t + 2), one, z, z};
  L[3] = {prod_ratio(tau, 3), one,  Rational(-2) * (t2 + 11) / prod_plus(tau, 1, 3),
          Rational(30) / prod_plus(tau, 2, 3), Rational(-10) / (t + 3), one, z};
  L[4] = {prod_ratio(tau, 4), -one, Rational(20) * (t2 + 5) / prod_plus(tau, 1, 4),
          Rational(-6) * (t2 + 26) / prod_plus(tau, 2, 4), Rational(70) / prod_plus(tau, 3, 4),
          Rational(-14) / (t + 4), one};
  L[5] = {prod_ratio(tau, 5), one, Rational(-2) * (t2 * t2 + 85 * t2 + 274) / prod_plus(tau, 1, 5),
          Rational(84) * (t2 + 11) / prod_plus(tau, 2, 5), Rational(-10) * (t2 + 47) / prod_plus(tau, 3, 5),
          Rational(126) / prod_plus(tau, 4, 5), Rational(-18) / (t + 5)};
  return L;
}

/// Discrete Chebyshev polynomials on 0..N-1 (m = 1), unnormalized.
inline Rational chebyshev(int j, int N, const Rational& x) {
  switch (j) {
    case 0: return Rational(1);
    case 1: return Rational(2 * x + 1 - N);
    case 2: return Rational(6 * x * x - 6 * Rational(N - 1) * x + Rational((N - 1) * (N - 2)));
  }
  return Rational(0);
}

inline Rational chebyshev_norm_sq(int j, int N) {
  const Rational n(N);
  switch (j) {
    case 0: return n;
    case 1: return n * (n * n - 1) / 3;
    case 2: return (n * n - 4) * (n * n - 1) * n / 5;
  }
  return Rational(0);
}

/// m = 2 polynomials under the weight N - i.
inline Rational second_order(int j, int N, const Rational& x) {
  return j == 0 ? Rational(1) : Rational(x + Rational(1 - N) / 3);
}

inline Rational second_order_norm_sq(int j, int N) {
  const Rational n(N);
  if (j == 0) return Rational(n * (n + 1) / 2);
  return Rational((n - 1) * n * (n + 1) * (n + 2) / 36);
}

}  // namespace oracle

namespace oracle {

/// V_1j = sum_{i1=0}^{tau-1} sum_{i2=0}^{i1} ... sum_{ij=0}^{i_{j-1}} sum_{s=ij}^{tau-1} rho(s)' R rho(s),
/// rho(s) given as columns 0..tau-1.
inline double v1j_nested(const Eigen::MatrixXd& rho, int tau, const Eigen::MatrixXd& R, int j) {
  std::function<double(int, int)> rec = [&](int level, int upper) -> double {
    double acc = 0.0;
    for (int i = 0; i <= upper; ++i) {
      if (level == j) {
        for (int s = i; s < tau; ++s) acc += rho.col(s).dot(R * rho.col(s));
      } else {
        acc += rec(level + 1, i);
      }
    }
    return acc;
  };
  return rec(1, tau - 1);
}

}  // namespace oracle
