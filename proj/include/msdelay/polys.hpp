#pragma once

// Discrete orthogonal polynomials on the support {0, ..., N-1} with respect to
// the multiple-summation weight r_{N,m-1}. All arithmetic is exact.

#include <span>
#include <stdexcept>
#include <vector>

#include "msdelay/rational.hpp"

namespace msdelay {

/// Raised when a basis of degree >= N is requested; only N polynomials exist.
class DegreeOverflow : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dense polynomial with exact coefficients, index i holding the x^i term.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);

  static Poly constant(const Rational& c);
  static Poly monomial(int degree);
  /// x - root
  static Poly linear_factor(const Rational& root);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(int i) const;
  Rational leading() const;

  /// p(x + h)
  Poly shifted(const Rational& h) const;

  Poly& operator+=(const Poly& rhs);
  Poly& operator-=(const Poly& rhs);
  Poly& operator*=(const Rational& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Horner evaluation.
Rational eval(const Poly& p, const Rational& x);

/// r_{N,m}(i) = m! * C(N-1+m-i, m), defined for 0 <= i <= N-1.
Rational weight(int N, int m, int i);

/// r_{N,m} extended to a polynomial in i: prod_{k=1}^{m} (N-1+k-i).
/// Agrees with weight() on the support and supplies the boundary values
/// r_{N,m}(-1) and r_{N,m}(N-1) used by the difference bounds.
Poly weight_poly(int N, int m);

/// <f,g>_m = sum_{i=0}^{N-1} r_{N,m-1}(i) f(i) g(i) for samples f(0..N-1).
/// Divide by (m-1)! for the nested-sum product.
Rational inner_product(std::span<const Rational> f, std::span<const Rational> g, int N, int m);
Rational inner_product(const Poly& f, const Poly& g, int N, int m);

enum class Normalization {
  Monic,           // leading coefficient 1
  SignAtMinusOne,  // p_j(-1) = (-1)^j
  Rescaled,        // arbitrary per-polynomial scale, produced by rescale()
};

struct OrthoBasis {
  int N = 0;
  int m = 0;
  int nu = 0;
  Normalization normalization = Normalization::Monic;
  std::vector<Poly> polys;         // polys[j] has exact degree j
  std::vector<Rational> norm_sq;   // <polys[j], polys[j]>_m

  /// chi_{m,j} = 1 / norm_sq[j]
  Rational chi(int j) const { return 1 / norm_sq.at(static_cast<std::size_t>(j)); }
};

/// Exact Gram-Schmidt over the monomials under <.,.>_m, followed by the
/// requested rescaling. Results are memoized per (N, m, nu, normalization);
/// the returned reference stays valid for the life of the process.
const OrthoBasis& build_basis(int N, int m, int nu,
                              Normalization normalization = Normalization::SignAtMinusOne);

/// Uncached construction, used by build_basis.
OrthoBasis make_basis(int N, int m, int nu, Normalization normalization);

/// Multiplies polys[j] by scales[j]; norm_sq[j] picks up scales[j]^2.
OrthoBasis rescale(const OrthoBasis& basis, std::span<const Rational> scales);

/// Coefficients c with p = sum_j c[j] * basis.polys[j], found by peeling off
/// leading terms from the top degree down. Throws if deg p > basis.nu.
std::vector<Rational> expand_in_basis(const Poly& p, const OrthoBasis& basis);

}  // namespace msdelay
