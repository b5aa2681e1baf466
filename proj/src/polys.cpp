#include "msdelay/polys.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>

namespace msdelay {

Poly::Poly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Rational& c) { return Poly({c}); }

Poly Poly::monomial(int degree) {
  std::vector<Rational> c(static_cast<std::size_t>(degree) + 1, Rational(0));
  c.back() = 1;
  return Poly(std::move(c));
}

Poly Poly::linear_factor(const Rational& root) { return Poly({-root, Rational(1)}); }

Rational Poly::coeff(int i) const {
  if (i < 0 || i > degree()) return Rational(0);
  return coeffs_[static_cast<std::size_t>(i)];
}

Rational Poly::leading() const { return is_zero() ? Rational(0) : coeffs_.back(); }

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Poly& Poly::operator+=(const Poly& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Rational(0));
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Rational(0));
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Rational& s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Poly(std::move(out));
}

Poly Poly::shifted(const Rational& h) const {
  // Horner in the shifted variable: p(x+h) = (...(c_d (x+h) + c_{d-1})(x+h) ...).
  Poly out;
  const Poly step = linear_factor(-h);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    out = out * step;
    out += constant(*it);
  }
  return out;
}

Rational eval(const Poly& p, const Rational& x) {
  Rational acc(0);
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Rational weight(int N, int m, int i) {
  if (N < 1 || m < 0) throw std::domain_error("weight: need N >= 1 and m >= 0");
  if (i < 0 || i > N - 1)
    throw std::domain_error("weight: index " + std::to_string(i) + " outside [0, " +
                            std::to_string(N - 1) + "]");
  return Rational(factorial(m) * binomial(N - 1 + m - i, m));
}

Poly weight_poly(int N, int m) {
  Poly r = Poly::constant(1);
  for (int k = 1; k <= m; ++k) r = r * Poly({Rational(N - 1 + k), Rational(-1)});
  return r;
}

Rational inner_product(std::span<const Rational> f, std::span<const Rational> g, int N, int m) {
  if (m < 1) throw std::domain_error("inner_product: m must be >= 1");
  if (static_cast<int>(f.size()) < N || static_cast<int>(g.size()) < N)
    throw std::domain_error("inner_product: samples must cover 0..N-1");
  Rational acc(0);
  for (int i = 0; i < N; ++i) acc += weight(N, m - 1, i) * f[i] * g[i];
  return acc;
}

namespace {

std::vector<Rational> sample(const Poly& p, int N) {
  std::vector<Rational> v;
  v.reserve(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) v.push_back(eval(p, Rational(i)));
  return v;
}

}  // namespace

Rational inner_product(const Poly& f, const Poly& g, int N, int m) {
  return inner_product(sample(f, N), sample(g, N), N, m);
}

OrthoBasis make_basis(int N, int m, int nu, Normalization normalization) {
  if (m < 1) throw std::domain_error("build_basis: m must be >= 1");
  if (N < 1) throw std::domain_error("build_basis: N must be >= 1");
  if (nu < 0) throw std::domain_error("build_basis: nu must be >= 0");
  if (nu > N - 1)
    throw DegreeOverflow("build_basis: degree " + std::to_string(nu) + " needs N > " +
                         std::to_string(nu) + " support points, got N = " + std::to_string(N));
  if (normalization == Normalization::Rescaled)
    throw std::invalid_argument("build_basis: Rescaled is produced by rescale() only");

  std::vector<Rational> w;
  w.reserve(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) w.push_back(weight(N, m - 1, i));
  auto dot = [&](const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational acc(0);
    for (int i = 0; i < N; ++i) acc += w[i] * a[i] * b[i];
    return acc;
  };

  OrthoBasis basis{N, m, nu, normalization, {}, {}};
  std::vector<std::vector<Rational>> samples;
  for (int j = 0; j <= nu; ++j) {
    Poly p = Poly::monomial(j);
    const auto mono = sample(p, N);
    for (int k = 0; k < j; ++k)
      p -= basis.polys[k] * (dot(mono, samples[k]) / basis.norm_sq[k]);

    if (normalization == Normalization::SignAtMinusOne) {
      // Zeros of p lie inside (0, N-1), so p(-1) != 0.
      const Rational target = (j % 2 == 0) ? Rational(1) : Rational(-1);
      p *= target / eval(p, Rational(-1));
    }
    samples.push_back(sample(p, N));
    basis.norm_sq.push_back(dot(samples.back(), samples.back()));
    basis.polys.push_back(std::move(p));
  }
  return basis;
}

const OrthoBasis& build_basis(int N, int m, int nu, Normalization normalization) {
  using Key = std::tuple<int, int, int, int>;
  static std::shared_mutex mutex;
  static std::map<Key, std::unique_ptr<const OrthoBasis>> cache;

  const Key key{N, m, nu, static_cast<int>(normalization)};
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;
  }
  auto fresh = std::make_unique<const OrthoBasis>(make_basis(N, m, nu, normalization));
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.try_emplace(key, std::move(fresh));
  return *it->second;
}

OrthoBasis rescale(const OrthoBasis& basis, std::span<const Rational> scales) {
  if (scales.size() != basis.polys.size())
    throw std::invalid_argument("rescale: one scale per polynomial required");
  OrthoBasis out = basis;
  out.normalization = Normalization::Rescaled;
  for (std::size_t j = 0; j < scales.size(); ++j) {
    if (scales[j] == 0) throw std::invalid_argument("rescale: scale must be nonzero");
    out.polys[j] *= scales[j];
    out.norm_sq[j] *= scales[j] * scales[j];
  }
  return out;
}

std::vector<Rational> expand_in_basis(const Poly& p, const OrthoBasis& basis) {
  if (p.degree() > basis.nu)
    throw std::invalid_argument("expand_in_basis: degree " + std::to_string(p.degree()) +
                                " exceeds basis degree " + std::to_string(basis.nu));
  std::vector<Rational> c(static_cast<std::size_t>(basis.nu) + 1, Rational(0));
  Poly rest = p;
  for (int d = p.degree(); d >= 0; --d) {
    const Rational a = rest.coeff(d) / basis.polys[d].leading();
    c[d] = a;
    if (a != 0) rest -= basis.polys[d] * a;
  }
  return c;
}

}  // namespace msdelay
