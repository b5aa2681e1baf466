#include "msdelay/ineq.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>

#include "msdelay/coeffs.hpp"

namespace msdelay {

GridFunction::GridFunction(Eigen::MatrixXd v, int horizon) : values(std::move(v)), N(horizon) {
  if (N < 1) throw std::invalid_argument("GridFunction: horizon must be >= 1");
  if (values.cols() < N) throw std::invalid_argument("GridFunction: fewer than N samples");
}

GridFunction differences(const GridFunction& f) {
  if (f.values.cols() < f.N + 1) throw std::invalid_argument("differences: f must be sampled through N");
  Eigen::MatrixXd rho = f.values.middleCols(1, f.N) - f.values.leftCols(f.N);
  return GridFunction(std::move(rho), f.N);
}

namespace {

void require_spd(const Eigen::MatrixXd& R, int n) {
  if (R.rows() != n || R.cols() != n) throw std::invalid_argument("R has the wrong dimension");
  if (!R.allFinite() || (R - R.transpose()).norm() > 1e-12 * std::max(1.0, R.norm()))
    throw std::invalid_argument("R must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(R);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("R must be positive definite");
}

double quad(const Eigen::VectorXd& v, const Eigen::MatrixXd& R) { return v.dot(R * v); }

}  // namespace

double j_functional(const GridFunction& f, const Eigen::MatrixXd& R, int m) {
  if (m < 1) throw std::invalid_argument("j_functional: m must be >= 1");
  require_spd(R, f.dim());
  double acc = 0.0;
  for (int i = 0; i < f.N; ++i) acc += weight(f.N, m - 1, i).get_d() * quad(f.values.col(i), R);
  return acc / factorial(m - 1).get_d();
}

double j_functional_nested(const GridFunction& f, const Eigen::MatrixXd& R, int m) {
  if (m < 1) throw std::invalid_argument("j_functional_nested: m must be >= 1");
  require_spd(R, f.dim());
  std::vector<double> q(static_cast<std::size_t>(f.N));
  for (int i = 0; i < f.N; ++i) q[i] = quad(f.values.col(i), R);
  std::function<double(int, int)> level = [&](int depth, int upper) {
    double s = 0.0;
    for (int i = 0; i <= upper; ++i) s += (depth == m) ? q[i] : level(depth + 1, i);
    return s;
  };
  return level(1, f.N - 1);
}

Eigen::VectorXd phi_vector(const GridFunction& f, const OrthoBasis& p1, int count) {
  if (p1.m != 1 || p1.N != f.N || count > p1.nu + 1)
    throw std::invalid_argument("phi_vector: basis does not match the grid function");
  const int n = f.dim();
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(std::size_t(n) * count);
  for (int j = 0; j < count; ++j)
    for (int i = 0; i < f.N; ++i)
      phi.segment(std::size_t(j) * n, n) += eval(p1.polys[j], Rational(i)).get_d() * f.values.col(i);
  return phi;
}

Eigen::VectorXd phi_tilde(const GridFunction& f, const OrthoBasis& p1, int nu1) {
  if (f.values.cols() < f.N + 1) throw std::invalid_argument("phi_tilde: f must be sampled through N");
  const int n = f.dim();
  Eigen::VectorXd out(std::size_t(n) * (nu1 + 2));
  out.head(n) = f.values.col(f.N);
  out.segment(n, n) = f.values.col(0);
  out.tail(std::size_t(n) * nu1) = phi_vector(f, p1, nu1);
  return out;
}

namespace {

// Everything a bound needs besides f and R, converted to double once.
struct BoundTables {
  Eigen::MatrixXd coeffs;      // Xi or Z rows
  Eigen::MatrixXd p1_samples;  // p1_samples(l, i) = p_1l(i)
  std::vector<double> chi;
  double inv_fact = 1.0;
};

BoundTables make_tables(const RationalMatrix& coeffs, const OrthoBasis& p1, const OrthoBasis& pm, int count) {
  BoundTables t;
  t.coeffs = coeffs.to_double();
  t.p1_samples.resize(count, p1.N);
  for (int l = 0; l < count; ++l)
    for (int i = 0; i < p1.N; ++i) t.p1_samples(l, i) = eval(p1.polys[l], Rational(i)).get_d();
  for (int j = 0; j < coeffs.rows(); ++j) t.chi.push_back(pm.chi(j).get_d());
  t.inv_fact = 1.0 / factorial(pm.m - 1).get_d();
  return t;
}

// Tables for the standard bases, memoized by (difference?, N, m, nu1, num, normalization).
const BoundTables& cached_tables(bool difference, int N, int m, int nu1, int num, Normalization normalization) {
  using Key = std::tuple<bool, int, int, int, int, int>;
  static std::shared_mutex mutex;
  static std::map<Key, std::unique_ptr<const BoundTables>> cache;
  const Key key{difference, N, m, nu1, num, static_cast<int>(normalization)};
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;
  }
  const OrthoBasis& p1 = build_basis(N, 1, nu1, normalization);
  const OrthoBasis& pm = build_basis(N, m, num, normalization);
  auto t = std::make_unique<const BoundTables>(
      difference ? make_tables(zeta_matrix(p1, pm, nu1, num).entries, p1, pm, nu1)
                 : make_tables(xi_matrix(p1, pm, nu1, num).entries, p1, pm, nu1 + 1));
  std::unique_lock lock(mutex);
  return *cache.try_emplace(key, std::move(t)).first->second;
}

// (1/(m-1)!) sum_j chi_j (C_j (x) I v)' R (C_j (x) I v) for coefficient rows C_j.
double projected_form(const BoundTables& t, const Eigen::MatrixXd& v, const Eigen::MatrixXd& R) {
  double acc = 0.0;
  for (int j = 0; j < t.coeffs.rows(); ++j) {
    const Eigen::VectorXd w = v * t.coeffs.row(j).transpose();
    acc += t.chi[j] * quad(w, R);
  }
  return acc * t.inv_fact;
}

// Columns phi_0..phi_{count-1}.
Eigen::MatrixXd phi_columns(const GridFunction& f, const BoundTables& t) {
  return f.values.leftCols(f.N) * t.p1_samples.transpose();
}

double function_bound(const GridFunction& f, const Eigen::MatrixXd& R, const BoundTables& t) {
  require_spd(R, f.dim());
  return projected_form(t, phi_columns(f, t), R);
}

double difference_bound(const GridFunction& f, const Eigen::MatrixXd& R, const BoundTables& t) {
  require_spd(R, f.dim());
  if (f.values.cols() < f.N + 1) throw std::invalid_argument("lower_bound_difference: f must be sampled through N");
  Eigen::MatrixXd v(f.dim(), t.p1_samples.rows() + 2);
  v.col(0) = f.values.col(f.N);
  v.col(1) = f.values.col(0);
  v.rightCols(t.p1_samples.rows()) = phi_columns(f, t);
  return projected_form(t, v, R);
}

void check_bases(const GridFunction& f, const OrthoBasis& p1, const OrthoBasis& pm) {
  if (p1.m != 1 || p1.N != f.N || pm.N != f.N) throw std::invalid_argument("bases do not match the grid function");
}

void check_degrees(const char* who, const GridFunction& f, int m, int nu1, int num) {
  if (m < 1 || num < 0 || num + m - 1 > nu1 || nu1 >= f.N)
    throw std::invalid_argument(std::string(who) + ": need num + m - 1 <= nu1 < N");
}

}  // namespace

double lower_bound_function(const GridFunction& f, const Eigen::MatrixXd& R, const OrthoBasis& p1,
                            const OrthoBasis& pm, int nu1, int num) {
  check_bases(f, p1, pm);
  return function_bound(f, R, make_tables(xi_matrix(p1, pm, nu1, num).entries, p1, pm, nu1 + 1));
}

double lower_bound_function(const GridFunction& f, const Eigen::MatrixXd& R, int m, int nu1, int num,
                            Normalization normalization) {
  check_degrees("lower_bound_function", f, m, nu1, num);
  return function_bound(f, R, cached_tables(false, f.N, m, nu1, num, normalization));
}

double lower_bound_difference(const GridFunction& f, const Eigen::MatrixXd& R, const OrthoBasis& p1,
                              const OrthoBasis& pm, int nu1, int num) {
  check_bases(f, p1, pm);
  return difference_bound(f, R, make_tables(zeta_matrix(p1, pm, nu1, num).entries, p1, pm, nu1));
}

double lower_bound_difference(const GridFunction& f, const Eigen::MatrixXd& R, int m, int nu1, int num,
                              Normalization normalization) {
  check_degrees("lower_bound_difference", f, m, nu1, num);
  return difference_bound(f, R, cached_tables(true, f.N, m, nu1, num, normalization));
}

// ---------------------------------------------------------------------------
// Property suite

int IneqSuiteReport::passed() const {
  int s = 0;
  for (const auto& c : checks) s += c.passed;
  return s;
}

int IneqSuiteReport::failed() const {
  int s = 0;
  for (const auto& c : checks) s += c.failed;
  return s;
}

namespace {

class Digest {
 public:
  void add(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h_ ^= (v >> (8 * b)) & 0xffu;
      h_ *= 1099511628211ull;
    }
  }
  void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
  void add(const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) add(m.data()[i]);
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 14695981039346656037ull;
};

// S_k(x) = sum_{i_1<N} sum_{i_2<=i_1} ... sum_{i_k<=i_{k-1}} x(i_k), by literal loops.
Eigen::VectorXd nested_sum(const GridFunction& x, int k) {
  std::function<Eigen::VectorXd(int, int)> level = [&](int depth, int upper) -> Eigen::VectorXd {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(x.dim());
    for (int i = 0; i <= upper; ++i) s += (depth == k) ? Eigen::VectorXd(x.values.col(i)) : level(depth + 1, i);
    return s;
  };
  return level(1, x.N - 1);
}

double rel_excess(double lower, double upper) {
  // positive when lower exceeds upper
  return (lower - upper) / std::max({std::abs(upper), std::abs(lower), 1e-300});
}

double rel_diff(double a, double b, double scale = 0.0) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), scale, 1e-300});
}

}  // namespace

IneqSuiteReport run_inequality_suite(const IneqSuiteOptions& opts) {
  if (opts.trials < 0 || opts.nmax < 1 || opts.mmax < 1)
    throw std::invalid_argument("run_inequality_suite: trials >= 0, nmax >= 1, mmax >= 1");

  IneqSuiteReport report;
  report.checks = {{"function-bound-validity"}, {"difference-bound-validity"}, {"equality-on-span"},
                   {"jensen"},                  {"wirtinger"},                 {"three-term"},
                   {"double-sum"},              {"difference-jensen"},         {"difference-wirtinger"}};
  auto tally = [&](int idx, double violation, double tol) {
    auto& c = report.checks[idx];
    c.worst = std::max(c.worst, violation);
    (violation <= tol ? c.passed : c.failed) += 1;
  };

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Digest digest;

  // p_mj(i) as doubles, row j.
  std::map<std::tuple<int, int, int>, Eigen::MatrixXd> samples;
  auto span_samples = [&](int N, int m, int num) -> const Eigen::MatrixXd& {
    auto [it, fresh] = samples.try_emplace({N, m, num});
    if (fresh) {
      const OrthoBasis& pm = build_basis(N, m, num);
      it->second.resize(num + 1, N);
      for (int j = 0; j <= num; ++j)
        for (int i = 0; i < N; ++i) it->second(j, i) = eval(pm.polys[j], Rational(i)).get_d();
    }
    return it->second;
  };

  auto run_trial = [&](int N, int m, int nu1, int num) {
    const int n = uniform(1, 3);

    Eigen::MatrixXd vals(n, N + 1);
    for (Eigen::Index i = 0; i < vals.size(); ++i) vals.data()[i] = gauss(rng);
    Eigen::MatrixXd B(n, n);
    for (Eigen::Index i = 0; i < B.size(); ++i) B.data()[i] = gauss(rng);
    const Eigen::MatrixXd R = B * B.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
    for (int v : {N, m, nu1, num, n}) digest.add(static_cast<std::uint64_t>(v));
    digest.add(vals);
    digest.add(R);

    const GridFunction f(vals, N);
    const GridFunction rho = differences(f);

    tally(0, rel_excess(lower_bound_function(f, R, m, nu1, num), j_functional_nested(f, R, m)),
          opts.validity_tol);
    tally(1, rel_excess(lower_bound_difference(f, R, m, nu1, num), j_functional_nested(rho, R, m)),
          opts.validity_tol);

    // f on the projection span: the bound is attained.
    {
      const Eigen::MatrixXd& pm = span_samples(N, m, num);
      Eigen::MatrixXd span_vals = Eigen::MatrixXd::Zero(n, N + 1);
      for (int j = 0; j <= num; ++j) {
        Eigen::VectorXd a(n);
        for (int c = 0; c < n; ++c) a[c] = gauss(rng);
        digest.add(Eigen::MatrixXd(a));
        span_vals.leftCols(N) += a * pm.row(j);
      }
      const GridFunction g(span_vals, N);
      tally(2, rel_diff(lower_bound_function(g, R, m, nu1, num), j_functional_nested(g, R, m)),
            opts.equality_tol);
    }

    // Closed-form specializations on the same sample.
    // Relative to the functional being bounded: a bound that nearly vanishes
    // still carries roundoff of the size of its inputs.
    const double Nd = N;
    const double j1 = j_functional(f, R, 1);
    const double j2 = N >= 2 ? j_functional(f, R, 2) : 0.0;
    const double jd = j_functional(rho, R, 1);
    const Eigen::VectorXd S1 = nested_sum(f, 1);
    if (N >= 1) tally(3, rel_diff(lower_bound_function(f, R, 1, 0, 0), quad(S1, R) / Nd, j1), opts.corollary_tol);
    if (N >= 2) {
      const Eigen::VectorXd S2 = nested_sum(f, 2);
      const Eigen::VectorXd O11 = S1 - 2.0 / (Nd + 1) * S2;
      const double wirt = (quad(S1, R) + 3 * (Nd + 1) / (Nd - 1) * quad(O11, R)) / Nd;
      tally(4, rel_diff(lower_bound_function(f, R, 1, 1, 1), wirt, j1), opts.corollary_tol);
      tally(6, rel_diff(lower_bound_function(f, R, 2, 1, 0), 2.0 / (Nd * (Nd + 1)) * quad(S2, R), j2),
            opts.corollary_tol);
      if (N >= 3) {
        const Eigen::VectorXd S3 = nested_sum(f, 3);
        const Eigen::VectorXd O12 = S1 - 6.0 / (Nd + 1) * S2 + 12.0 / ((Nd + 1) * (Nd + 2)) * S3;
        const double three = wirt + 5 * (Nd + 1) * (Nd + 2) / ((Nd - 1) * (Nd - 2)) * quad(O12, R) / Nd;
        tally(5, rel_diff(lower_bound_function(f, R, 1, 2, 2), three, j1), opts.corollary_tol);
        const Eigen::VectorXd O21 = S2 - 3.0 / (Nd + 2) * S3;
        const double dbl = 2.0 / (Nd * (Nd + 1)) * (quad(S2, R) + 8 * (Nd + 2) / (Nd - 1) * quad(O21, R));
        tally(6, rel_diff(lower_bound_function(f, R, 2, 2, 1), dbl, j2), opts.corollary_tol);
      }
    }
    {
      const Eigen::VectorXd O10 = f(N) - f(0);
      const double jensen_d = quad(O10, R) / Nd;
      tally(7, rel_diff(lower_bound_difference(f, R, 1, 0, 0), jensen_d, jd), opts.corollary_tol);
      if (N >= 2) {
        const Eigen::VectorXd total = f.values.leftCols(N + 1).rowwise().sum();
        const Eigen::VectorXd O11 = f(N) + f(0) - 2.0 / (Nd + 1) * total;
        const double wirt_d = jensen_d + 3 * (Nd + 1) / (Nd - 1) * quad(O11, R) / Nd;
        tally(8, rel_diff(lower_bound_difference(f, R, 1, 1, 1), wirt_d, jd), opts.corollary_tol);
      }
    }
  };

  if (opts.exhaustive) {
    for (int N = 1; N <= opts.nmax; ++N)
      for (int m = 1; m <= std::min(opts.mmax, N); ++m)
        for (int nu1 = m - 1; nu1 <= N - 1; ++nu1)
          for (int num = 0; num <= nu1 - m + 1; ++num)
            for (int trial = 0; trial < opts.trials; ++trial) run_trial(N, m, nu1, num);
  } else {
    for (int trial = 0; trial < opts.trials; ++trial) {
      const int N = uniform(1, opts.nmax);
      const int m = uniform(1, std::min(opts.mmax, N));
      const int nu1 = uniform(m - 1, N - 1);
      run_trial(N, m, nu1, uniform(0, nu1 - m + 1));
    }
  }
  report.digest = digest.value();
  return report;
}

}  // namespace msdelay
