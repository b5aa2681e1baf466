#include <gtest/gtest.h>

#include <random>

#include "msdelay/ineq.hpp"
#include "oracles.hpp"

using namespace msdelay;

namespace {

struct Sample {
  GridFunction f;
  Eigen::MatrixXd R;
};

// f on 0..N (N+1 columns) and a well-conditioned SPD weight.
Sample random_sample(std::mt19937& gen, int n, int N) {
  std::normal_distribution<double> d;
  Eigen::MatrixXd v(n, N + 1);
  for (int c = 0; c <= N; ++c)
    for (int r = 0; r < n; ++r) v(r, c) = d(gen);
  Eigen::MatrixXd B(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) B(r, c) = d(gen);
  return {GridFunction(v, N), B * B.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n)};
}

Eigen::VectorXd sum1(const GridFunction& f, int upto) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(f.dim());
  for (int i = 0; i <= upto; ++i) s += f(i);
  return s;
}

// sum_{i1=0}^{N-1} sum_{i2=0}^{i1} ... with `depth` summation signs.
Eigen::VectorXd nested_sum(const GridFunction& f, int upper, int depth) {
  if (depth == 1) return sum1(f, upper);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(f.dim());
  for (int i = 0; i <= upper; ++i) s += nested_sum(f, i, depth - 1);
  return s;
}

double quad(const Eigen::VectorXd& v, const Eigen::MatrixXd& R) { return v.dot(R * v); }

double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

TEST(JFunctional, WeightFormMatchesNestedSums) {
  std::mt19937 gen(3);
  for (int m = 1; m <= 4; ++m)
    for (int N = 1; N <= 9; ++N) {
      const Sample s = random_sample(gen, 2, N);
      const double ref = oracle::nested_j(s.f.values, N, s.R, m);
      EXPECT_LT(rel(j_functional(s.f, s.R, m), ref), 1e-12);
      EXPECT_LT(rel(j_functional_nested(s.f, s.R, m), ref), 1e-12);
    }
}

TEST(JFunctional, RejectsIndefiniteWeight) {
  std::mt19937 gen(1);
  Sample s = random_sample(gen, 2, 4);
  s.R(0, 0) = -1.0;
  EXPECT_THROW(j_functional(s.f, s.R, 1), std::invalid_argument);
}

TEST(Bounds, NeverExceedNestedReference) {
  std::mt19937 gen(5);
  for (int m = 1; m <= 3; ++m)
    for (int N = m; N <= 10; ++N)
      for (int num = 0; num + m - 1 <= N - 1; ++num)
        for (int nu1 = num + m - 1; nu1 <= std::min(N - 1, num + m + 1); ++nu1) {
          const Sample s = random_sample(gen, 2, N);
          const double jf = oracle::nested_j(s.f.values, N, s.R, m);
          EXPECT_LE(lower_bound_function(s.f, s.R, m, nu1, num), jf + 1e-9 * std::max(1.0, jf));
          const GridFunction rho = differences(s.f);
          const double jr = oracle::nested_j(rho.values, N, s.R, m);
          if (nu1 >= 1 || m == 1) {
            EXPECT_LE(lower_bound_difference(s.f, s.R, m, nu1, num), jr + 1e-9 * std::max(1.0, jr));
          }
        }
}

TEST(Bounds, EqualityOnProjectionSpan) {
  // f in span{p_m0..p_m,num} makes the function bound exact; rho in that span
  // makes the difference bound exact.
  std::mt19937 gen(9);
  std::normal_distribution<double> d;
  for (int m = 1; m <= 3; ++m)
    for (int N = m + 2; N <= 10; ++N)
      for (int num = 0; num + m - 1 <= N - 1 && num <= 3; ++num) {
        const int nu1 = num + m - 1;
        const OrthoBasis& pm = build_basis(N, m, num);
        Eigen::MatrixXd coef(2, num + 1);
        for (int j = 0; j <= num; ++j) coef.col(j) << d(gen), d(gen);
        Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, N + 1);
        for (int i = 0; i <= N; ++i)
          for (int j = 0; j <= num; ++j) v.col(i) += eval(pm.polys[j], Rational(i)).get_d() * coef.col(j);
        const Eigen::MatrixXd R = Eigen::Vector2d(1.5, 0.7).asDiagonal();
        const GridFunction f(v, N);
        const double jf = oracle::nested_j(f.values, N, R, m);
        EXPECT_LT(rel(lower_bound_function(f, R, m, nu1, num), jf), 1e-9) << m << " " << N << " " << num;

        // Integrate the same polynomial to get a function whose differences lie in the span.
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, N + 1);
        for (int i = 1; i <= N; ++i) g.col(i) = g.col(i - 1) + v.col(i - 1);
        const GridFunction gf(g, N);
        const double jr = oracle::nested_j(differences(gf).values, N, R, m);
        if (nu1 >= 1 || m == 1) {
          EXPECT_LT(rel(lower_bound_difference(gf, R, m, std::max(nu1, 0), num), jr), 1e-9) << m << " " << N << " " << num;
        }
      }
}

TEST(Corollaries, SingleSummationClosedForms) {
  std::mt19937 gen(13);
  for (int N = 3; N <= 12; ++N) {
    const Sample s = random_sample(gen, 3, N);
    const double n = N;
    const Eigen::VectorXd o10 = nested_sum(s.f, N - 1, 1);
    const Eigen::VectorXd o11 = o10 - 2.0 / (n + 1) * nested_sum(s.f, N - 1, 2);
    const Eigen::VectorXd o12 =
        o10 - 6.0 / (n + 1) * nested_sum(s.f, N - 1, 2) + 12.0 / ((n + 1) * (n + 2)) * nested_sum(s.f, N - 1, 3);
    const double jensen = quad(o10, s.R) / n;
    const double wirtinger = jensen + 3.0 * (n + 1) / (n * (n - 1)) * quad(o11, s.R);
    const double third = wirtinger + 5.0 * (n + 1) * (n + 2) / (n * (n - 1) * (n - 2)) * quad(o12, s.R);
    EXPECT_LT(rel(lower_bound_function(s.f, s.R, 1, 0, 0), jensen), 1e-12);
    EXPECT_LT(rel(lower_bound_function(s.f, s.R, 1, 1, 1), wirtinger), 1e-12);
    EXPECT_LT(rel(lower_bound_function(s.f, s.R, 1, 2, 2), third), 1e-12);
  }
}

TEST(Corollaries, DoubleSummationClosedForms) {
  std::mt19937 gen(17);
  for (int N = 3; N <= 12; ++N) {
    const Sample s = random_sample(gen, 2, N);
    const double n = N;
    const Eigen::VectorXd o20 = nested_sum(s.f, N - 1, 2);
    const Eigen::VectorXd o21 = o20 - 3.0 / (n + 2) * nested_sum(s.f, N - 1, 3);
    const double first = 2.0 / (n * (n + 1)) * quad(o20, s.R);
    const double second = first + 2.0 / (n * (n + 1)) * 8.0 * (n + 2) / (n - 1) * quad(o21, s.R);
    EXPECT_LT(rel(lower_bound_function(s.f, s.R, 2, 1, 0), first), 1e-12);
    EXPECT_LT(rel(lower_bound_function(s.f, s.R, 2, 2, 1), second), 1e-12);
  }
}

TEST(Corollaries, DifferenceClosedForms) {
  std::mt19937 gen(19);
  for (int N = 2; N <= 12; ++N) {
    const Sample s = random_sample(gen, 2, N);
    const double n = N;
    const Eigen::VectorXd o10 = s.f(N) - s.f(0);
    const Eigen::VectorXd o11 = s.f(N) + s.f(0) - 2.0 / (n + 1) * sum1(s.f, N);
    const double jensen = quad(o10, s.R) / n;
    const double wirtinger = jensen + 3.0 * (n + 1) / (n * (n - 1)) * quad(o11, s.R);
    EXPECT_LT(rel(lower_bound_difference(s.f, s.R, 1, 1, 0), jensen), 1e-12);
    EXPECT_LT(rel(lower_bound_difference(s.f, s.R, 1, 1, 1), wirtinger), 1e-12);
  }
}

TEST(Bounds, MonotoneInDegree) {
  std::mt19937 gen(23);
  for (int m = 1; m <= 3; ++m) {
    const int N = 11;
    const Sample s = random_sample(gen, 2, N);
    double prev_f = -1.0, prev_d = -1.0;
    for (int num = 0; num + m - 1 <= 6; ++num) {
      const int nu1 = std::max(num + m - 1, 1);
      const double bf = lower_bound_function(s.f, s.R, m, nu1, num);
      const double bd = lower_bound_difference(s.f, s.R, m, nu1, num);
      EXPECT_GE(bf, prev_f - 1e-12 * std::abs(bf));
      EXPECT_GE(bd, prev_d - 1e-12 * std::abs(bd));
      prev_f = bf;
      prev_d = bd;
    }
  }
}

TEST(Bounds, IndependentOfNormalization) {
  std::mt19937 gen(29);
  for (int m = 1; m <= 3; ++m) {
    const Sample s = random_sample(gen, 2, 9);
    const int num = 2, nu1 = num + m - 1;
    const double a = lower_bound_function(s.f, s.R, m, nu1, num, Normalization::Monic);
    const double b = lower_bound_function(s.f, s.R, m, nu1, num, Normalization::SignAtMinusOne);
    EXPECT_LT(rel(a, b), 1e-12);
    const double c = lower_bound_difference(s.f, s.R, m, nu1, num, Normalization::Monic);
    const double d = lower_bound_difference(s.f, s.R, m, nu1, num, Normalization::SignAtMinusOne);
    EXPECT_LT(rel(c, d), 1e-12);
  }
}

TEST(Suite, DeterministicForFixedSeed) {
  IneqSuiteOptions opts;
  opts.trials = 20;
  const IneqSuiteReport a = run_inequality_suite(opts);
  const IneqSuiteReport b = run_inequality_suite(opts);
  EXPECT_TRUE(a.ok());
  EXPECT_GT(a.passed(), 0);
  EXPECT_EQ(a.digest, b.digest);
  opts.seed += 1;
  EXPECT_NE(run_inequality_suite(opts).digest, a.digest);
}

TEST(Suite, TinyHorizon) {
  IneqSuiteOptions opts;
  opts.trials = 10;
  opts.nmax = 3;
  const IneqSuiteReport rep = run_inequality_suite(opts);
  EXPECT_TRUE(rep.ok());
  EXPECT_GT(rep.passed(), 0);
}
