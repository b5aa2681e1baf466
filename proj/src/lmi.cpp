#include "msdelay/lmi.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>

#include "msdelay/coeffs.hpp"

namespace msdelay {

void SystemModel::validate() const {
  if (A.rows() == 0 || A.rows() != A.cols()) throw std::invalid_argument("SystemModel: A must be square");
  if (Ad.rows() != A.rows() || Ad.cols() != A.cols())
    throw std::invalid_argument("SystemModel: A_d must match A");
  if (!A.allFinite() || !Ad.allFinite()) throw std::invalid_argument("SystemModel: non-finite entries");
  if (tau < 1) throw std::invalid_argument("SystemModel: tau must be >= 1");
}

LmiSpec LmiSpec::hierarchy(int m, int nu1) {
  if (m < 1 || nu1 < m - 1) throw std::invalid_argument("LmiSpec::hierarchy: need m >= 1, nu1 >= m-1");
  LmiSpec spec;
  for (int j = 1; j <= m; ++j) spec.nus.push_back(nu1 - (j - 1));
  return spec;
}

void LmiSpec::validate() const {
  if (nus.empty()) throw std::invalid_argument("LmiSpec: m must be >= 1");
  if (nus.back() < 0) throw std::invalid_argument("LmiSpec: degrees must be nonnegative");
  for (std::size_t k = 1; k < nus.size(); ++k) {
    if (nus[k] >= nus[k - 1]) throw std::invalid_argument("LmiSpec: degrees must be strictly decreasing");
    // nu_k + k - 1 <= nu_1 with 1-based k
    if (nus[k] + static_cast<int>(k) > nus[0])
      throw std::invalid_argument("LmiSpec: nu_k + k - 1 must not exceed nu_1");
  }
}

void LmiSpec::validate(int tau) const {
  validate();
  if (nu1() > tau - 1)
    throw std::domain_error("degree exceeds horizon: nu1 = " + std::to_string(nu1()) + " > tau - 1 = " +
                            std::to_string(tau - 1));
}

namespace {

Eigen::MatrixXd kron_eye(const Eigen::MatrixXd& m, int n) {
  return Eigen::kroneckerProduct(m, Eigen::MatrixXd::Identity(n, n)).eval();
}

}  // namespace

StructuralMatrices structural(const SystemModel& sys, const LmiSpec& spec) {
  sys.validate();
  spec.validate(sys.tau);
  const int n = sys.nx();
  const int nu1 = spec.nu1();
  const int tau = sys.tau;
  const int D = nu1 + 2;

  StructuralMatrices s;
  s.nx = n;
  s.tau = tau;
  s.nu1 = nu1;

  const Eigen::MatrixXd eyeD = Eigen::MatrixXd::Identity(D, D);
  s.e1 = kron_eye(eyeD.row(0), n);
  s.e2 = kron_eye(eyeD.row(1), n);
  s.script_a = sys.A * s.e1 + sys.Ad * s.e2;

  s.T = Eigen::MatrixXd::Identity(D, D);
  for (int i = 2; i < D; ++i) s.T(i, i) = tau;

  Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(nu1 + 1, D);
  sel(0, 0) = 1;
  for (int i = 0; i < nu1; ++i) sel(i + 1, i + 2) = 1;
  s.gamma = kron_eye(sel * s.T, n);

  s.lambda_under.resize(std::size_t(n) * (nu1 + 1), std::size_t(n) * D);
  s.lambda_under.topRows(n) = s.script_a;
  for (int l = 0; l < nu1; ++l) {
    const LambdaRow row = lambda_row(tau, l, nu1);
    Eigen::RowVectorXd r(D);
    r(0) = row.c1.get_d();
    r(1) = row.c0.get_d();
    for (int q = 0; q < nu1; ++q) r(q + 2) = row.lambdas[q].get_d();
    s.lambda_under.middleRows(std::size_t(n) * (l + 1), n) = kron_eye(r * s.T, n);
  }

  const OrthoBasis& p1 = build_basis(tau, 1, nu1);
  for (int k = 1; k <= spec.m(); ++k) {
    const int nuk = spec.nus[k - 1];
    const OrthoBasis& pk = build_basis(tau, k, nuk);
    s.ztilde.push_back(zeta_matrix(p1, pk, nu1, nuk).entries.to_double() * s.T);
    std::vector<double> chi;
    for (int j = 0; j <= nuk; ++j) chi.push_back(pk.chi(j).get_d());
    s.chi.push_back(std::move(chi));
  }
  return s;
}

BlockLmi assemble(const SystemModel& sys, const LmiSpec& spec) {
  const StructuralMatrices s = structural(sys, spec);
  const int n = s.nx;
  const int m = spec.m();

  BlockLmi lmi;
  lmi.var_names = {"P", "Q"};
  lmi.var_dims = {s.state_dim(), n};
  for (int k = 1; k <= m; ++k) {
    lmi.var_names.push_back("R" + std::to_string(k));
    lmi.var_dims.push_back(n);
  }

  lmi.blocks.push_back(positivity_block("P", 0, s.state_dim()));
  lmi.blocks.push_back(positivity_block("Q", 1, n));
  for (int k = 1; k <= m; ++k) lmi.blocks.push_back(positivity_block("R" + std::to_string(k), 1 + k, n));

  LmiBlock M;
  M.name = "M";
  M.sense = Sense::NegativeDefinite;
  M.dim = s.phi_dim();
  // Psi1
  M.terms.push_back({0, s.lambda_under, 1.0});
  M.terms.push_back({0, s.gamma, -1.0});
  M.terms.push_back({1, s.e1, 1.0});
  M.terms.push_back({1, s.e2, -1.0});
  // Psi2 - Psi3
  const Eigen::MatrixXd rho_sel = s.script_a - s.e1;
  for (int k = 1; k <= m; ++k) {
    const double count = binomial(s.tau - 1 + k, k).get_d();
    M.terms.push_back({1 + k, rho_sel, count});
    const double inv_fact = 1.0 / factorial(k - 1).get_d();
    const Eigen::MatrixXd& zt = s.ztilde[k - 1];
    for (int j = 0; j < zt.rows(); ++j)
      M.terms.push_back({1 + k, kron_eye(zt.row(j), n), -s.chi[k - 1][j] * inv_fact});
  }
  lmi.blocks.push_back(std::move(M));
  lmi.validate();
  return lmi;
}

int nodv(int nx, int nu1, int m) {
  auto s = [](int d) { return d * (d + 1) / 2; };
  return s(nx * (nu1 + 1)) + (m + 1) * s(nx);
}

// ---------------------------------------------------------------------------
// Trajectories and the functional itself

Trajectory simulate(const SystemModel& sys, const Eigen::MatrixXd& history, int steps) {
  sys.validate();
  if (history.rows() != sys.nx() || history.cols() != sys.tau + 1)
    throw std::invalid_argument("simulate: history must hold x(-tau..0)");
  Trajectory traj;
  traj.first = -sys.tau;
  for (int c = 0; c <= sys.tau; ++c) traj.states.push_back(history.col(c));
  for (int t = 0; t < steps; ++t) traj.states.push_back(sys.A * traj.at(t) + sys.Ad * traj.at(t - sys.tau));
  return traj;
}

namespace {

void require_window(const SystemModel& sys, const Trajectory& traj, int t, int ahead) {
  if (t - sys.tau < traj.first || t + ahead > traj.last())
    throw std::invalid_argument("trajectory does not cover the window at t = " + std::to_string(t));
}

Eigen::VectorXd phi(const SystemModel& sys, const OrthoBasis& p1, int j, const Trajectory& traj, int t) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(sys.nx());
  for (int i = 0; i < sys.tau; ++i) acc += eval(p1.polys[j], Rational(i)).get_d() * traj.at(t - sys.tau + i);
  return acc;
}

}  // namespace

Eigen::VectorXd extended_state(const SystemModel& sys, int nu1, const Trajectory& traj, int t) {
  require_window(sys, traj, t, 0);
  const int n = sys.nx();
  Eigen::VectorXd out(std::size_t(n) * (nu1 + 1));
  out.head(n) = traj.at(t);
  if (nu1 > 0) {
    const OrthoBasis& p1 = build_basis(sys.tau, 1, nu1);
    for (int j = 0; j < nu1; ++j) out.segment(std::size_t(n) * (j + 1), n) = phi(sys, p1, j, traj, t);
  }
  return out;
}

Eigen::VectorXd augmented_state(const SystemModel& sys, int nu1, const Trajectory& traj, int t) {
  require_window(sys, traj, t, 0);
  const int n = sys.nx();
  Eigen::VectorXd out(std::size_t(n) * (nu1 + 2));
  out.head(n) = traj.at(t);
  out.segment(n, n) = traj.at(t - sys.tau);
  if (nu1 > 0) {
    const OrthoBasis& p1 = build_basis(sys.tau, 1, nu1);
    for (int j = 0; j < nu1; ++j)
      out.segment(std::size_t(n) * (j + 2), n) = phi(sys, p1, j, traj, t) / double(sys.tau);
  }
  return out;
}

double lkf_value(const SystemModel& sys, const LmiSpec& spec, const Eigen::MatrixXd& P,
                 const Eigen::MatrixXd& Q, std::span<const Eigen::MatrixXd> R, const Trajectory& traj, int t) {
  spec.validate(sys.tau);
  if (static_cast<int>(R.size()) != spec.m()) throw std::invalid_argument("lkf_value: need one R per summation level");
  require_window(sys, traj, t, 0);
  const int tau = sys.tau;

  const Eigen::VectorXd xt = extended_state(sys, spec.nu1(), traj, t);
  double v = xt.dot(P * xt);
  for (int s = 0; s < tau; ++s) {
    const auto& x = traj.at(t - tau + s);
    v += x.dot(Q * x);
  }
  // V_1k = sum over chains tau-1 >= i_1 >= ... >= i_k of sum_{s=i_k}^{tau-1} rho(s)'R_k rho(s);
  // rho(s) is counted once for every chain with i_k <= s.
  for (int k = 1; k <= spec.m(); ++k) {
    double chains = 0.0;
    for (int s = 0; s < tau; ++s) {
      chains += binomial(tau - 1 - s + k - 1, k - 1).get_d();
      const Eigen::VectorXd rho = traj.at(t - tau + s + 1) - traj.at(t - tau + s);
      v += chains * rho.dot(R[k - 1] * rho);
    }
  }
  return v;
}

DeltaVCheck delta_v_bound_check(const SystemModel& sys, const LmiSpec& spec, const Eigen::MatrixXd& P,
                                const Eigen::MatrixXd& Q, std::span<const Eigen::MatrixXd> R,
                                const Trajectory& traj) {
  spec.validate(sys.tau);
  if (static_cast<int>(traj.states.size()) < sys.tau + 2)
    throw std::invalid_argument("delta_v_bound_check: trajectory shorter than tau + 2");
  const BlockLmi lmi = assemble(sys, spec);
  std::vector<Eigen::MatrixXd> vars{P, Q};
  vars.insert(vars.end(), R.begin(), R.end());
  const Eigen::MatrixXd M = lmi.blocks.back().evaluate(vars);

  DeltaVCheck out;
  out.max_violation = -std::numeric_limits<double>::infinity();
  for (int t = traj.first + sys.tau; t + 1 <= traj.last(); ++t) {
    const double v0 = lkf_value(sys, spec, P, Q, R, traj, t);
    const double v1 = lkf_value(sys, spec, P, Q, R, traj, t + 1);
    const Eigen::VectorXd ph = augmented_state(sys, spec.nu1(), traj, t);
    const double form = ph.dot(M * ph);
    out.max_violation = std::max(out.max_violation, (v1 - v0) - form);
    out.scale = std::max(out.scale, std::abs(v0) + std::abs(v1) + std::abs(form));
    ++out.steps;
  }
  return out;
}

}  // namespace msdelay
