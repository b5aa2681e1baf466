#include "msdelay/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace msdelay {

EigenDecomposition symmetric_eigen(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("symmetric_eigen: matrix must be square");
  if (!M.allFinite()) throw std::invalid_argument("symmetric_eigen: non-finite entries");
  const Eigen::MatrixXd S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success) throw std::runtime_error("symmetric_eigen: no convergence");
  return {es.eigenvalues(), es.eigenvectors()};
}

void SolverOptions::validate() const {
  if (!(feas_tol > 0) || !(duality_gap_tol > 0) || !(borderline_band > 0) || max_iterations < 1)
    throw std::invalid_argument("SolverOptions: tolerances must be positive");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::MarginPositive: return "MarginPositive";
    case SolveStatus::MarginNonpositive: return "MarginNonpositive";
    case SolveStatus::MaxIterations: return "MaxIterations";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "unknown";
}

namespace {

// A block after flattening: G(x, t) = constant + sum_k x[vars[k]] coeffs[k] - t I,
// with the sign of negative blocks already folded in.
struct FlatBlock {
  int dim = 0;
  Eigen::MatrixXd constant;
  std::vector<int> vars;
  std::vector<Eigen::MatrixXd> coeffs;
};

struct FlatProblem {
  int n = 0;                      // scalar decision variables (t excluded)
  std::vector<int> var_offset;    // first scalar index of each matrix variable
  std::vector<int> diag;          // scalar indices of diagonal entries
  std::vector<FlatBlock> blocks;
  int barrier_degree = 0;         // sum of block dimensions
};

// svec ordering within a matrix variable: (i, j) for i <= j, row by row.
int svec_index(int d, int i, int j) { return i * d - i * (i - 1) / 2 + (j - i); }

FlatProblem flatten(const BlockLmi& lmi) {
  lmi.validate();
  FlatProblem fp;
  for (int v = 0; v < lmi.num_vars(); ++v) {
    const int d = lmi.var_dims[v];
    fp.var_offset.push_back(fp.n);
    for (int i = 0; i < d; ++i) fp.diag.push_back(fp.n + svec_index(d, i, i));
    fp.n += d * (d + 1) / 2;
  }

  for (const auto& b : lmi.blocks) {
    const double sign = b.sense == Sense::PositiveDefinite ? 1.0 : -1.0;
    FlatBlock fb;
    fb.dim = b.dim;
    fb.constant = b.constant.size() ? Eigen::MatrixXd(sign * b.constant) : Eigen::MatrixXd::Zero(b.dim, b.dim);

    std::vector<int> index_of(static_cast<std::size_t>(fp.n), -1);
    for (const auto& term : b.terms) {
      const int d = lmi.var_dims[term.variable];
      const auto& B = term.factor;
      for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
          const int k = fp.var_offset[term.variable] + svec_index(d, i, j);
          if (index_of[k] < 0) {
            index_of[k] = static_cast<int>(fb.vars.size());
            fb.vars.push_back(k);
            fb.coeffs.push_back(Eigen::MatrixXd::Zero(b.dim, b.dim));
          }
          Eigen::MatrixXd outer = B.row(i).transpose() * B.row(j);
          if (i != j) outer += outer.transpose().eval();
          fb.coeffs[index_of[k]] += (sign * term.weight) * outer;
        }
      }
    }
    fp.barrier_degree += fb.dim;
    fp.blocks.push_back(std::move(fb));
  }
  return fp;
}

Eigen::MatrixXd block_value(const FlatBlock& b, const Eigen::VectorXd& x, double t) {
  Eigen::MatrixXd G = b.constant;
  for (std::size_t k = 0; k < b.vars.size(); ++k) G += x[b.vars[k]] * b.coeffs[k];
  G.diagonal().array() -= t;
  return G;
}

struct Point {
  Eigen::VectorXd x;
  double t = 0.0;
};

// Cholesky factors of every block, or nothing when a block leaves the cone.
std::optional<std::vector<Eigen::LLT<Eigen::MatrixXd>>> factor_all(const FlatProblem& fp, const Point& p) {
  std::vector<Eigen::LLT<Eigen::MatrixXd>> out;
  out.reserve(fp.blocks.size());
  for (const auto& b : fp.blocks) {
    Eigen::LLT<Eigen::MatrixXd> llt(block_value(b, p.x, p.t));
    if (llt.info() != Eigen::Success) return std::nullopt;
    const auto& L = llt.matrixLLT();
    if (!(L.diagonal().minCoeff() > 0) || !L.diagonal().allFinite()) return std::nullopt;
    out.push_back(std::move(llt));
  }
  return out;
}

// Gradient and Hessian of the barrier -sum log det G_b over y = (x, t).
void barrier_derivatives(const FlatProblem& fp, const std::vector<Eigen::LLT<Eigen::MatrixXd>>& chol,
                         Eigen::VectorXd& g, Eigen::MatrixXd& H) {
  const int ny = fp.n + 1;
  g.setZero(ny);
  H.setZero(ny, ny);
  for (std::size_t bi = 0; bi < fp.blocks.size(); ++bi) {
    const FlatBlock& b = fp.blocks[bi];
    const auto L = chol[bi].matrixL();
    const int d = b.dim;
    const int nb = static_cast<int>(b.vars.size());

    // Column c holds vec(L^-1 D_c L^-T) with D_c = dG/dy_c; the last one is for t.
    Eigen::MatrixXd W(std::size_t(d) * d, nb + 1);
    for (int c = 0; c <= nb; ++c) {
      Eigen::MatrixXd half = (c < nb) ? Eigen::MatrixXd(L.solve(b.coeffs[c]))
                                      : Eigen::MatrixXd(-L.solve(Eigen::MatrixXd::Identity(d, d)));
      Eigen::MatrixXd w = L.solve(half.transpose());
      W.col(c) = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
    }
    const Eigen::MatrixXd Hb = W.transpose() * W;
    auto global = [&](int c) { return c < nb ? b.vars[c] : fp.n; };
    for (int c = 0; c <= nb; ++c) {
      double tr = 0.0;
      for (int i = 0; i < d; ++i) tr += W(std::size_t(i) * d + i, c);
      g[global(c)] -= tr;
      for (int e = 0; e <= nb; ++e) H(global(c), global(e)) += Hb(c, e);
    }
  }
}

std::vector<Eigen::MatrixXd> unpack(const BlockLmi& lmi, const FlatProblem& fp, const Eigen::VectorXd& x,
                                    double scale) {
  std::vector<Eigen::MatrixXd> out;
  for (int v = 0; v < lmi.num_vars(); ++v) {
    const int d = lmi.var_dims[v];
    Eigen::MatrixXd X(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) X(i, j) = X(j, i) = scale * x[fp.var_offset[v] + svec_index(d, i, j)];
    out.push_back(std::move(X));
  }
  return out;
}

}  // namespace

FeasibilityResult solve_feasibility(const BlockLmi& lmi, const SolverOptions& opts) {
  opts.validate();
  const FlatProblem fp = flatten(lmi);
  const int total_dim = lmi.total_var_dim();
  const double budget = opts.trace_budget > 0 ? opts.trace_budget : double(total_dim);
  const int n = fp.n;
  const int ny = n + 1;

  // Equality sum(diag) = budget, eliminated through the pivot x[diag[0]].
  Eigen::VectorXd a = Eigen::VectorXd::Zero(ny);
  for (int k : fp.diag) a[k] = 1.0;
  const int pivot = fp.diag.front();
  std::vector<int> free_idx;
  for (int k = 0; k < ny; ++k)
    if (k != pivot) free_idx.push_back(k);
  const int nz = static_cast<int>(free_idx.size());

  // Start from X_v = (budget / total_dim) I with t well below the smallest eigenvalue.
  Point p;
  p.x = Eigen::VectorXd::Zero(n);
  for (int k : fp.diag) p.x[k] = budget / total_dim;
  double lam_min = std::numeric_limits<double>::infinity();
  for (const auto& b : fp.blocks)
    lam_min = std::min(lam_min, symmetric_eigen(block_value(b, p.x, 0.0)).values[0]);
  p.t = lam_min - 1.0 - 0.1 * std::abs(lam_min);

  FeasibilityResult res;
  auto chol = factor_all(fp, p);
  if (!chol) {
    res.status = SolveStatus::NumericalFailure;
    return res;
  }

  // Initial barrier weight: stationarity in t, kappa = sum_b tr(G_b^-1).
  double kappa = 0.0;
  for (const auto& llt : *chol) kappa += llt.solve(Eigen::MatrixXd::Identity(llt.rows(), llt.rows())).trace();
  kappa = std::max(kappa, 1e-8);
  constexpr double kStageFactor = 10.0;
  constexpr double kCenterTol = 1e-9;  // Newton decrement^2 / 2

  Eigen::VectorXd g;
  Eigen::MatrixXd H;
  bool stalled = false;
  bool out_of_iterations = false;
  double gap = fp.barrier_degree / kappa;

  for (;;) {
    // Centering: damped Newton on -kappa t - sum log det G_b restricted to the budget plane.
    for (;;) {
      if (res.iterations >= opts.max_iterations) {
        out_of_iterations = true;
        break;
      }
      barrier_derivatives(fp, *chol, g, H);
      g[n] -= kappa;

      Eigen::VectorXd gr(nz);
      Eigen::MatrixXd Hr(nz, nz);
      for (int r = 0; r < nz; ++r) {
        const int kr = free_idx[r];
        gr[r] = g[kr] - a[kr] * g[pivot];
        for (int c = 0; c < nz; ++c) {
          const int kc = free_idx[c];
          Hr(r, c) = H(kr, kc) - a[kr] * H(pivot, kc) - a[kc] * H(kr, pivot) + a[kr] * a[kc] * H(pivot, pivot);
        }
      }
      Eigen::LDLT<Eigen::MatrixXd> ldlt(Hr);
      const Eigen::VectorXd dz = -ldlt.solve(gr);
      if (ldlt.info() != Eigen::Success || !dz.allFinite()) {
        stalled = true;
        break;
      }
      const double dec2 = -gr.dot(dz);
      if (!(dec2 >= 0)) {
        stalled = true;
        break;
      }
      if (dec2 / 2 <= kCenterTol) break;

      Eigen::VectorXd dy = Eigen::VectorXd::Zero(ny);
      for (int r = 0; r < nz; ++r) {
        dy[free_idx[r]] += dz[r];
        dy[pivot] -= a[free_idx[r]] * dz[r];
      }

      // Damped step 1/(1+lambda) stays inside the cone for a self-concordant barrier;
      // backtrack only to absorb roundoff.
      const double lam = std::sqrt(dec2);
      double step = lam > 0.25 ? 1.0 / (1.0 + lam) : 1.0;
      std::optional<std::vector<Eigen::LLT<Eigen::MatrixXd>>> next;
      Point trial;
      for (int tries = 0; tries < 60; ++tries, step *= 0.5) {
        trial.x = p.x + step * dy.head(n);
        trial.t = p.t + step * dy[n];
        next = factor_all(fp, trial);
        if (next) break;
      }
      ++res.iterations;
      if (!next) {
        stalled = true;
        break;
      }
      p = std::move(trial);
      chol = std::move(next);
    }
    gap = fp.barrier_degree / kappa;
    if (stalled || out_of_iterations) break;
    if (gap <= opts.duality_gap_tol) break;
    if (p.t + gap <= opts.feas_tol) break;  // t* cannot clear the threshold
    kappa *= kStageFactor;
  }

  res.margin = p.t;
  res.margin_upper = p.t + gap;
  res.borderline = std::abs(p.t) <= opts.borderline_band;

  // Certificate in the default normalization: mean eigenvalue one.
  auto cert = unpack(lmi, fp, p.x, total_dim / budget);
  const double scaled_margin = p.t * total_dim / budget;
  if (scaled_margin > opts.feas_tol && verify_certificate(lmi, cert, 0.5 * opts.feas_tol)) {
    res.feasible = true;
    res.status = SolveStatus::MarginPositive;
    res.certificate = std::move(cert);
  } else if (stalled && res.margin_upper > opts.feas_tol) {
    res.status = SolveStatus::NumericalFailure;
  } else if (out_of_iterations) {
    res.status = SolveStatus::MaxIterations;
  } else {
    res.status = SolveStatus::MarginNonpositive;
  }
  return res;
}

bool verify_certificate(const BlockLmi& lmi, std::span<const Eigen::MatrixXd> assignment, double tol) {
  lmi.validate();
  if (static_cast<int>(assignment.size()) != lmi.num_vars())
    throw std::invalid_argument("verify_certificate: wrong number of variables");
  double trace = 0.0;
  for (int v = 0; v < lmi.num_vars(); ++v) {
    const auto& X = assignment[static_cast<std::size_t>(v)];
    if (X.rows() != lmi.var_dims[v] || X.cols() != lmi.var_dims[v])
      throw std::invalid_argument("verify_certificate: variable " + lmi.var_names[v] + " has the wrong shape");
    trace += X.trace();
  }
  const double scale = trace / lmi.total_var_dim();
  if (!(scale > 0)) return false;
  for (const auto& b : lmi.blocks) {
    const Eigen::VectorXd ev = symmetric_eigen(b.evaluate(assignment)).values;
    if (b.sense == Sense::PositiveDefinite && !(ev[0] >= tol * scale)) return false;
    if (b.sense == Sense::NegativeDefinite && !(ev[ev.size() - 1] <= -tol * scale)) return false;
  }
  return true;
}

}  // namespace msdelay
