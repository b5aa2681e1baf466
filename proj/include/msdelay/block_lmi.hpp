#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace msdelay {

enum class Sense { PositiveDefinite, NegativeDefinite };

/// weight * factor' X_variable * factor
struct CongruenceTerm {
  int variable = 0;
  Eigen::MatrixXd factor;
  double weight = 1.0;
};

/// One strict matrix inequality: constant + sum of congruence terms, with
/// the sense the sum must satisfy.
struct LmiBlock {
  std::string name;
  Sense sense = Sense::PositiveDefinite;
  int dim = 0;
  std::vector<CongruenceTerm> terms;
  Eigen::MatrixXd constant;  // dim x dim, zero for homogeneous blocks

  Eigen::MatrixXd evaluate(std::span<const Eigen::MatrixXd> vars) const;
};

/// Structured affine map from symmetric decision matrices to constraint blocks.
struct BlockLmi {
  std::vector<std::string> var_names;
  std::vector<int> var_dims;
  std::vector<LmiBlock> blocks;

  int num_vars() const { return static_cast<int>(var_dims.size()); }
  /// Number of scalar decision variables: sum of n(n+1)/2.
  int nodv() const;
  /// Sum of the dimensions of all decision matrices.
  int total_var_dim() const;
  /// Throws std::invalid_argument on inconsistent shapes.
  void validate() const;
};

/// A block constrained to X_v > 0.
LmiBlock positivity_block(std::string name, int variable, int dim);

}  // namespace msdelay
