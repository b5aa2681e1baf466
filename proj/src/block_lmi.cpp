#include "msdelay/block_lmi.hpp"

#include <stdexcept>

namespace msdelay {

Eigen::MatrixXd LmiBlock::evaluate(std::span<const Eigen::MatrixXd> vars) const {
  Eigen::MatrixXd out = constant.size() ? constant : Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& term : terms) {
    const auto& X = vars[static_cast<std::size_t>(term.variable)];
    out.noalias() += term.weight * (term.factor.transpose() * X * term.factor);
  }
  return 0.5 * (out + out.transpose());
}

int BlockLmi::nodv() const {
  int total = 0;
  for (int d : var_dims) total += d * (d + 1) / 2;
  return total;
}

int BlockLmi::total_var_dim() const {
  int total = 0;
  for (int d : var_dims) total += d;
  return total;
}

void BlockLmi::validate() const {
  if (var_names.size() != var_dims.size()) throw std::invalid_argument("BlockLmi: names/dims mismatch");
  for (const auto& b : blocks) {
    if (b.dim <= 0) throw std::invalid_argument("BlockLmi: block '" + b.name + "' has no rows");
    if (b.constant.size() && (b.constant.rows() != b.dim || b.constant.cols() != b.dim))
      throw std::invalid_argument("BlockLmi: block '" + b.name + "' constant has the wrong shape");
    for (const auto& t : b.terms) {
      if (t.variable < 0 || t.variable >= num_vars())
        throw std::invalid_argument("BlockLmi: block '" + b.name + "' references an unknown variable");
      if (t.factor.rows() != var_dims[static_cast<std::size_t>(t.variable)] || t.factor.cols() != b.dim)
        throw std::invalid_argument("BlockLmi: block '" + b.name + "' has a mis-shaped factor");
    }
  }
}

LmiBlock positivity_block(std::string name, int variable, int dim) {
  LmiBlock b;
  b.name = std::move(name);
  b.sense = Sense::PositiveDefinite;
  b.dim = dim;
  b.terms.push_back({variable, Eigen::MatrixXd::Identity(dim, dim), 1.0});
  return b;
}

}  // namespace msdelay
