#include "qfactor/tracial_algebra.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace qfactor {

FiniteTracialAlgebra::FiniteTracialAlgebra(std::vector<Index> blocks,
                                           std::vector<double> weights,
                                           double eps)
    : trace_(std::move(blocks), std::move(weights)) {
  if (trace_.blocks().empty()) {
    throw InvalidArgument("tracial algebra needs at least one block");
  }
  double total = 0.0;
  for (double w : trace_.weights()) {
    if (w < 0.0) throw InvalidArgument("tracial algebra: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > eps) {
    throw InvalidArgument("tracial algebra: weights sum to " +
                          std::to_string(total) + ", expected 1");
  }
}

FiniteTracialAlgebra FiniteTracialAlgebra::full(Index d) {
  return FiniteTracialAlgebra({d}, {1.0});
}

bool FiniteTracialAlgebra::faithful() const {
  for (double w : weights()) {
    if (w == 0.0) return false;
  }
  return true;
}

bool FiniteTracialAlgebra::contains(const ComplexMatrix& x, double eps) const {
  if (x.rows() != dim() || x.cols() != dim()) return false;
  ComplexMatrix off = x;
  for (std::size_t j = 0; j < num_blocks(); ++j) {
    const Index o = block_offset(j);
    off.block(o, o, blocks()[j], blocks()[j]).setZero();
  }
  return max_abs(off) <= eps;
}

ComplexMatrix FiniteTracialAlgebra::block(const ComplexMatrix& x,
                                          std::size_t j) const {
  if (x.rows() != dim() || x.cols() != dim()) {
    throw DimensionError("tracial algebra: element has wrong dimension");
  }
  const Index o = block_offset(j);
  return x.block(o, o, blocks().at(j), blocks().at(j));
}

ComplexMatrix FiniteTracialAlgebra::assemble(
    const std::vector<ComplexMatrix>& parts) const {
  if (parts.size() != num_blocks()) {
    throw DimensionError("tracial algebra: wrong number of blocks");
  }
  ComplexMatrix x = ComplexMatrix::Zero(dim(), dim());
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const Index d = blocks()[j];
    if (parts[j].rows() != d || parts[j].cols() != d) {
      throw DimensionError("tracial algebra: block " + std::to_string(j) +
                           " should be " + std::to_string(d) + "x" +
                           std::to_string(d));
    }
    x.block(block_offset(j), block_offset(j), d, d) = parts[j];
  }
  return x;
}

ComplexMatrix FiniteTracialAlgebra::block_projection(std::size_t j) const {
  ComplexMatrix p = ComplexMatrix::Zero(dim(), dim());
  const Index o = block_offset(j);
  p.block(o, o, blocks().at(j), blocks().at(j)).setIdentity();
  return p;
}

ComplexMatrix partial_trace_ancilla(const ComplexMatrix& y, Index n,
                                    const TraceFunctional& tau_ancilla) {
  const Index d = tau_ancilla.dim();
  if (y.rows() != n * d || y.cols() != n * d) {
    throw DimensionError("partial_trace_ancilla: expected a " +
                         std::to_string(n * d) + "-dimensional matrix");
  }
  ComplexMatrix out(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      out(a, b) = tau_ancilla(y.block(a * d, b * d, d, d));
    }
  }
  return out;
}

}  // namespace qfactor
