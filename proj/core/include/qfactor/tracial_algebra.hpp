#pragma once

#include <vector>

#include "qfactor/matrix_core.hpp"

namespace qfactor {

/// Finite von Neumann algebra M_{d_1} (+) ... (+) M_{d_r}, realized
/// block-diagonally in M_D (D = sum d_j), with the tracial state
/// tau(x) = sum_j c_j tr_{d_j}(x_j). Weights are a probability vector;
/// zero weights are allowed (the state is then not faithful).
class FiniteTracialAlgebra {
 public:
  FiniteTracialAlgebra(std::vector<Index> blocks, std::vector<double> weights,
                       double eps = 1e-9);

  /// M_d with its normalized trace.
  static FiniteTracialAlgebra full(Index d);

  const std::vector<Index>& blocks() const { return trace_.blocks(); }
  const std::vector<double>& weights() const { return trace_.weights(); }
  std::size_t num_blocks() const { return trace_.blocks().size(); }
  Index dim() const { return trace_.dim(); }
  Index block_offset(std::size_t j) const { return trace_.block_offset(j); }

  const TraceFunctional& trace() const { return trace_; }
  Complex tau(const ComplexMatrix& x) const { return trace_(x); }

  bool faithful() const;

  /// True iff x is D x D and vanishes outside the diagonal blocks.
  bool contains(const ComplexMatrix& x, double eps) const;

  /// Block j of x.
  ComplexMatrix block(const ComplexMatrix& x, std::size_t j) const;
  /// Block-diagonal matrix with the given blocks.
  ComplexMatrix assemble(const std::vector<ComplexMatrix>& blocks) const;

  /// Central projection onto block j.
  ComplexMatrix block_projection(std::size_t j) const;

 private:
  TraceFunctional trace_;
};

/// (id_n (x) tau_N)(y) for y in M_n (x) M_D, tensor order (system, ancilla).
ComplexMatrix partial_trace_ancilla(const ComplexMatrix& y, Index n,
                                    const TraceFunctional& tau_ancilla);

}  // namespace qfactor
