#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qfactor/matrix_core.hpp"

namespace qfactor {

/// An n x n family {f_ij} of d x d matrices, meant to satisfy
///   f_ij f_kl = delta_jk f_il,   f_ij* = f_ji,   sum_i f_ii = 1.
/// Construction only checks shapes; use validate_units for the relations.
/// Indices are 0-based.
class MatrixUnitSystem {
 public:
  /// `units` is row-major: units[i * order + j] = f_ij.
  MatrixUnitSystem(Index order, std::vector<ComplexMatrix> units);

  Index order() const { return order_; }
  Index ambient_dim() const { return ambient_dim_; }

  const ComplexMatrix& operator()(Index i, Index j) const {
    return units_[static_cast<std::size_t>(i * order_ + j)];
  }
  const std::vector<ComplexMatrix>& units() const { return units_; }

  /// The embedding x -> sum_ij x_ij f_ij of M_n.
  ComplexMatrix embed(const ComplexMatrix& x) const;
  /// sum_i f_ii.
  ComplexMatrix unit() const;

 private:
  Index order_;
  Index ambient_dim_;
  std::vector<ComplexMatrix> units_;
};

struct UnitsReport {
  bool pass = true;
  double max_residual = 0.0;
  /// The relation with the largest residual, e.g. "f_12 f_21 = f_11";
  /// empty when every residual is zero.
  std::string worst_relation;
};

UnitsReport validate_units(const MatrixUnitSystem& sys,
                           const TolerancePolicy& pol = {});

MatrixUnitSystem standard_units(Index n);

/// u (e_ij (x) 1_{d/n}) u* for a Haar unitary u in M_d.
MatrixUnitSystem random_unital_embedding(Index n, Index d, Rng& rng);
MatrixUnitSystem random_unital_embedding(Index n, Index d, std::uint64_t seed);

/// Unitary u with u fp_ij u* = f_ij, built as u = sum_k f_k1 w fp_1k with w
/// an isometry from range(fp_11) onto range(f_11).
ComplexMatrix intertwiner(const MatrixUnitSystem& f, const MatrixUnitSystem& fp,
                          const TolerancePolicy& pol = {});

/// Matrix units in M_n (x) M_d from unitaries u_2..u_n in M_d:
/// f_11 = e_11 (x) 1, f_1j = e_1j (x) u_j, f_ij = f_1i* f_1j.
MatrixUnitSystem units_from_unitaries(Index n,
                                      std::span<const ComplexMatrix> unitaries,
                                      const TolerancePolicy& pol = {});

/// The d x d blocks g_ij of b = sum e_ij (x) g_ij, row-major.
std::vector<ComplexMatrix> generator_blocks(const ComplexMatrix& b, Index n,
                                            Index d);
/// Inverse of generator_blocks.
ComplexMatrix assemble_blocks(std::span<const ComplexMatrix> blocks, Index n);

/// Rank of a Hermitian projection, read off its trace.
Index projection_rank(const ComplexMatrix& p);

/// Orthonormal basis (as columns) of the range of a Hermitian projection.
ComplexMatrix projection_range(const ComplexMatrix& p, double eps);

}  // namespace qfactor
