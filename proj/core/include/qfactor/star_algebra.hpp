#pragma once

#include <span>
#include <vector>

#include "qfactor/matrix_core.hpp"
#include "qfactor/matrix_units.hpp"

namespace qfactor {

/// A *-subalgebra of M_d given by a Hilbert-Schmidt orthonormal basis.
/// Basis elements are stored flattened (column-major) as the columns of a
/// d^2 x dim matrix.
class StarSubalgebra {
 public:
  StarSubalgebra(Index ambient_dim, ComplexMatrix coordinates, bool contains_unit);

  Index ambient_dim() const { return ambient_dim_; }
  Index dim() const { return coordinates_.cols(); }
  bool contains_unit() const { return contains_unit_; }

  const ComplexMatrix& coordinates() const { return coordinates_; }
  ComplexMatrix element(Index k) const;
  std::vector<ComplexMatrix> basis() const;

  /// Hilbert-Schmidt distance from x to the algebra.
  double residual(const ComplexMatrix& x) const;

 private:
  Index ambient_dim_;
  ComplexMatrix coordinates_;
  bool contains_unit_;
};

/// Smallest *-closed, multiplicatively closed span containing `generators`
/// (and the identity when `unital`). Saturation: adjoin adjoints, then keep
/// multiplying newly found basis elements by the generators until a full
/// round adds nothing. The dimension is capped by d^2.
StarSubalgebra generated_algebra(std::span<const ComplexMatrix> generators,
                                 bool unital, const TolerancePolicy& pol = {});
/// Same, with the ambient dimension given explicitly so that an empty
/// generator list is meaningful (zero algebra, or the scalars if unital).
StarSubalgebra generated_algebra(Index ambient_dim,
                                 std::span<const ComplexMatrix> generators,
                                 bool unital, const TolerancePolicy& pol = {});

/// {x in M_d : x a = a x for every a in alg}.
StarSubalgebra commutant(const StarSubalgebra& alg, const TolerancePolicy& pol = {});

/// Largest HS residual of one span's basis against the other, both ways.
/// Zero (up to rounding) iff the spans coincide.
double span_distance(const StarSubalgebra& a, const StarSubalgebra& b);

struct BlockInfo {
  Index dim = 0;           ///< m_j: the block is M_{m_j}
  Index multiplicity = 0;  ///< k_j: rank of the central projection / m_j
};

/// Wedderburn data: alg = sum_j (M_{m_j} (x) 1_{k_j}) with minimal central
/// projections e_j summing to the unit.
struct BlockStructure {
  std::vector<BlockInfo> blocks;
  std::vector<ComplexMatrix> central_projections;
};

struct BlockStructureOptions {
  /// Eigenvalues of the random central element closer than this are merged.
  double cluster_gap = 1e-6;
  int max_attempts = 5;
};

/// Minimal central projections from the spectral projections of a random
/// self-adjoint element of the center, with the block data read off ranks.
/// Requires a unital algebra. Throws NumericalError if no attempt yields a
/// consistent decomposition.
BlockStructure block_structure(const StarSubalgebra& alg, Rng& rng,
                               const TolerancePolicy& pol = {},
                               const BlockStructureOptions& opts = {});

/// The center alg ∩ alg'.
StarSubalgebra center(const StarSubalgebra& alg, Rng& rng,
                      const TolerancePolicy& pol = {});

/// Trace-preserving conditional expectation onto span{f_ij}:
///   E(x) = sum_ij n <x, f_ij>_tau f_ij.
ComplexMatrix conditional_expectation(const ComplexMatrix& x,
                                      const MatrixUnitSystem& units,
                                      const TraceFunctional& tau,
                                      const TolerancePolicy& pol = {});

/// Orthogonal projection of x onto span(family) in <.,.>_tau, for a
/// pairwise orthogonal family: sum_b <x, b>_tau / <b, b>_tau * b.
ComplexMatrix orthogonal_projection(const ComplexMatrix& x,
                                    std::span<const ComplexMatrix> family,
                                    const TraceFunctional& tau);

/// I_tau = {a : tau(a* a) = 0} for a block trace: the blocks of weight zero.
struct KernelIdeal {
  /// Central projection onto the zero-weight blocks.
  ComplexMatrix projection;
  /// Matrix units spanning the ideal.
  std::vector<ComplexMatrix> basis;

  Index dim() const { return static_cast<Index>(basis.size()); }
  bool trivial() const { return basis.empty(); }
};

/// Weights <= zero_weight count as zero. Throws InvalidArgument on
/// weights below -zero_weight.
KernelIdeal trace_kernel_ideal(const TraceFunctional& tau, double zero_weight = 0.0);

}  // namespace qfactor
