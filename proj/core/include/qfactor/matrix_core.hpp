#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qfactor/errors.hpp"

namespace qfactor {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Dense square complex matrix; the carrier for every algebra element.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Seeded generator used for all randomness in the library.
using Rng = std::mt19937_64;

/// Absolute tolerances used for equality, positivity and rank decisions.
struct TolerancePolicy {
  double eps_eq = 1e-9;
  double eps_psd = 1e-9;
  double eps_rank = 1e-9;

  /// Throws InvalidArgument unless every tolerance is strictly positive.
  void validate() const;

  static TolerancePolicy uniform(double eps);
};

/// A (possibly unnormalized) trace functional on a block-diagonal algebra
/// inside M_D, D = sum of block sizes:
///   x -> sum_j weight_j * tr_{d_j}(x_j),
/// where tr_d is the normalized trace and x_j the j-th diagonal block.
/// Off-block entries of x are ignored.
class TraceFunctional {
 public:
  TraceFunctional(std::vector<Index> blocks, std::vector<double> weights);

  /// Normalized trace tr_d on M_d.
  static TraceFunctional normalized(Index d);
  /// Standard trace Tr_d on M_d.
  static TraceFunctional unnormalized(Index d);

  Index dim() const { return dim_; }
  const std::vector<Index>& blocks() const { return blocks_; }
  const std::vector<double>& weights() const { return weights_; }
  Index block_offset(std::size_t j) const { return offsets_.at(j); }

  Complex operator()(const ComplexMatrix& x) const;

 private:
  std::vector<Index> blocks_;
  std::vector<double> weights_;
  std::vector<Index> offsets_;
  Index dim_ = 0;
};

using InnerProduct =
    std::function<Complex(const ComplexMatrix&, const ComplexMatrix&)>;

/// <a, b>_tau = tau(b* a). Linear in a, conjugate-linear in b.
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b,
                 const TraceFunctional& tau);

/// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const ComplexMatrix& m);

/// True iff the smallest eigenvalue of m is >= -eps_psd. Throws
/// InvalidArgument when m is not Hermitian within eps_eq.
bool is_psd(const ComplexMatrix& m, const TolerancePolicy& pol = {});

/// Orthonormal spanning set for span(vectors) under `inner`, by modified
/// Gram-Schmidt with one re-orthogonalization pass. Vectors whose residual
/// norm is <= eps_rank are dropped.
std::vector<ComplexMatrix> orthonormal_basis(
    std::span<const ComplexMatrix> vectors, const InnerProduct& inner,
    const TolerancePolicy& pol = {});

/// Same, for the standard Hilbert-Schmidt inner product Tr(b* a).
std::vector<ComplexMatrix> orthonormal_basis(
    std::span<const ComplexMatrix> vectors, const TolerancePolicy& pol = {});

/// Orthonormal basis of ker(linear_map), where linear_map acts on
/// column-major flattened d x d matrices (so it has d*d columns). Singular
/// values <= eps_rank count as zero.
std::vector<ComplexMatrix> null_space(const ComplexMatrix& linear_map,
                                      Index d, const TolerancePolicy& pol = {});

/// Coordinate form of null_space: columns of the result span the kernel.
ComplexMatrix null_space_coordinates(const ComplexMatrix& linear_map,
                                     const TolerancePolicy& pol = {});

/// Incrementally grown orthonormal basis of a subspace of C^length
/// (Euclidean inner product on flattened coordinates).
class SpanAccumulator {
 public:
  SpanAccumulator(Index length, double eps_rank);

  /// Adds the columns of `candidates`; returns how many became new basis
  /// vectors. Each candidate is normalized before projection, so the
  /// rank cutoff is relative to its own norm.
  Index add(const ComplexMatrix& candidates);
  Index add(const ComplexVector& candidate);

  Index rank() const { return rank_; }
  Index length() const { return length_; }
  /// length x rank matrix with orthonormal columns.
  auto basis() const {
    return basis_.leftCols(rank_);
  }
  /// Euclidean distance from v to the span.
  double residual(const ComplexVector& v) const;

 private:
  Index length_;
  double eps_rank_;
  Index rank_ = 0;
  ComplexMatrix basis_;
};

// Small helpers shared across modules.

ComplexVector flatten(const ComplexMatrix& x);
ComplexMatrix unflatten(const Eigen::Ref<const ComplexVector>& v, Index d);

/// Standard matrix unit e_ij in M_n (0-based indices).
ComplexMatrix matrix_unit(Index n, Index i, Index j);
ComplexMatrix identity(Index d);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs(const ComplexMatrix& m);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool is_hermitian(const ComplexMatrix& m, double eps);
bool is_unitary(const ComplexMatrix& u, double eps);
void require_square(const ComplexMatrix& m, const char* what);

/// Haar-distributed unitary: QR of a matrix of independent standard complex
/// Gaussians, with R's diagonal phases moved into Q.
ComplexMatrix haar_unitary(Index d, Rng& rng);
/// Matrix of independent standard complex Gaussian entries.
ComplexMatrix gaussian_matrix(Index rows, Index cols, Rng& rng);

}  // namespace qfactor
