#include "qfactor/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace qfactor {

void TolerancePolicy::validate() const {
  if (!(eps_eq > 0.0) || !(eps_psd > 0.0) || !(eps_rank > 0.0)) {
    throw InvalidArgument("tolerances must be strictly positive");
  }
}

TolerancePolicy TolerancePolicy::uniform(double eps) {
  TolerancePolicy pol{eps, eps, eps};
  pol.validate();
  return pol;
}

TraceFunctional::TraceFunctional(std::vector<Index> blocks,
                                 std::vector<double> weights)
    : blocks_(std::move(blocks)), weights_(std::move(weights)) {
  if (blocks_.size() != weights_.size()) {
    throw DimensionError("trace functional: " + std::to_string(blocks_.size()) +
                         " blocks but " + std::to_string(weights_.size()) +
                         " weights");
  }
  offsets_.reserve(blocks_.size());
  for (Index b : blocks_) {
    if (b < 1) throw InvalidArgument("trace functional: block size must be >= 1");
    offsets_.push_back(dim_);
    dim_ += b;
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) throw InvalidArgument("trace functional: non-finite weight");
  }
}

TraceFunctional TraceFunctional::normalized(Index d) { return {{d}, {1.0}}; }

TraceFunctional TraceFunctional::unnormalized(Index d) {
  return {{d}, {static_cast<double>(d)}};
}

Complex TraceFunctional::operator()(const ComplexMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw DimensionError("trace functional on M_" + std::to_string(dim_) +
                         " applied to a " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + " matrix");
  }
  Complex total{0.0, 0.0};
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    if (weights_[j] == 0.0) continue;
    const Index d = blocks_[j];
    const Index o = offsets_[j];
    total += weights_[j] * x.block(o, o, d, d).trace() / static_cast<double>(d);
  }
  return total;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b,
                 const TraceFunctional& tau) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("hs_inner: operands have different shapes");
  }
  return tau(b.adjoint() * a);
}

double min_eigenvalue(const ComplexMatrix& m) {
  require_square(m, "min_eigenvalue");
  if (m.size() == 0) return 0.0;
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const ComplexMatrix& m, const TolerancePolicy& pol) {
  require_square(m, "is_psd");
  if (!is_hermitian(m, pol.eps_eq)) {
    throw InvalidArgument("is_psd: matrix is not Hermitian within eps_eq");
  }
  return min_eigenvalue(m) >= -pol.eps_psd;
}

std::vector<ComplexMatrix> orthonormal_basis(
    std::span<const ComplexMatrix> vectors, const InnerProduct& inner,
    const TolerancePolicy& pol) {
  std::vector<ComplexMatrix> out;
  for (const ComplexMatrix& v : vectors) {
    if (!out.empty() && (v.rows() != out.front().rows() ||
                         v.cols() != out.front().cols())) {
      throw DimensionError("orthonormal_basis: vectors have different shapes");
    }
    ComplexMatrix r = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const ComplexMatrix& q : out) r -= inner(r, q) * q;
    }
    const double norm = std::sqrt(std::max(0.0, inner(r, r).real()));
    if (norm <= pol.eps_rank) continue;
    out.push_back(r / norm);
  }
  return out;
}

std::vector<ComplexMatrix> orthonormal_basis(
    std::span<const ComplexMatrix> vectors, const TolerancePolicy& pol) {
  return orthonormal_basis(
      vectors,
      [](const ComplexMatrix& a, const ComplexMatrix& b) {
        return (b.adjoint() * a).trace();
      },
      pol);
}

ComplexMatrix null_space_coordinates(const ComplexMatrix& linear_map,
                                     const TolerancePolicy& pol) {
  const Index cols = linear_map.cols();
  if (cols == 0) return ComplexMatrix(0, 0);
  if (linear_map.rows() == 0) return ComplexMatrix::Identity(cols, cols);

  // Tall maps are compressed to their triangular factor first; the singular
  // values are unchanged and the SVD stays cols x cols.
  ComplexMatrix reduced;
  if (linear_map.rows() > cols) {
    Eigen::HouseholderQR<ComplexMatrix> qr(linear_map);
    reduced = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  } else {
    reduced = linear_map;
  }
  Eigen::BDCSVD<ComplexMatrix> svd(reduced, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Index rank = 0;
  for (Index k = 0; k < s.size(); ++k) {
    if (s(k) > pol.eps_rank) ++rank;
  }
  return svd.matrixV().rightCols(cols - rank);
}

std::vector<ComplexMatrix> null_space(const ComplexMatrix& linear_map, Index d,
                                      const TolerancePolicy& pol) {
  if (linear_map.cols() != d * d) {
    throw DimensionError("null_space: map has " +
                         std::to_string(linear_map.cols()) +
                         " columns, expected " + std::to_string(d * d));
  }
  const ComplexMatrix kernel = null_space_coordinates(linear_map, pol);
  std::vector<ComplexMatrix> out;
  out.reserve(kernel.cols());
  for (Index k = 0; k < kernel.cols(); ++k) out.push_back(unflatten(kernel.col(k), d));
  return out;
}

SpanAccumulator::SpanAccumulator(Index length, double eps_rank)
    : length_(length), eps_rank_(eps_rank), basis_(length, 0) {}

Index SpanAccumulator::add(const ComplexVector& candidate) {
  return add(ComplexMatrix(candidate));
}

Index SpanAccumulator::add(const ComplexMatrix& candidates) {
  if (candidates.rows() != length_) {
    throw DimensionError("SpanAccumulator: candidate length mismatch");
  }
  if (rank_ == length_) return 0;

  ComplexMatrix c = candidates;
  for (Index k = 0; k < c.cols(); ++k) {
    const double norm = c.col(k).norm();
    if (norm > 0.0) c.col(k) /= norm;
  }
  // Block projection against the existing basis, twice.
  if (rank_ > 0) {
    const auto q = basis_.leftCols(rank_);
    for (int pass = 0; pass < 2; ++pass) c -= q * (q.adjoint() * c);
  }
  // Sequential Gram-Schmidt within the batch.
  const Index first_new = rank_;
  Index added = 0;
  for (Index k = 0; k < c.cols() && rank_ < length_; ++k) {
    ComplexVector r = c.col(k);
    if (rank_ > first_new) {
      const auto q = basis_.middleCols(first_new, rank_ - first_new);
      for (int pass = 0; pass < 2; ++pass) r -= q * (q.adjoint() * r);
    }
    const double norm = r.norm();
    if (norm <= eps_rank_) continue;
    if (basis_.cols() == rank_) {
      const Index grown = std::min(length_, std::max<Index>(2 * rank_, 16));
      basis_.conservativeResize(Eigen::NoChange, grown);
    }
    basis_.col(rank_) = r / norm;
    ++rank_;
    ++added;
  }
  return added;
}

double SpanAccumulator::residual(const ComplexVector& v) const {
  if (v.size() != length_) throw DimensionError("SpanAccumulator: length mismatch");
  if (rank_ == 0) return v.norm();
  const auto q = basis_.leftCols(rank_);
  ComplexVector r = v - q * (q.adjoint() * v);
  r -= q * (q.adjoint() * r);
  return r.norm();
}

ComplexVector flatten(const ComplexMatrix& x) {
  return Eigen::Map<const ComplexVector>(x.data(), x.size());
}

ComplexMatrix unflatten(const Eigen::Ref<const ComplexVector>& v, Index d) {
  if (v.size() != d * d) throw DimensionError("unflatten: length is not d*d");
  ComplexMatrix x(d, d);
  Eigen::Map<ComplexVector>(x.data(), x.size()) = v;
  return x;
}

ComplexMatrix matrix_unit(Index n, Index i, Index j) {
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw DimensionError("matrix_unit: index out of range");
  }
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

ComplexMatrix identity(Index d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: operands have different shapes");
  }
  return max_abs(a - b);
}

bool is_hermitian(const ComplexMatrix& m, double eps) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= eps;
}

bool is_unitary(const ComplexMatrix& u, double eps) {
  if (u.rows() != u.cols()) return false;
  const ComplexMatrix id = identity(u.rows());
  return max_abs(u * u.adjoint() - id) <= eps && max_abs(u.adjoint() * u - id) <= eps;
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": matrix is not square (" +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ")");
  }
}

ComplexMatrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix z(rows, cols);
  // Fill in a fixed (row-major) order so the stream is layout-independent.
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  }
  return z;
}

ComplexMatrix haar_unitary(Index d, Rng& rng) {
  if (d < 1) throw InvalidArgument("haar_unitary: dimension must be >= 1");
  const ComplexMatrix z = gaussian_matrix(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Index k = 0; k < d; ++k) {
    const double a = std::abs(r(k, k));
    const Complex phase = a > 0.0 ? r(k, k) / a : Complex(1.0, 0.0);
    q.col(k) *= phase;
  }
  return q;
}

}  // namespace qfactor
