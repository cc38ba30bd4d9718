#include "qfactor/matrix_units.hpp"

#include <cmath>

namespace qfactor {
namespace {

std::string unit_name(Index i, Index j) {
  return "f_" + std::to_string(i + 1) + std::to_string(j + 1);
}

}  // namespace

MatrixUnitSystem::MatrixUnitSystem(Index order, std::vector<ComplexMatrix> units)
    : order_(order), ambient_dim_(0), units_(std::move(units)) {
  if (order_ < 1) throw InvalidArgument("matrix units: order must be >= 1");
  if (static_cast<Index>(units_.size()) != order_ * order_) {
    throw DimensionError("matrix units: expected " +
                         std::to_string(order_ * order_) + " elements, got " +
                         std::to_string(units_.size()));
  }
  ambient_dim_ = units_.front().rows();
  for (const ComplexMatrix& f : units_) {
    if (f.rows() != ambient_dim_ || f.cols() != ambient_dim_) {
      throw DimensionError("matrix units: elements must share one square shape");
    }
  }
}

ComplexMatrix MatrixUnitSystem::embed(const ComplexMatrix& x) const {
  if (x.rows() != order_ || x.cols() != order_) {
    throw DimensionError("matrix units: embed expects an " +
                         std::to_string(order_) + "x" + std::to_string(order_) +
                         " matrix");
  }
  ComplexMatrix out = ComplexMatrix::Zero(ambient_dim_, ambient_dim_);
  for (Index i = 0; i < order_; ++i) {
    for (Index j = 0; j < order_; ++j) {
      if (x(i, j) != Complex(0.0, 0.0)) out += x(i, j) * (*this)(i, j);
    }
  }
  return out;
}

ComplexMatrix MatrixUnitSystem::unit() const {
  ComplexMatrix out = ComplexMatrix::Zero(ambient_dim_, ambient_dim_);
  for (Index i = 0; i < order_; ++i) out += (*this)(i, i);
  return out;
}

UnitsReport validate_units(const MatrixUnitSystem& sys,
                           const TolerancePolicy& pol) {
  UnitsReport report;
  auto consider = [&](double residual, auto&& describe) {
    if (residual > report.max_residual) {
      report.max_residual = residual;
      report.worst_relation = describe();
    }
  };
  const Index n = sys.order();
  const Index d = sys.ambient_dim();
  const ComplexMatrix zero = ComplexMatrix::Zero(d, d);

  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      for (Index k = 0; k < n; ++k) {
        for (Index l = 0; l < n; ++l) {
          const ComplexMatrix prod = sys(i, j) * sys(k, l);
          const double r = j == k ? max_abs_diff(prod, sys(i, l)) : max_abs(prod);
          consider(r, [&] {
            return unit_name(i, j) + " " + unit_name(k, l) + " = " +
                   (j == k ? unit_name(i, l) : std::string("0"));
          });
        }
      }
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      consider(max_abs_diff(sys(i, j).adjoint(), sys(j, i)), [&] {
        return unit_name(i, j) + "* = " + unit_name(j, i);
      });
    }
  }
  consider(max_abs_diff(sys.unit(), identity(d)),
           [] { return std::string("sum_i f_ii = 1"); });

  report.pass = report.max_residual <= pol.eps_eq;
  return report;
}

MatrixUnitSystem standard_units(Index n) {
  if (n < 1) throw InvalidArgument("standard_units: n must be >= 1");
  std::vector<ComplexMatrix> units;
  units.reserve(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) units.push_back(matrix_unit(n, i, j));
  }
  return MatrixUnitSystem(n, std::move(units));
}

MatrixUnitSystem random_unital_embedding(Index n, Index d, Rng& rng) {
  if (n < 1 || d < 1) throw InvalidArgument("random_unital_embedding: n, d >= 1");
  if (d % n != 0) {
    throw InvalidArgument("no unital embedding of M_" + std::to_string(n) +
                          " into M_" + std::to_string(d) + ": " +
                          std::to_string(n) + " does not divide " +
                          std::to_string(d));
  }
  const ComplexMatrix u = haar_unitary(d, rng);
  const ComplexMatrix ones = identity(d / n);
  std::vector<ComplexMatrix> units;
  units.reserve(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      units.push_back(u * kron(matrix_unit(n, i, j), ones) * u.adjoint());
    }
  }
  return MatrixUnitSystem(n, std::move(units));
}

MatrixUnitSystem random_unital_embedding(Index n, Index d, std::uint64_t seed) {
  Rng rng(seed);
  return random_unital_embedding(n, d, rng);
}

Index projection_rank(const ComplexMatrix& p) {
  return static_cast<Index>(std::llround(p.trace().real()));
}

ComplexMatrix projection_range(const ComplexMatrix& p, double eps) {
  require_square(p, "projection_range");
  const ComplexMatrix h = 0.5 * (p + p.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  // Eigenvalues ascending; a projection has them clustered at 0 and 1.
  Index first = 0;
  while (first < h.rows() && es.eigenvalues()(first) < 0.5) ++first;
  for (Index k = 0; k < h.rows(); ++k) {
    const double lambda = es.eigenvalues()(k);
    if (std::min(std::abs(lambda), std::abs(lambda - 1.0)) > eps) {
      throw InvalidArgument("projection_range: matrix is not a projection");
    }
  }
  return es.eigenvectors().rightCols(h.rows() - first);
}

ComplexMatrix intertwiner(const MatrixUnitSystem& f, const MatrixUnitSystem& fp,
                          const TolerancePolicy& pol) {
  if (f.order() != fp.order() || f.ambient_dim() != fp.ambient_dim()) {
    throw DimensionError("intertwiner: systems differ in order or ambient dimension");
  }
  for (const MatrixUnitSystem* sys : {&f, &fp}) {
    const UnitsReport rep = validate_units(*sys, pol);
    if (!rep.pass) {
      throw InvalidArgument("intertwiner: invalid matrix units (" +
                            rep.worst_relation + ")");
    }
  }
  const ComplexMatrix target = projection_range(f(0, 0), pol.eps_eq);
  const ComplexMatrix source = projection_range(fp(0, 0), pol.eps_eq);
  if (target.cols() != source.cols()) {
    throw InvalidArgument("intertwiner: f_11 and f'_11 have different ranks");
  }
  // Partial isometry from range(fp_11) onto range(f_11), index order.
  const ComplexMatrix w = target * source.adjoint();
  const Index n = f.order();
  const Index d = f.ambient_dim();
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  for (Index k = 0; k < n; ++k) u += f(k, 0) * w * fp(0, k);
  return u;
}

MatrixUnitSystem units_from_unitaries(Index n,
                                      std::span<const ComplexMatrix> unitaries,
                                      const TolerancePolicy& pol) {
  if (n < 2) throw InvalidArgument("units_from_unitaries: n must be >= 2");
  if (static_cast<Index>(unitaries.size()) != n - 1) {
    throw DimensionError("units_from_unitaries: expected " +
                         std::to_string(n - 1) + " unitaries u_2..u_n");
  }
  const Index d = unitaries.front().rows();
  for (std::size_t k = 0; k < unitaries.size(); ++k) {
    if (unitaries[k].rows() != d || unitaries[k].cols() != d) {
      throw DimensionError("units_from_unitaries: unitaries must share a dimension");
    }
    if (!is_unitary(unitaries[k], pol.eps_eq)) {
      throw InvalidArgument("units_from_unitaries: u_" + std::to_string(k + 2) +
                            " is not unitary");
    }
  }
  std::vector<ComplexMatrix> first_row;
  first_row.reserve(static_cast<std::size_t>(n));
  first_row.push_back(kron(matrix_unit(n, 0, 0), identity(d)));
  for (Index j = 1; j < n; ++j) {
    first_row.push_back(kron(matrix_unit(n, 0, j), unitaries[j - 1]));
  }
  std::vector<ComplexMatrix> units;
  units.reserve(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      units.push_back(first_row[i].adjoint() * first_row[j]);
    }
  }
  return MatrixUnitSystem(n, std::move(units));
}

std::vector<ComplexMatrix> generator_blocks(const ComplexMatrix& b, Index n,
                                            Index d) {
  if (n < 1 || d < 1 || b.rows() != n * d || b.cols() != n * d) {
    throw DimensionError("generator_blocks: matrix is not " +
                         std::to_string(n) + "x" + std::to_string(n) +
                         " blocks of size " + std::to_string(d));
  }
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out.push_back(b.block(i * d, j * d, d, d));
  }
  return out;
}

ComplexMatrix assemble_blocks(std::span<const ComplexMatrix> blocks, Index n) {
  if (n < 1 || static_cast<Index>(blocks.size()) != n * n) {
    throw DimensionError("assemble_blocks: expected n*n blocks");
  }
  const Index d = blocks.front().rows();
  ComplexMatrix b(n * d, n * d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const ComplexMatrix& g = blocks[static_cast<std::size_t>(i * n + j)];
      if (g.rows() != d || g.cols() != d) {
        throw DimensionError("assemble_blocks: blocks must share one shape");
      }
      b.block(i * d, j * d, d, d) = g;
    }
  }
  return b;
}

}  // namespace qfactor
