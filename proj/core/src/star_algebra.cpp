#include "qfactor/star_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace qfactor {
namespace {

// Generator products are added in batches of this many frontier elements.
constexpr Index kFrontierChunk = 16;

// Commutation residual accepted when certifying central elements.
double commute_tolerance(const TolerancePolicy& pol) { return 10.0 * pol.eps_eq; }

// Column-major vec([a, x]) = (1 (x) a - a^T (x) 1) vec(x).
ComplexMatrix commutator_map(const ComplexMatrix& a) {
  const Index d = a.rows();
  return kron(identity(d), a) - kron(a.transpose(), identity(d));
}

ComplexMatrix random_element(const StarSubalgebra& alg, Rng& rng) {
  const ComplexVector coeffs = gaussian_matrix(alg.dim(), 1, rng);
  return unflatten(alg.coordinates() * coeffs, alg.ambient_dim());
}

// One attempt at the center: elements of alg commuting with a random pair
// x, y (and adjoints). A generic pair generates alg, so this is alg ∩ alg'
// unless the draw was degenerate; the caller certifies the result.
StarSubalgebra center_attempt(const StarSubalgebra& alg, Rng& rng,
                              const TolerancePolicy& pol) {
  const Index d = alg.ambient_dim();
  const Index m = alg.dim();
  if (m == 0) return StarSubalgebra(d, ComplexMatrix(d * d, 0), false);

  const ComplexMatrix x = random_element(alg, rng);
  const ComplexMatrix y = random_element(alg, rng);
  const std::vector<ComplexMatrix> tests = {x, x.adjoint(), y, y.adjoint()};

  ComplexMatrix map(4 * d * d, m);
  for (Index k = 0; k < m; ++k) {
    const ComplexMatrix b = alg.element(k);
    for (std::size_t t = 0; t < tests.size(); ++t) {
      const ComplexMatrix c = tests[t] * b - b * tests[t];
      map.col(k).segment(static_cast<Index>(t) * d * d, d * d) = flatten(c);
    }
  }
  // Rows that vanish for every column carry no constraint.
  std::vector<Index> live;
  for (Index r = 0; r < map.rows(); ++r) {
    if (map.row(r).cwiseAbs().maxCoeff() > 0.0) live.push_back(r);
  }
  ComplexMatrix reduced(static_cast<Index>(live.size()), m);
  for (std::size_t r = 0; r < live.size(); ++r) {
    reduced.row(static_cast<Index>(r)) = map.row(live[r]);
  }
  const ComplexMatrix kernel = null_space_coordinates(reduced, pol);
  return StarSubalgebra(d, alg.coordinates() * kernel, alg.contains_unit());
}

bool is_central(const ComplexMatrix& z, const StarSubalgebra& alg, double tol) {
  for (Index k = 0; k < alg.dim(); ++k) {
    const ComplexMatrix b = alg.element(k);
    if (max_abs(z * b - b * z) > tol) return false;
  }
  return true;
}

std::optional<StarSubalgebra> certified_center(const StarSubalgebra& alg,
                                                Rng& rng,
                                                const TolerancePolicy& pol) {
  StarSubalgebra z = center_attempt(alg, rng, pol);
  for (Index k = 0; k < z.dim(); ++k) {
    if (!is_central(z.element(k), alg, commute_tolerance(pol))) return std::nullopt;
  }
  return z;
}

std::optional<BlockStructure> block_attempt(const StarSubalgebra& alg, Rng& rng,
                                            const TolerancePolicy& pol,
                                            const BlockStructureOptions& opts) {
  const Index d = alg.ambient_dim();
  const auto z = certified_center(alg, rng, pol);
  if (!z || z->dim() == 0) return std::nullopt;

  // Random real combination of the self-adjoint parts of the center basis.
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  const Complex two_i(0.0, 2.0);
  for (Index k = 0; k < z->dim(); ++k) {
    const ComplexMatrix e = z->element(k);
    const double re = normal(rng);
    const double im = normal(rng);
    h += re * (e + e.adjoint()) / 2.0 + im * (e - e.adjoint()) / two_i;
  }
  h = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const auto& lambda = es.eigenvalues();

  std::vector<std::pair<Index, Index>> clusters;  // [begin, end)
  Index begin = 0;
  for (Index k = 1; k <= d; ++k) {
    if (k == d || lambda(k) - lambda(k - 1) >= opts.cluster_gap) {
      clusters.emplace_back(begin, k);
      begin = k;
    }
  }
  if (static_cast<Index>(clusters.size()) != z->dim()) return std::nullopt;

  BlockStructure out;
  const double tol = commute_tolerance(pol);
  for (const auto& [lo, hi] : clusters) {
    const auto v = es.eigenvectors().middleCols(lo, hi - lo);
    ComplexMatrix p = v * v.adjoint();
    if (alg.residual(p) > tol || !is_central(p, alg, tol)) return std::nullopt;

    SpanAccumulator corner(d * d, pol.eps_rank);
    for (Index k = 0; k < alg.dim(); ++k) corner.add(flatten(p * alg.element(k)));
    const Index span = corner.rank();
    const auto m = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(span))));
    const Index rank = hi - lo;
    if (m < 1 || m * m != span || rank % m != 0) return std::nullopt;

    out.blocks.push_back({m, rank / m});
    out.central_projections.push_back(std::move(p));
  }
  return out;
}

}  // namespace

StarSubalgebra::StarSubalgebra(Index ambient_dim, ComplexMatrix coordinates,
                               bool contains_unit)
    : ambient_dim_(ambient_dim),
      coordinates_(std::move(coordinates)),
      contains_unit_(contains_unit) {
  if (coordinates_.rows() != ambient_dim_ * ambient_dim_) {
    throw DimensionError("StarSubalgebra: coordinates must have d^2 rows");
  }
}

ComplexMatrix StarSubalgebra::element(Index k) const {
  return unflatten(coordinates_.col(k), ambient_dim_);
}

std::vector<ComplexMatrix> StarSubalgebra::basis() const {
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(dim()));
  for (Index k = 0; k < dim(); ++k) out.push_back(element(k));
  return out;
}

double StarSubalgebra::residual(const ComplexMatrix& x) const {
  if (x.rows() != ambient_dim_ || x.cols() != ambient_dim_) {
    throw DimensionError("StarSubalgebra::residual: wrong dimension");
  }
  const ComplexVector v = flatten(x);
  if (dim() == 0) return v.norm();
  ComplexVector r = v - coordinates_ * (coordinates_.adjoint() * v);
  r -= coordinates_ * (coordinates_.adjoint() * r);
  return r.norm();
}

StarSubalgebra generated_algebra(std::span<const ComplexMatrix> generators,
                                 bool unital, const TolerancePolicy& pol) {
  if (generators.empty()) {
    throw InvalidArgument(
        "generated_algebra: empty generator list needs an explicit dimension");
  }
  return generated_algebra(generators.front().rows(), generators, unital, pol);
}

StarSubalgebra generated_algebra(Index ambient_dim,
                                 std::span<const ComplexMatrix> generators,
                                 bool unital, const TolerancePolicy& pol) {
  const Index d = ambient_dim;
  std::vector<ComplexMatrix> letters;
  for (const ComplexMatrix& g : generators) {
    if (g.rows() != d || g.cols() != d) {
      throw DimensionError("generated_algebra: generators must be " +
                           std::to_string(d) + "x" + std::to_string(d));
    }
    if (max_abs(g) == 0.0) continue;
    letters.push_back(g);
    if (!is_hermitian(g, 0.0)) letters.push_back(g.adjoint());
  }

  SpanAccumulator acc(d * d, pol.eps_rank);
  if (unital) acc.add(flatten(identity(d)));
  for (const ComplexMatrix& g : letters) acc.add(flatten(g));

  // Words in the letters span the algebra; left multiplication of the
  // newest basis elements by letters reaches every word.
  Index frontier = 0;
  while (frontier < acc.rank()) {
    const Index end = acc.rank();
    for (Index start = frontier; start < end; start += kFrontierChunk) {
      const Index count = std::min(kFrontierChunk, end - start);
      ComplexMatrix candidates(d * d, count * static_cast<Index>(letters.size()));
      Index col = 0;
      for (Index k = start; k < start + count; ++k) {
        const ComplexMatrix x = unflatten(acc.basis().col(k), d);
        for (const ComplexMatrix& g : letters) candidates.col(col++) = flatten(g * x);
      }
      acc.add(candidates);
    }
    frontier = end;
  }

  StarSubalgebra alg(d, ComplexMatrix(acc.basis()), unital);
  if (!unital) {
    const bool has_unit = d > 0 && alg.residual(identity(d)) <= pol.eps_eq * static_cast<double>(d);
    return StarSubalgebra(d, alg.coordinates(), has_unit);
  }
  return alg;
}

StarSubalgebra commutant(const StarSubalgebra& alg, const TolerancePolicy& pol) {
  const Index d = alg.ambient_dim();
  const Index cols = d * d;
  // Stacked commutator map, compressed to its triangular factor one basis
  // element at a time.
  ComplexMatrix r(0, cols);
  for (Index k = 0; k < alg.dim(); ++k) {
    ComplexMatrix stacked(r.rows() + cols, cols);
    stacked << r, commutator_map(alg.element(k));
    Eigen::HouseholderQR<ComplexMatrix> qr(stacked);
    const Index keep = std::min(stacked.rows(), cols);
    r = qr.matrixQR().topRows(keep).triangularView<Eigen::Upper>();
  }
  return StarSubalgebra(d, null_space_coordinates(r, pol), true);
}

double span_distance(const StarSubalgebra& a, const StarSubalgebra& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DimensionError("span_distance: different ambient dimensions");
  }
  double worst = 0.0;
  for (Index k = 0; k < a.dim(); ++k) worst = std::max(worst, b.residual(a.element(k)));
  for (Index k = 0; k < b.dim(); ++k) worst = std::max(worst, a.residual(b.element(k)));
  if (a.dim() != b.dim()) worst = std::max(worst, 1.0);
  return worst;
}

StarSubalgebra center(const StarSubalgebra& alg, Rng& rng,
                      const TolerancePolicy& pol) {
  for (int attempt = 0; attempt < 5; ++attempt) {
    if (auto z = certified_center(alg, rng, pol)) return *std::move(z);
  }
  throw NumericalError("center: no certified center after 5 attempts");
}

BlockStructure block_structure(const StarSubalgebra& alg, Rng& rng,
                               const TolerancePolicy& pol,
                               const BlockStructureOptions& opts) {
  if (!alg.contains_unit()) {
    throw InvalidArgument("block_structure: algebra must be unital");
  }
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    if (auto bs = block_attempt(alg, rng, pol, opts)) return *std::move(bs);
  }
  throw NumericalError("block_structure: center decomposition degenerate after " +
                       std::to_string(opts.max_attempts) + " attempts");
}

ComplexMatrix conditional_expectation(const ComplexMatrix& x,
                                      const MatrixUnitSystem& units,
                                      const TraceFunctional& tau,
                                      const TolerancePolicy& pol) {
  if (units.ambient_dim() != tau.dim() || x.rows() != tau.dim() ||
      x.cols() != tau.dim()) {
    throw DimensionError("conditional_expectation: dimension mismatch");
  }
  const UnitsReport rep = validate_units(units, pol);
  if (!rep.pass) {
    throw InvalidArgument("conditional_expectation: invalid matrix units (" +
                          rep.worst_relation + ")");
  }
  const auto n = static_cast<double>(units.order());
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const ComplexMatrix& f : units.units()) out += n * hs_inner(x, f, tau) * f;
  return out;
}

ComplexMatrix orthogonal_projection(const ComplexMatrix& x,
                                    std::span<const ComplexMatrix> family,
                                    const TraceFunctional& tau) {
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const ComplexMatrix& b : family) {
    const Complex norm2 = hs_inner(b, b, tau);
    if (std::abs(norm2) == 0.0) continue;
    out += hs_inner(x, b, tau) / norm2 * b;
  }
  return out;
}

KernelIdeal trace_kernel_ideal(const TraceFunctional& tau, double zero_weight) {
  KernelIdeal ideal{ComplexMatrix::Zero(tau.dim(), tau.dim()), {}};
  for (std::size_t j = 0; j < tau.blocks().size(); ++j) {
    const double w = tau.weights()[j];
    if (w < -zero_weight) {
      throw InvalidArgument("trace_kernel_ideal: negative weight " + std::to_string(w));
    }
    if (w > zero_weight) continue;
    const Index o = tau.block_offset(j);
    const Index b = tau.blocks()[j];
    ideal.projection.block(o, o, b, b).setIdentity();
    for (Index r = 0; r < b; ++r) {
      for (Index c = 0; c < b; ++c) {
        ComplexMatrix e = ComplexMatrix::Zero(tau.dim(), tau.dim());
        e(o + r, o + c) = 1.0;
        ideal.basis.push_back(std::move(e));
      }
    }
  }
  return ideal;
}

}  // namespace qfactor
