#include "qfactor/free_product.hpp"

#include <cmath>
#include <string>

namespace qfactor {
namespace {

MatrixUnitSystem direct_sum_units(const FiniteTracialAlgebra& algebra, Index n,
                                  const std::vector<const MatrixUnitSystem*>& parts) {
  std::vector<ComplexMatrix> units;
  units.reserve(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      ComplexMatrix u = ComplexMatrix::Zero(algebra.dim(), algebra.dim());
      Index offset = 0;
      for (const MatrixUnitSystem* p : parts) {
        const Index d = p->ambient_dim();
        u.block(offset, offset, d, d) = (*p)(i, j);
        offset += d;
      }
      units.push_back(std::move(u));
    }
  }
  return MatrixUnitSystem(n, std::move(units));
}

MatrixUnitSystem compress_units(const MatrixUnitSystem& sys, const ComplexMatrix& v) {
  std::vector<ComplexMatrix> units;
  units.reserve(sys.units().size());
  for (const ComplexMatrix& f : sys.units()) units.push_back(v.adjoint() * f * v);
  return MatrixUnitSystem(sys.order(), std::move(units));
}

std::vector<ComplexMatrix> first_row_units(const FiniteDimTrace& tr,
                                           const ComplexMatrix* compress) {
  std::vector<ComplexMatrix> gens;
  for (const MatrixUnitSystem* sys : {&tr.g_units(), &tr.f_units()}) {
    for (Index j = 0; j < tr.n(); ++j) {
      gens.push_back(compress ? ComplexMatrix(*compress * (*sys)(0, j)) : (*sys)(0, j));
    }
  }
  return gens;
}

bool same_units(const MatrixUnitSystem& a, const MatrixUnitSystem& b, double eps) {
  if (a.order() != b.order() || a.ambient_dim() != b.ambient_dim()) return false;
  for (std::size_t k = 0; k < a.units().size(); ++k) {
    if (max_abs_diff(a.units()[k], b.units()[k]) > eps) return false;
  }
  return true;
}

}  // namespace

FiniteDimTrace::FiniteDimTrace(Index n, FiniteTracialAlgebra algebra,
                               MatrixUnitSystem g_units, MatrixUnitSystem f_units,
                               const TolerancePolicy& pol)
    : n_(n), algebra_(std::move(algebra)), g_(std::move(g_units)), f_(std::move(f_units)) {
  if (n_ < 1) throw InvalidArgument("trace: n must be >= 1");
  for (Index d : algebra_.blocks()) {
    if (d % n_ != 0) {
      throw InvalidArgument("trace: n = " + std::to_string(n_) +
                            " does not divide block size " + std::to_string(d) +
                            " (no unital copy of M_n in that block)");
    }
  }
  const std::pair<const char*, const MatrixUnitSystem*> systems[] = {{"g", &g_}, {"f", &f_}};
  for (const auto& [name, sys] : systems) {
    if (sys->order() != n_) {
      throw InvalidArgument(std::string("trace: ") + name + " units have order " +
                            std::to_string(sys->order()) + ", expected " +
                            std::to_string(n_));
    }
    if (sys->ambient_dim() != algebra_.dim()) {
      throw InvalidArgument(std::string("trace: ") + name +
                            " units do not live in the algebra's dimension");
    }
    const UnitsReport rep = validate_units(*sys, pol);
    if (!rep.pass) {
      throw InvalidArgument(std::string("trace: invalid ") + name + " units (" +
                            rep.worst_relation + ", residual " +
                            std::to_string(rep.max_residual) + ")");
    }
    for (const ComplexMatrix& u : sys->units()) {
      if (!algebra_.contains(u, pol.eps_eq)) {
        throw InvalidArgument(std::string("trace: ") + name +
                              " units are not block-diagonal in the algebra");
      }
    }
  }
}

Complex evaluate_word(const FiniteDimTrace& tr, std::span<const Letter> word) {
  const Index d = tr.algebra().dim();
  ComplexMatrix product = identity(d);
  for (const Letter& letter : word) {
    const MatrixUnitSystem& sys =
        letter.side == Side::first ? tr.g_units() : tr.f_units();
    product = product * sys.embed(letter.x);
  }
  return tr.algebra().tau(product);
}

CorrelationMatrix correlation_matrix(const FiniteDimTrace& tr) {
  const Index n = tr.n();
  CorrelationMatrix k{n, ComplexMatrix(n * n, n * n)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      for (Index a = 0; a < n; ++a) {
        for (Index b = 0; b < n; ++b) {
          // f_ab* = f_ba
          k.values(i * n + a, j * n + b) =
              tr.algebra().tau(tr.f_units()(b, a) * tr.g_units()(i, j));
        }
      }
    }
  }
  return k;
}

Channel phi(const FiniteDimTrace& tr) {
  const CorrelationMatrix k = correlation_matrix(tr);
  return Channel(tr.n(), static_cast<double>(tr.n()) * k.values);
}

FiniteDimTrace trace_from_pair(Index n, const MatrixUnitSystem& g_units,
                               const MatrixUnitSystem& f_units,
                               const FiniteTracialAlgebra& algebra,
                               const TolerancePolicy& pol) {
  return FiniteDimTrace(n, algebra, g_units, f_units, pol);
}

FiniteDimTrace trace_from_ancilla(const ComplexMatrix& u, Index n,
                                  const FiniteTracialAlgebra& ancilla,
                                  const TolerancePolicy& pol) {
  const Index d = ancilla.dim();
  if (u.rows() != n * d || u.cols() != n * d) {
    throw DimensionError("trace_from_ancilla: u must be " + std::to_string(n * d) +
                         "x" + std::to_string(n * d));
  }
  if (!is_unitary(u, pol.eps_eq)) {
    throw InvalidArgument("trace_from_ancilla: u is not unitary");
  }
  // (system a, ancilla block j, row r) -> block-major index n*o_j + a*d_j + r.
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(n * d);
  std::vector<Index> blocks;
  for (std::size_t j = 0; j < ancilla.num_blocks(); ++j) {
    const Index dj = ancilla.blocks()[j];
    const Index oj = ancilla.block_offset(j);
    blocks.push_back(n * dj);
    for (Index a = 0; a < n; ++a) {
      for (Index r = 0; r < dj; ++r) perm.indices()(a * d + oj + r) = n * oj + a * dj + r;
    }
  }
  FiniteTracialAlgebra algebra(blocks, ancilla.weights(), pol.eps_eq);
  const ComplexMatrix ones = identity(d);
  std::vector<ComplexMatrix> g;
  std::vector<ComplexMatrix> f;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const ComplexMatrix e = kron(matrix_unit(n, i, j), ones);
      const ComplexMatrix rotated = u * e * u.adjoint();
      g.push_back(perm * rotated * perm.transpose());
      f.push_back(perm * e * perm.transpose());
    }
  }
  return FiniteDimTrace(n, std::move(algebra), MatrixUnitSystem(n, std::move(g)),
                        MatrixUnitSystem(n, std::move(f)), pol);
}

FiniteDimTrace identity_pair_trace(Index n) {
  return FiniteDimTrace(n, FiniteTracialAlgebra::full(n), standard_units(n),
                        standard_units(n));
}

FiniteDimTrace tensor_pair_trace(Index n) {
  std::vector<ComplexMatrix> g;
  std::vector<ComplexMatrix> f;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      g.push_back(kron(matrix_unit(n, i, j), identity(n)));
      f.push_back(kron(identity(n), matrix_unit(n, i, j)));
    }
  }
  return FiniteDimTrace(n, FiniteTracialAlgebra::full(n * n),
                        MatrixUnitSystem(n, std::move(g)),
                        MatrixUnitSystem(n, std::move(f)));
}

FiniteDimTrace random_trace(Index n, const std::vector<Index>& blocks,
                            const std::vector<double>& weights, Rng& rng) {
  FiniteTracialAlgebra algebra(blocks, weights);
  std::vector<MatrixUnitSystem> gs;
  std::vector<MatrixUnitSystem> fs;
  for (Index d : blocks) {
    gs.push_back(random_unital_embedding(n, d, rng));
    fs.push_back(random_unital_embedding(n, d, rng));
  }
  std::vector<const MatrixUnitSystem*> gp;
  std::vector<const MatrixUnitSystem*> fp;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    gp.push_back(&gs[j]);
    fp.push_back(&fs[j]);
  }
  MatrixUnitSystem g = direct_sum_units(algebra, n, gp);
  MatrixUnitSystem f = direct_sum_units(algebra, n, fp);
  return FiniteDimTrace(n, std::move(algebra), std::move(g), std::move(f));
}

StarSubalgebra generated_image(const FiniteDimTrace& tr, const TolerancePolicy& pol) {
  const std::vector<ComplexMatrix> gens = first_row_units(tr, nullptr);
  return generated_algebra(tr.algebra().dim(), gens, true, pol);
}

std::vector<WeightedTrace> decompose_trace(const FiniteDimTrace& tr, Rng& rng,
                                           const TolerancePolicy& pol) {
  const StarSubalgebra image = generated_image(tr, pol);
  const BlockStructure bs = block_structure(image, rng, pol);
  std::vector<WeightedTrace> out;
  for (const ComplexMatrix& e : bs.central_projections) {
    const double weight = tr.algebra().tau(e).real();
    if (weight <= pol.eps_eq) continue;
    const ComplexMatrix v = projection_range(e, std::sqrt(pol.eps_eq));
    // tau restricted to the factor e M e is weight * (its unique trace),
    // which is the normalized trace of the range of e.
    out.push_back({weight, FiniteDimTrace(tr.n(), FiniteTracialAlgebra::full(v.cols()),
                                          compress_units(tr.g_units(), v),
                                          compress_units(tr.f_units(), v), pol)});
  }
  return out;
}

FiniteDimTrace convex_combine(std::span<const FiniteDimTrace> traces,
                              std::span<const double> coeffs,
                              const TolerancePolicy& pol) {
  if (traces.empty()) throw InvalidArgument("convex_combine: no traces");
  if (traces.size() != coeffs.size()) {
    throw DimensionError("convex_combine: " + std::to_string(traces.size()) +
                         " traces but " + std::to_string(coeffs.size()) +
                         " coefficients");
  }
  const Index n = traces.front().n();
  double total = 0.0;
  for (double c : coeffs) {
    if (!(c >= 0.0)) throw InvalidArgument("convex_combine: negative coefficient");
    total += c;
  }
  if (std::abs(total - 1.0) > pol.eps_eq) {
    throw InvalidArgument("convex_combine: coefficients sum to " +
                          std::to_string(total));
  }
  std::vector<Index> blocks;
  std::vector<double> weights;
  std::vector<const MatrixUnitSystem*> gp;
  std::vector<const MatrixUnitSystem*> fp;
  for (std::size_t k = 0; k < traces.size(); ++k) {
    const FiniteDimTrace& t = traces[k];
    if (t.n() != n) throw DimensionError("convex_combine: traces have different n");
    for (std::size_t j = 0; j < t.algebra().num_blocks(); ++j) {
      blocks.push_back(t.algebra().blocks()[j]);
      weights.push_back(coeffs[k] * t.algebra().weights()[j]);
    }
    gp.push_back(&t.g_units());
    fp.push_back(&t.f_units());
  }
  FiniteTracialAlgebra algebra(std::move(blocks), std::move(weights), pol.eps_eq);
  MatrixUnitSystem g = direct_sum_units(algebra, n, gp);
  MatrixUnitSystem f = direct_sum_units(algebra, n, fp);
  return FiniteDimTrace(n, std::move(algebra), std::move(g), std::move(f), pol);
}

std::vector<double> faithful_weights(std::size_t count) {
  std::vector<double> w(count);
  const double norm = 1.0 - std::ldexp(1.0, -static_cast<int>(count));
  for (std::size_t k = 0; k < count; ++k) {
    w[k] = std::ldexp(1.0, -static_cast<int>(k + 1)) / norm;
  }
  return w;
}

FiniteDimTrace faithful_combination(std::span<const FiniteDimTrace> traces,
                                    const TolerancePolicy& pol) {
  if (traces.empty()) throw InvalidArgument("faithful_combination: empty list");
  const std::vector<double> w = faithful_weights(traces.size());
  const FiniteDimTrace& first = traces.front();

  bool shared = true;
  for (const FiniteDimTrace& t : traces) {
    if (t.n() != first.n()) {
      throw DimensionError("faithful_combination: traces have different n");
    }
    shared = shared && t.algebra().blocks() == first.algebra().blocks() &&
             same_units(t.g_units(), first.g_units(), pol.eps_eq) &&
             same_units(t.f_units(), first.f_units(), pol.eps_eq);
  }
  if (!shared) return convex_combine(traces, w, pol);

  std::vector<double> merged(first.algebra().num_blocks(), 0.0);
  for (std::size_t k = 0; k < traces.size(); ++k) {
    for (std::size_t j = 0; j < merged.size(); ++j) {
      merged[j] += w[k] * traces[k].algebra().weights()[j];
    }
  }
  FiniteTracialAlgebra algebra(first.algebra().blocks(), std::move(merged), pol.eps_eq);
  return FiniteDimTrace(first.n(), std::move(algebra), first.g_units(),
                        first.f_units(), pol);
}

KernelIdeal kernel_ideal(const FiniteDimTrace& tr) {
  return trace_kernel_ideal(tr.algebra().trace());
}

Index gns_image_dimension(const FiniteDimTrace& tr, const TolerancePolicy& pol) {
  const Index d = tr.algebra().dim();
  const ComplexMatrix support = identity(d) - kernel_ideal(tr).projection;
  const std::vector<ComplexMatrix> gens = first_row_units(tr, &support);
  return generated_algebra(d, gens, false, pol).dim();
}

bool same_phi_fiber(const FiniteDimTrace& t1, const FiniteDimTrace& t2,
                    const TolerancePolicy& pol) {
  if (t1.n() != t2.n()) throw DimensionError("same_phi_fiber: traces have different n");
  return max_abs_diff(correlation_matrix(t1).values, correlation_matrix(t2).values) <=
         pol.eps_eq;
}

}  // namespace qfactor
