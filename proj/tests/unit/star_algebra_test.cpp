#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "qfactor/star_algebra.hpp"

namespace qfactor {
namespace {

ComplexMatrix diag12() {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 1.0;
  h(1, 1) = 2.0;
  return h;
}

void expect_star_closed(const StarSubalgebra& a, double tol = 1e-9) {
  const auto basis = a.basis();
  for (const auto& x : basis) {
    EXPECT_LT(a.residual(x.adjoint()), tol);
    for (const auto& y : basis) EXPECT_LT(a.residual(x * y), tol);
  }
}

TEST(GeneratedAlgebra, TwoUnitsGenerateM2) {
  const std::vector<ComplexMatrix> gens = {matrix_unit(2, 0, 0), matrix_unit(2, 0, 1)};
  const StarSubalgebra a = generated_algebra(gens, true);
  EXPECT_EQ(a.dim(), 4);
  EXPECT_TRUE(a.contains_unit());
}

TEST(GeneratedAlgebra, IdentityGeneratesScalars) {
  const std::vector<ComplexMatrix> gens = {identity(3)};
  EXPECT_EQ(generated_algebra(gens, true).dim(), 1);
}

TEST(GeneratedAlgebra, DiagonalGeneratorGivesDiagonalAlgebra) {
  const std::vector<ComplexMatrix> gens = {diag12()};
  const StarSubalgebra a = generated_algebra(gens, true);
  EXPECT_EQ(a.dim(), 2);
  // Oracle: brute-force span of {1, h, h^2, h^3}.
  EXPECT_EQ(oracle::span_dimension({identity(2), diag12(), diag12() * diag12(),
                                    diag12() * diag12() * diag12()}),
            2);
}

TEST(GeneratedAlgebra, DegenerateInputs) {
  const StarSubalgebra zero = generated_algebra(3, {}, false);
  EXPECT_EQ(zero.dim(), 0);
  EXPECT_FALSE(zero.contains_unit());
  EXPECT_EQ(generated_algebra(3, {}, true).dim(), 1);
  EXPECT_THROW(generated_algebra(std::vector<ComplexMatrix>{}, true), InvalidArgument);
}

TEST(GeneratedAlgebra, NonUnitalSpanRecordsUnitHonestly) {
  const std::vector<ComplexMatrix> corner = {matrix_unit(3, 0, 0), matrix_unit(3, 0, 1)};
  const StarSubalgebra a = generated_algebra(corner, false);
  EXPECT_EQ(a.dim(), 4);  // M_2 in the top-left corner of M_3
  EXPECT_FALSE(a.contains_unit());
  const std::vector<ComplexMatrix> full = {matrix_unit(2, 0, 0), matrix_unit(2, 0, 1)};
  EXPECT_TRUE(generated_algebra(full, false).contains_unit());
}

TEST(GeneratedAlgebra, RandomGeneratorsAreClosed) {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    // A random block pattern: generators of M_2 (+) C embedded in M_3.
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a.topLeftCorner(2, 2) = gaussian_matrix(2, 2, rng);
    a(2, 2) = gaussian_matrix(1, 1, rng)(0, 0);
    const std::vector<ComplexMatrix> gens = {a};
    const StarSubalgebra alg = generated_algebra(gens, true);
    EXPECT_EQ(alg.dim(), 5);
    expect_star_closed(alg);
  }
}

TEST(Commutant, FullAlgebraHasScalarCommutant) {
  const std::vector<ComplexMatrix> gens = {matrix_unit(2, 0, 0), matrix_unit(2, 0, 1)};
  EXPECT_EQ(commutant(generated_algebra(gens, true)).dim(), 1);
}

TEST(Commutant, ScalarsHaveFullCommutant) {
  for (Index d = 1; d <= 4; ++d) {
    EXPECT_EQ(commutant(generated_algebra(d, {}, true)).dim(), d * d);
  }
}

TEST(Commutant, DiagonalAlgebraIsMaximalAbelian) {
  const std::vector<ComplexMatrix> gens = {diag12()};
  const StarSubalgebra a = generated_algebra(gens, true);
  const StarSubalgebra c = commutant(a);
  EXPECT_EQ(c.dim(), 2);
  EXPECT_LT(span_distance(a, c), 1e-9);
}

TEST(Commutant, BicommutantOnRandomGenerators) {
  Rng rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    const Index d = 2 + trial % 4;
    // Block-structured generators so the algebra is a proper subalgebra.
    const Index split = 1 + trial % (d - 1 > 0 ? d - 1 : 1);
    ComplexMatrix g = ComplexMatrix::Zero(d, d);
    g.topLeftCorner(split, split) = gaussian_matrix(split, split, rng);
    g.bottomRightCorner(d - split, d - split) = gaussian_matrix(d - split, d - split, rng);
    const std::vector<ComplexMatrix> gens = {g};
    const StarSubalgebra a = generated_algebra(gens, true);
    const StarSubalgebra cc = commutant(commutant(a));
    EXPECT_EQ(cc.dim(), a.dim());
    EXPECT_LT(span_distance(a, cc), 1e-8);
  }
}

TEST(BlockStructure, FullMatrixAlgebra) {
  Rng rng(1);
  for (Index n = 1; n <= 4; ++n) {
    std::vector<ComplexMatrix> gens;
    for (Index j = 0; j < n; ++j) gens.push_back(matrix_unit(n, 0, j));
    const BlockStructure bs = block_structure(generated_algebra(gens, true), rng);
    ASSERT_EQ(bs.blocks.size(), 1u);
    EXPECT_EQ(bs.blocks[0].dim, n);
    EXPECT_EQ(bs.blocks[0].multiplicity, 1);
    EXPECT_LT(max_abs_diff(bs.central_projections[0], identity(n)), 1e-9);
  }
}

TEST(BlockStructure, DiagonalAlgebra) {
  Rng rng(2);
  const std::vector<ComplexMatrix> gens = {diag12()};
  const BlockStructure bs = block_structure(generated_algebra(gens, true), rng);
  ASSERT_EQ(bs.blocks.size(), 2u);
  for (const auto& b : bs.blocks) {
    EXPECT_EQ(b.dim, 1);
    EXPECT_EQ(b.multiplicity, 1);
  }
}

TEST(BlockStructure, AmplifiedM2InM6) {
  Rng rng(3);
  const std::vector<ComplexMatrix> gens = {kron(matrix_unit(2, 0, 0), identity(3)),
                                           kron(matrix_unit(2, 0, 1), identity(3))};
  const StarSubalgebra a = generated_algebra(gens, true);
  EXPECT_EQ(a.dim(), 4);
  const BlockStructure bs = block_structure(a, rng);
  ASSERT_EQ(bs.blocks.size(), 1u);
  EXPECT_EQ(bs.blocks[0].dim, 2);
  EXPECT_EQ(bs.blocks[0].multiplicity, 3);
}

TEST(BlockStructure, RandomMixedBlocksSatisfyInvariants) {
  Rng rng(4);
  for (int trial = 0; trial < 6; ++trial) {
    // M_2 (x) 1_2 (+) M_1 (x) 1_3 (+) M_3, rotated by a Haar unitary.
    const Index d = 4 + 3 + 3;
    const ComplexMatrix v = haar_unitary(d, rng);
    ComplexMatrix a = ComplexMatrix::Zero(d, d);
    a.block(0, 0, 4, 4) = kron(gaussian_matrix(2, 2, rng), identity(2));
    a.block(4, 4, 3, 3) = gaussian_matrix(1, 1, rng)(0, 0) * identity(3);
    a.block(7, 7, 3, 3) = gaussian_matrix(3, 3, rng);
    ComplexMatrix b = ComplexMatrix::Zero(d, d);
    b.block(0, 0, 4, 4) = kron(gaussian_matrix(2, 2, rng), identity(2));
    b.block(7, 7, 3, 3) = gaussian_matrix(3, 3, rng);
    const std::vector<ComplexMatrix> gens = {v * a * v.adjoint(), v * b * v.adjoint()};
    const StarSubalgebra alg = generated_algebra(gens, true);
    ASSERT_EQ(alg.dim(), 4 + 1 + 9);

    const BlockStructure bs = block_structure(alg, rng);
    ASSERT_EQ(bs.blocks.size(), 3u);
    Index dim_sum = 0;
    Index rank_sum = 0;
    ComplexMatrix total = ComplexMatrix::Zero(d, d);
    for (std::size_t j = 0; j < bs.blocks.size(); ++j) {
      dim_sum += bs.blocks[j].dim * bs.blocks[j].dim;
      rank_sum += bs.blocks[j].dim * bs.blocks[j].multiplicity;
      total += bs.central_projections[j];
      for (std::size_t k = 0; k < bs.blocks.size(); ++k) {
        if (k != j) {
          EXPECT_LT(max_abs(bs.central_projections[j] * bs.central_projections[k]), 1e-9);
        }
      }
      for (const auto& x : alg.basis()) {
        EXPECT_LT(max_abs(bs.central_projections[j] * x - x * bs.central_projections[j]), 1e-9);
      }
    }
    EXPECT_EQ(dim_sum, alg.dim());
    EXPECT_EQ(rank_sum, d);
    EXPECT_LT(max_abs_diff(total, identity(d)), 1e-9);
  }
}

TEST(BlockStructure, RejectsNonUnitalAlgebra) {
  Rng rng(5);
  const std::vector<ComplexMatrix> corner = {matrix_unit(3, 0, 0)};
  EXPECT_THROW(block_structure(generated_algebra(corner, false), rng), InvalidArgument);
}

TEST(ConditionalExpectation, FixesTheRange) {
  Rng rng(6);
  const MatrixUnitSystem f = random_unital_embedding(2, 4, rng);
  const TraceFunctional tau = TraceFunctional::normalized(4);
  const ComplexMatrix x = f.embed(gaussian_matrix(2, 2, rng));
  EXPECT_LT(max_abs_diff(conditional_expectation(x, f, tau), x), 1e-12);
}

TEST(ConditionalExpectation, ScalarUnitsGiveNormalizedTrace) {
  Rng rng(7);
  const MatrixUnitSystem one(1, {identity(3)});
  const ComplexMatrix x = gaussian_matrix(3, 3, rng);
  const ComplexMatrix expected = x.trace() / 3.0 * identity(3);
  EXPECT_LT(max_abs_diff(conditional_expectation(x, one, TraceFunctional::normalized(3)),
                         expected),
            1e-14);
}

TEST(ConditionalExpectation, DiagonalProjection) {
  ComplexMatrix x(2, 2);
  x << Complex(1, 2), Complex(3, 0), Complex(-1, 1), Complex(4, -2);
  const std::vector<ComplexMatrix> diag = {matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)};
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = x(0, 0);
  expected(1, 1) = x(1, 1);
  for (const auto& tau : {TraceFunctional::normalized(2), TraceFunctional::unnormalized(2)}) {
    EXPECT_LT(max_abs_diff(orthogonal_projection(x, diag, tau), expected), 1e-15);
  }
}

TEST(ConditionalExpectation, RejectsInvalidUnits) {
  std::vector<ComplexMatrix> units = standard_units(2).units();
  units[1] *= 2.0;
  EXPECT_THROW(conditional_expectation(identity(2), MatrixUnitSystem(2, units),
                                       TraceFunctional::normalized(2)),
               InvalidArgument);
}

TEST(ConditionalExpectation, BimoduleAndTraceProperties) {
  Rng rng(8);
  // Ambient M_3 (+) M_6 with a faithful trace, units of order 3.
  const TraceFunctional tau({3, 6}, {0.4, 0.6});
  const MatrixUnitSystem f0 = random_unital_embedding(3, 3, rng);
  const MatrixUnitSystem f1 = random_unital_embedding(3, 6, rng);
  std::vector<ComplexMatrix> units;
  for (Index k = 0; k < 9; ++k) {
    ComplexMatrix u = ComplexMatrix::Zero(9, 9);
    u.topLeftCorner(3, 3) = f0.units()[static_cast<std::size_t>(k)];
    u.bottomRightCorner(6, 6) = f1.units()[static_cast<std::size_t>(k)];
    units.push_back(u);
  }
  const MatrixUnitSystem f(3, units);
  auto block_random = [&] {
    ComplexMatrix x = ComplexMatrix::Zero(9, 9);
    x.topLeftCorner(3, 3) = gaussian_matrix(3, 3, rng);
    x.bottomRightCorner(6, 6) = gaussian_matrix(6, 6, rng);
    return x;
  };
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix x = block_random();
    const ComplexMatrix y = block_random();
    const ComplexMatrix ex = conditional_expectation(x, f, tau);
    EXPECT_LT(max_abs_diff(conditional_expectation(ex, f, tau), ex), 1e-10);
    EXPECT_LT(std::abs(tau(ex) - tau(x)), 1e-10);
    EXPECT_LT(std::abs(hs_inner(ex, y, tau) - hs_inner(x, conditional_expectation(y, f, tau), tau)),
              1e-10);
    for (Index a = 0; a < 3; ++a)
      for (Index b = 0; b < 3; ++b)
        for (Index c = 0; c < 3; ++c)
          for (Index e = 0; e < 3; ++e) {
            const ComplexMatrix lhs = conditional_expectation(f(a, b) * x * f(c, e), f, tau);
            EXPECT_LT(max_abs_diff(lhs, f(a, b) * ex * f(c, e)), 1e-10);
          }
  }
}

TEST(TraceKernelIdeal, FaithfulTracesHaveZeroIdeal) {
  EXPECT_TRUE(trace_kernel_ideal(TraceFunctional::normalized(3)).trivial());
  EXPECT_TRUE(trace_kernel_ideal(TraceFunctional({2, 2}, {0.5, 0.5})).trivial());
}

TEST(TraceKernelIdeal, ZeroWeightBlock) {
  const TraceFunctional tau({2, 2}, {1.0, 0.0});
  const KernelIdeal ideal = trace_kernel_ideal(tau);
  EXPECT_EQ(ideal.dim(), 4);
  ComplexMatrix p = ComplexMatrix::Zero(4, 4);
  p.bottomRightCorner(2, 2).setIdentity();
  EXPECT_EQ(max_abs_diff(ideal.projection, p), 0.0);
  for (const auto& a : ideal.basis) EXPECT_LT(std::abs(tau(a.adjoint() * a)), 1e-9);
}

TEST(TraceKernelIdeal, NegativeWeightRejected) {
  EXPECT_THROW(trace_kernel_ideal(TraceFunctional({2, 2}, {1.5, -0.5})), InvalidArgument);
}

}  // namespace
}  // namespace qfactor
