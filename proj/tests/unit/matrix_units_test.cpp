#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "qfactor/matrix_units.hpp"
#include "qfactor/star_algebra.hpp"

namespace qfactor {
namespace {

ComplexMatrix pauli_x() {
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

ComplexMatrix pauli_z() {
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

TEST(StandardUnits, EntriesAndUnit) {
  const MatrixUnitSystem e = standard_units(2);
  ComplexMatrix e11 = ComplexMatrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  EXPECT_EQ(max_abs_diff(e(0, 0), e11), 0.0);
  EXPECT_EQ(max_abs_diff(e.unit(), identity(2)), 0.0);
}

TEST(StandardUnits, ValidateUpToSix) {
  for (Index n = 1; n <= 6; ++n) {
    const UnitsReport rep = validate_units(standard_units(n));
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.max_residual, 0.0);
  }
}

TEST(ValidateUnits, DoubledOffDiagonalUnitFails) {
  std::vector<ComplexMatrix> units = standard_units(2).units();
  units[1] *= 2.0;  // f_12
  const UnitsReport rep = validate_units(MatrixUnitSystem(2, units));
  EXPECT_FALSE(rep.pass);
  EXPECT_EQ(rep.worst_relation, "f_12 f_21 = f_11");
  EXPECT_DOUBLE_EQ(rep.max_residual, 1.0);
}

TEST(ValidateUnits, NonUnitalSystemFails) {
  // A single rank-one projection is a valid 1x1 system but not unital in M_2.
  const UnitsReport rep = validate_units(MatrixUnitSystem(1, {matrix_unit(2, 0, 0)}));
  EXPECT_FALSE(rep.pass);
  EXPECT_EQ(rep.worst_relation, "sum_i f_ii = 1");
}

TEST(RandomUnitalEmbedding, ValidWithExpectedRank) {
  const MatrixUnitSystem f = random_unital_embedding(2, 4, std::uint64_t{1});
  const UnitsReport rep = validate_units(f);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(rep.max_residual, 1e-10);
  const Eigen::JacobiSVD<ComplexMatrix> svd(f(0, 0));
  Index rank = 0;
  for (Index k = 0; k < svd.singularValues().size(); ++k) rank += svd.singularValues()(k) > 1e-9;
  EXPECT_EQ(rank, 2);
}

TEST(RandomUnitalEmbedding, RejectsNonDivisor) {
  EXPECT_THROW(random_unital_embedding(2, 3, std::uint64_t{1}), InvalidArgument);
}

TEST(RandomUnitalEmbedding, FullDimensionIsConjugatedStandardUnits) {
  const MatrixUnitSystem f = random_unital_embedding(3, 3, std::uint64_t{8});
  EXPECT_TRUE(validate_units(f).pass);
  for (const auto& u : f.units()) EXPECT_NEAR(u.norm(), 1.0, 1e-12);
}

TEST(RandomUnitalEmbedding, AllProducedSystemsValidate) {
  Rng rng(2024);
  for (Index n = 1; n <= 3; ++n) {
    for (Index m = 1; m <= 3; ++m) {
      const UnitsReport rep = validate_units(random_unital_embedding(n, n * m, rng));
      EXPECT_TRUE(rep.pass);
      EXPECT_LT(rep.max_residual, 1e-10);
    }
  }
}

void expect_intertwines(const MatrixUnitSystem& f, const MatrixUnitSystem& fp,
                        const ComplexMatrix& u) {
  EXPECT_LT(max_abs(u * u.adjoint() - identity(u.rows())), 1e-9);
  for (Index i = 0; i < f.order(); ++i)
    for (Index j = 0; j < f.order(); ++j)
      EXPECT_LT(max_abs_diff(u * fp(i, j) * u.adjoint(), f(i, j)), 1e-8);
}

TEST(Intertwiner, SameSystem) {
  const MatrixUnitSystem f = random_unital_embedding(2, 4, std::uint64_t{3});
  expect_intertwines(f, f, intertwiner(f, f));
}

TEST(Intertwiner, HaarConjugate) {
  Rng rng(4);
  const MatrixUnitSystem f = random_unital_embedding(3, 6, rng);
  const ComplexMatrix v = haar_unitary(6, rng);
  std::vector<ComplexMatrix> conj;
  for (const auto& x : f.units()) conj.push_back(v * x * v.adjoint());
  const MatrixUnitSystem fp(3, conj);
  expect_intertwines(f, fp, intertwiner(f, fp));
}

TEST(Intertwiner, IndependentEmbeddings) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixUnitSystem f = random_unital_embedding(2, 4, rng);
    const MatrixUnitSystem fp = random_unital_embedding(2, 4, rng);
    expect_intertwines(f, fp, intertwiner(f, fp));
  }
}

TEST(Intertwiner, RejectsMismatchedSystems) {
  EXPECT_THROW(intertwiner(standard_units(2), standard_units(3)), DimensionError);
  EXPECT_THROW(intertwiner(random_unital_embedding(2, 4, std::uint64_t{1}),
                           random_unital_embedding(4, 4, std::uint64_t{1})),
               DimensionError);
}

TEST(UnitsFromUnitaries, TrivialAncillaGivesStandardUnits) {
  const std::vector<ComplexMatrix> us = {identity(1)};
  const MatrixUnitSystem f = units_from_unitaries(2, us);
  const MatrixUnitSystem e = standard_units(2);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(max_abs_diff(f.units()[k], e.units()[k]), 0.0);
}

TEST(UnitsFromUnitaries, DiagonalSignUnitary) {
  const std::vector<ComplexMatrix> us = {pauli_z()};
  const MatrixUnitSystem f = units_from_unitaries(2, us);
  EXPECT_EQ(max_abs_diff(f(0, 1), kron(matrix_unit(2, 0, 1), pauli_z())), 0.0);
  // f_12* f_12 = e_22 (x) 1
  EXPECT_LT(max_abs_diff(f(0, 1).adjoint() * f(0, 1), kron(matrix_unit(2, 1, 1), identity(2))),
            1e-15);
  EXPECT_TRUE(validate_units(f).pass);
}

TEST(UnitsFromUnitaries, PauliPairGivesThreeSystemInM6) {
  const std::vector<ComplexMatrix> us = {pauli_x(), pauli_z()};
  const MatrixUnitSystem f = units_from_unitaries(3, us);
  EXPECT_EQ(f.ambient_dim(), 6);
  const UnitsReport rep = validate_units(f);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(rep.max_residual, 1e-10);
}

TEST(UnitsFromUnitaries, RejectsNonUnitary) {
  const std::vector<ComplexMatrix> us = {ComplexMatrix(2.0 * identity(2))};
  EXPECT_THROW(units_from_unitaries(2, us), InvalidArgument);
}

TEST(UnitsFromUnitaries, GeneratedAlgebraIsSurjective) {
  // alpha(M_n) together with the f_ij generates M_n (x) A, where A is the
  // algebra generated by the unitaries.
  struct Case {
    std::vector<ComplexMatrix> us;
    Index expected_ancilla_dim;
  };
  const std::vector<Case> cases = {{{pauli_x(), pauli_z()}, 4}, {{pauli_z()}, 2},
                                   {{pauli_x()}, 2}};
  for (const Case& c : cases) {
    const Index n = static_cast<Index>(c.us.size()) + 1;
    const Index d = 2;
    const StarSubalgebra a = generated_algebra(c.us, true);
    EXPECT_EQ(a.dim(), c.expected_ancilla_dim);
    std::vector<ComplexMatrix> gens;
    const MatrixUnitSystem f = units_from_unitaries(n, c.us);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        gens.push_back(kron(matrix_unit(n, i, j), identity(d)));
        gens.push_back(f(i, j));
      }
    }
    EXPECT_EQ(generated_algebra(gens, true).dim(), n * n * a.dim());
  }
}

TEST(GeneratorBlocks, ExtractsSingleBlock) {
  Rng rng(6);
  const ComplexMatrix u = haar_unitary(3, rng);
  const auto blocks = generator_blocks(kron(matrix_unit(2, 0, 1), u), 2, 3);
  ASSERT_EQ(blocks.size(), 4u);
  EXPECT_EQ(max_abs_diff(blocks[1], u), 0.0);
  EXPECT_EQ(max_abs(blocks[0]) + max_abs(blocks[2]) + max_abs(blocks[3]), 0.0);
}

TEST(GeneratorBlocks, IdentityHasIdentityDiagonal) {
  const auto blocks = generator_blocks(identity(6), 3, 2);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j)
      EXPECT_EQ(max_abs_diff(blocks[static_cast<std::size_t>(i * 3 + j)],
                             i == j ? identity(2) : ComplexMatrix::Zero(2, 2)),
                0.0);
}

TEST(GeneratorBlocks, AssembleIsInverse) {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix b = gaussian_matrix(6, 6, rng);
    EXPECT_EQ(max_abs_diff(assemble_blocks(generator_blocks(b, 2, 3), 2), b), 0.0);
    EXPECT_EQ(max_abs_diff(assemble_blocks(generator_blocks(b, 3, 2), 3), b), 0.0);
  }
}

TEST(GeneratorBlocks, RejectsIndivisibleShape) {
  EXPECT_THROW(generator_blocks(identity(5), 2, 2), DimensionError);
}

}  // namespace
}  // namespace qfactor
