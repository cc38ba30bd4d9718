#pragma once

#include <functional>
#include <span>

#include "qfactor/matrix_core.hpp"
#include "qfactor/matrix_units.hpp"
#include "qfactor/tracial_algebra.hpp"

namespace qfactor {

/// A linear map on M_n represented by its Choi matrix
///   C_T = sum_ij e_ij (x) T(e_ij).
/// Index convention: entry (i*n + k, j*n + l) is C_T(i,j;k,l) = T(e_ij)_kl,
/// so the first tensor factor indexes the input matrix unit.
class Channel {
 public:
  Channel(Index n, ComplexMatrix choi);

  /// Infers n from an n^2 x n^2 Choi matrix.
  static Channel from_choi(ComplexMatrix choi);

  Index n() const { return n_; }
  const ComplexMatrix& choi() const { return choi_; }

  /// C_T(i,j;k,l), 0-based.
  Complex coefficient(Index i, Index j, Index k, Index l) const {
    return choi_(i * n_ + k, j * n_ + l);
  }

  /// T(e_ij) read off the Choi matrix.
  ComplexMatrix image_of_unit(Index i, Index j) const;

 private:
  Index n_;
  ComplexMatrix choi_;
};

using LinearMap = std::function<ComplexMatrix(const ComplexMatrix&)>;

/// `images` is row-major: images[i*n + j] = T(e_ij).
Channel choi_of_map(Index n, std::span<const ComplexMatrix> images);
Channel choi_of_map(Index n, const LinearMap& map);

/// T(x) = sum_ij x_ij T(e_ij), with T(e_ij) = sum_kl C_T(i,j;k,l) e_kl.
ComplexMatrix apply_choi(const Channel& ch, const ComplexMatrix& x);

/// (Tr (x) id)(C): sum_i T(e_ii) = T(1).
ComplexMatrix trace_out_input(const Channel& ch);
/// (id (x) Tr)(C): the matrix [Tr T(e_ij)]_ij.
ComplexMatrix trace_out_output(const Channel& ch);

struct ChannelReport {
  bool cp = false;
  bool unital = false;
  bool trace_preserving = false;
  bool hermitian = false;
  double min_eigenvalue = 0.0;
  double unital_residual = 0.0;
  double tp_residual = 0.0;

  bool quantum_channel() const { return cp && unital && trace_preserving; }
};

/// cp: Choi matrix PSD (false when not Hermitian within eps_eq);
/// unital: (Tr (x) id)(C) = 1; trace_preserving: (id (x) Tr)(C) = 1.
ChannelReport verify_channel(const Channel& ch, const TolerancePolicy& pol = {});

/// x -> (id_n (x) tau_N)(u (x (x) 1_N) u*) for a unitary u in M_n (x) N,
/// N a finite tracial algebra realized block-diagonally in M_D.
Channel channel_from_ancilla(const ComplexMatrix& u, Index n,
                             const FiniteTracialAlgebra& ancilla,
                             const TolerancePolicy& pol = {});

/// beta*(y) = sum_ij n <y, f_ij>_{tau_M} e_ij, the adjoint of
/// beta: e_ij -> f_ij with respect to tr_n on M_n and tau_M on the ambient.
ComplexMatrix embedding_adjoint(const ComplexMatrix& y,
                                const MatrixUnitSystem& beta_units,
                                const TraceFunctional& tau_m,
                                const TolerancePolicy& pol = {});

/// ||C_a - C_b||_HS / n.
double channel_distance(const Channel& a, const Channel& b);

/// Named maps used by examples, tests and the CLI.
Channel identity_channel(Index n);
/// x -> tr_n(x) 1.
Channel depolarizing_channel(Index n);
/// x -> x^T.
Channel transpose_map(Index n);
/// x -> v x v*.
Channel conjugation_channel(const ComplexMatrix& v);

}  // namespace qfactor
