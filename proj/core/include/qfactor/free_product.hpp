#pragma once

#include <span>
#include <vector>

#include "qfactor/channels.hpp"
#include "qfactor/matrix_units.hpp"
#include "qfactor/star_algebra.hpp"
#include "qfactor/tracial_algebra.hpp"

namespace qfactor {

/// A finite-dimensional tracial state on M_n * M_n: a finite tracial
/// algebra (M, tau_M) with two unital systems of n x n matrix units, the
/// images of the first copy (g_ij) and of the second copy (f_ij). The state
/// is tau = tau_M o pi, where pi sends the first copy's e_ij to g_ij and the
/// second's to f_ij. Both systems are block-diagonal in M, so n divides
/// every block size.
class FiniteDimTrace {
 public:
  /// Validates the invariants; throws InvalidArgument on violation.
  FiniteDimTrace(Index n, FiniteTracialAlgebra algebra, MatrixUnitSystem g_units,
                 MatrixUnitSystem f_units, const TolerancePolicy& pol = {});

  Index n() const { return n_; }
  const FiniteTracialAlgebra& algebra() const { return algebra_; }
  const MatrixUnitSystem& g_units() const { return g_; }
  const MatrixUnitSystem& f_units() const { return f_; }

 private:
  Index n_;
  FiniteTracialAlgebra algebra_;
  MatrixUnitSystem g_;
  MatrixUnitSystem f_;
};

enum class Side { first = 1, second = 2 };

/// One letter of a word in M_n * M_n: an element of the first or second copy.
struct Letter {
  Side side;
  ComplexMatrix x;
};

/// tau(w) for a word w = letters[0] letters[1] ... ; the empty word gives 1.
Complex evaluate_word(const FiniteDimTrace& tr, std::span<const Letter> word);

/// The n^4 values K(i,j;k,l) = tau(f_kl* g_ij), laid out like a Choi
/// matrix: values(i*n + k, j*n + l) = K(i,j;k,l).
struct CorrelationMatrix {
  Index n = 0;
  ComplexMatrix values;

  Complex operator()(Index i, Index j, Index k, Index l) const {
    return values(i * n + k, j * n + l);
  }
};

CorrelationMatrix correlation_matrix(const FiniteDimTrace& tr);

/// The factorizable channel with Choi coefficients C(i,j;k,l) = n K(i,j;k,l),
/// i.e. x -> sum_ij n tau(f_ij* g(x)) e_ij.
Channel phi(const FiniteDimTrace& tr);

/// Packages two unit systems in `algebra` as a trace; same checks as the
/// FiniteDimTrace constructor.
FiniteDimTrace trace_from_pair(Index n, const MatrixUnitSystem& g_units,
                               const MatrixUnitSystem& f_units,
                               const FiniteTracialAlgebra& algebra,
                               const TolerancePolicy& pol = {});

/// The trace behind channel_from_ancilla(u, n, ancilla): g_ij = u(e_ij (x) 1)u*,
/// f_ij = e_ij (x) 1 in M_n (x) N with tr_n (x) tau_N. M_n (x) N is reordered
/// block-major so it is again a block-diagonal tracial algebra with blocks
/// n*d_j and the ancilla's weights.
FiniteDimTrace trace_from_ancilla(const ComplexMatrix& u, Index n,
                                  const FiniteTracialAlgebra& ancilla,
                                  const TolerancePolicy& pol = {});

/// Both copies equal to the identity representation on M_n with tr_n.
FiniteDimTrace identity_pair_trace(Index n);
/// g_ij = e_ij (x) 1, f_ij = 1 (x) e_ij in M_n (x) M_n with tr_n (x) tr_n.
FiniteDimTrace tensor_pair_trace(Index n);

/// Independent random unital embeddings of both copies into every block.
FiniteDimTrace random_trace(Index n, const std::vector<Index>& blocks,
                            const std::vector<double>& weights, Rng& rng);

struct WeightedTrace {
  double weight;
  FiniteDimTrace trace;
};

/// tau = sum_j c_j tau_j over the blocks of the algebra generated by both
/// unit systems. c_j = tau(e_j) for the minimal central projections e_j;
/// each tau_j lives on the single full block e_j M e_j with its normalized
/// trace. Components with weight <= eps_eq are dropped.
std::vector<WeightedTrace> decompose_trace(const FiniteDimTrace& tr, Rng& rng,
                                           const TolerancePolicy& pol = {});

/// Direct sum of the inputs with weights scaled by coeffs.
FiniteDimTrace convex_combine(std::span<const FiniteDimTrace> traces,
                              std::span<const double> coeffs,
                              const TolerancePolicy& pol = {});

/// The weights 2^{-k} / (1 - 2^{-L}), k = 1..L.
std::vector<double> faithful_weights(std::size_t count);

/// Combination with faithful_weights. Inputs that share their algebra and
/// both unit systems are merged into one algebra with mixed weights, so the
/// kernel ideal of the result is the intersection of the inputs' ideals in
/// that algebra; otherwise the inputs are direct-summed via convex_combine.
FiniteDimTrace faithful_combination(std::span<const FiniteDimTrace> traces,
                                    const TolerancePolicy& pol = {});

/// Kernel ideal of tau_M inside the trace's algebra.
KernelIdeal kernel_ideal(const FiniteDimTrace& tr);

/// dim(A / I_tau) = dim pi(A) compressed to the support of tau_M: the
/// dimension of the GNS image of the free product.
Index gns_image_dimension(const FiniteDimTrace& tr, const TolerancePolicy& pol = {});

/// The *-algebra generated by both unit systems.
StarSubalgebra generated_image(const FiniteDimTrace& tr, const TolerancePolicy& pol = {});

/// True iff the correlation matrices agree within eps_eq; equivalently
/// phi(t1) = phi(t2).
bool same_phi_fiber(const FiniteDimTrace& t1, const FiniteDimTrace& t2,
                    const TolerancePolicy& pol = {});

}  // namespace qfactor
