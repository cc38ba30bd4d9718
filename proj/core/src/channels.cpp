#include "qfactor/channels.hpp"

#include <cmath>
#include <string>

namespace qfactor {

Channel::Channel(Index n, ComplexMatrix choi) : n_(n), choi_(std::move(choi)) {
  if (n_ < 1) throw InvalidArgument("channel: n must be >= 1");
  if (choi_.rows() != n_ * n_ || choi_.cols() != n_ * n_) {
    throw DimensionError("channel: Choi matrix must be " + std::to_string(n_ * n_) +
                         "x" + std::to_string(n_ * n_));
  }
}

Channel Channel::from_choi(ComplexMatrix choi) {
  require_square(choi, "Channel::from_choi");
  const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(choi.rows()))));
  if (n * n != choi.rows()) {
    throw DimensionError("channel: Choi dimension " + std::to_string(choi.rows()) +
                         " is not a perfect square");
  }
  return Channel(n, std::move(choi));
}

ComplexMatrix Channel::image_of_unit(Index i, Index j) const {
  return choi_.block(i * n_, j * n_, n_, n_);
}

Channel choi_of_map(Index n, std::span<const ComplexMatrix> images) {
  if (static_cast<Index>(images.size()) != n * n) {
    throw DimensionError("choi_of_map: expected " + std::to_string(n * n) +
                         " images T(e_ij)");
  }
  ComplexMatrix choi(n * n, n * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const ComplexMatrix& t = images[static_cast<std::size_t>(i * n + j)];
      if (t.rows() != n || t.cols() != n) {
        throw DimensionError("choi_of_map: T(e_ij) must be " + std::to_string(n) +
                             "x" + std::to_string(n));
      }
      choi.block(i * n, j * n, n, n) = t;
    }
  }
  return Channel(n, std::move(choi));
}

Channel choi_of_map(Index n, const LinearMap& map) {
  std::vector<ComplexMatrix> images;
  images.reserve(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) images.push_back(map(matrix_unit(n, i, j)));
  }
  return choi_of_map(n, images);
}

ComplexMatrix apply_choi(const Channel& ch, const ComplexMatrix& x) {
  const Index n = ch.n();
  if (x.rows() != n || x.cols() != n) {
    throw DimensionError("apply_choi: input must be " + std::to_string(n) + "x" +
                         std::to_string(n));
  }
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      out += x(i, j) * ch.choi().block(i * n, j * n, n, n);
    }
  }
  return out;
}

ComplexMatrix trace_out_input(const Channel& ch) {
  const Index n = ch.n();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) out += ch.choi().block(i * n, i * n, n, n);
  return out;
}

ComplexMatrix trace_out_output(const Channel& ch) {
  const Index n = ch.n();
  ComplexMatrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out(i, j) = ch.choi().block(i * n, j * n, n, n).trace();
  }
  return out;
}

ChannelReport verify_channel(const Channel& ch, const TolerancePolicy& pol) {
  ChannelReport rep;
  const ComplexMatrix& c = ch.choi();
  rep.hermitian = is_hermitian(c, pol.eps_eq);
  rep.min_eigenvalue = min_eigenvalue(c);
  rep.cp = rep.hermitian && rep.min_eigenvalue >= -pol.eps_psd;
  const ComplexMatrix id = identity(ch.n());
  rep.unital_residual = max_abs_diff(trace_out_input(ch), id);
  rep.tp_residual = max_abs_diff(trace_out_output(ch), id);
  rep.unital = rep.unital_residual <= pol.eps_eq;
  rep.trace_preserving = rep.tp_residual <= pol.eps_eq;
  return rep;
}

Channel channel_from_ancilla(const ComplexMatrix& u, Index n,
                             const FiniteTracialAlgebra& ancilla,
                             const TolerancePolicy& pol) {
  const Index d = ancilla.dim();
  if (u.rows() != n * d || u.cols() != n * d) {
    throw DimensionError("channel_from_ancilla: u must be " +
                         std::to_string(n * d) + "x" + std::to_string(n * d));
  }
  if (!is_unitary(u, pol.eps_eq)) {
    throw InvalidArgument("channel_from_ancilla: u is not unitary");
  }
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      if (!ancilla.contains(u.block(a * d, b * d, d, d), pol.eps_eq)) {
        throw InvalidArgument(
            "channel_from_ancilla: u does not lie in M_n (x) N (off-block entries)");
      }
    }
  }
  const ComplexMatrix ones = identity(d);
  return choi_of_map(n, [&](const ComplexMatrix& x) {
    const ComplexMatrix y = u * kron(x, ones) * u.adjoint();
    return partial_trace_ancilla(y, n, ancilla.trace());
  });
}

ComplexMatrix embedding_adjoint(const ComplexMatrix& y,
                                const MatrixUnitSystem& beta_units,
                                const TraceFunctional& tau_m,
                                const TolerancePolicy& pol) {
  if (beta_units.ambient_dim() != tau_m.dim()) {
    throw DimensionError("embedding_adjoint: units and trace act on different algebras");
  }
  const UnitsReport rep = validate_units(beta_units, pol);
  if (!rep.pass) {
    throw InvalidArgument("embedding_adjoint: invalid matrix units (" +
                          rep.worst_relation + ")");
  }
  const Index n = beta_units.order();
  ComplexMatrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      out(i, j) = static_cast<double>(n) * hs_inner(y, beta_units(i, j), tau_m);
    }
  }
  return out;
}

double channel_distance(const Channel& a, const Channel& b) {
  if (a.n() != b.n()) throw DimensionError("channel_distance: different n");
  return (a.choi() - b.choi()).norm() / static_cast<double>(a.n());
}

Channel identity_channel(Index n) {
  return choi_of_map(n, [](const ComplexMatrix& x) { return x; });
}

Channel depolarizing_channel(Index n) {
  return choi_of_map(n, [n](const ComplexMatrix& x) {
    return ComplexMatrix(x.trace() / static_cast<double>(n) * identity(n));
  });
}

Channel transpose_map(Index n) {
  return choi_of_map(n, [](const ComplexMatrix& x) { return ComplexMatrix(x.transpose()); });
}

Channel conjugation_channel(const ComplexMatrix& v) {
  require_square(v, "conjugation_channel");
  return choi_of_map(v.rows(), [&v](const ComplexMatrix& x) {
    return ComplexMatrix(v * x * v.adjoint());
  });
}

}  // namespace qfactor
