#include "json_io.hpp"

#include <cmath>

namespace qfactor::cli {

namespace {

double finite_number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw InputError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError(where + ": non-finite number");
  return x;
}

}  // namespace

const Json& require(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing \"" + key + "\"");
  return *it;
}

Index require_index(const Json& j, const std::string& key, const std::string& where) {
  const Json& v = require(j, key, where);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw InputError(where + ": \"" + key + "\" must be a positive integer");
  }
  return static_cast<Index>(v.get<long long>());
}

std::vector<Index> index_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  std::vector<Index> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
      throw InputError(where + ": expected positive integers");
    }
    out.push_back(static_cast<Index>(v.get<long long>()));
  }
  return out;
}

std::vector<double> number_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(finite_number(v, where));
  return out;
}

std::vector<ComplexMatrix> matrix_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of matrices");
  std::vector<ComplexMatrix> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(matrix_from_json(j[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

Json matrix_to_json(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix_to_json: matrix must be square");
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  Json out;
  out["dim"] = m.rows();
  out["entries"] = std::move(rows);
  return out;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
  const Index d = require_index(j, "dim", where);
  const Json& rows = require(j, "entries", where);
  if (!rows.is_array() || static_cast<Index>(rows.size()) != d) {
    throw InputError(where + ": \"entries\" must have dim rows");
  }
  ComplexMatrix m(d, d);
  for (Index r = 0; r < d; ++r) {
    const Json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != d) {
      throw InputError(where + ": row " + std::to_string(r) + " must have dim entries");
    }
    for (Index c = 0; c < d; ++c) {
      const Json& z = row[static_cast<std::size_t>(c)];
      if (!z.is_array() || z.size() != 2) {
        throw InputError(where + ": entries must be [re, im] pairs");
      }
      m(r, c) = Complex(finite_number(z[0], where), finite_number(z[1], where));
    }
  }
  return m;
}

Json units_to_json(const MatrixUnitSystem& units) {
  Json out = Json::array();
  for (Index i = 0; i < units.order(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < units.order(); ++j) row.push_back(matrix_to_json(units(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

MatrixUnitSystem units_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError(where + ": expected an n x n array");
  const Index n = static_cast<Index>(j.size());
  std::vector<ComplexMatrix> units;
  for (Index i = 0; i < n; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      throw InputError(where + ": expected an n x n array");
    }
    for (Index k = 0; k < n; ++k) {
      units.push_back(matrix_from_json(row[static_cast<std::size_t>(k)],
                                       where + "[" + std::to_string(i) + "][" +
                                           std::to_string(k) + "]"));
    }
  }
  const Index d = units.front().rows();
  for (const auto& u : units) {
    if (u.rows() != d) throw InputError(where + ": units have different sizes");
  }
  return MatrixUnitSystem(n, std::move(units));
}

FiniteTracialAlgebra algebra_from_json(const Json& j, const std::string& where) {
  std::vector<Index> blocks = index_list(require(j, "blocks", where), where + ".blocks");
  std::vector<double> weights = number_list(require(j, "weights", where), where + ".weights");
  if (blocks.empty() || blocks.size() != weights.size()) {
    throw InputError(where + ": blocks and weights must be non-empty and of equal length");
  }
  try {
    return FiniteTracialAlgebra(std::move(blocks), std::move(weights));
  } catch (const InvalidArgument& e) {
    throw InputError(where + ": " + e.what());
  }
}

namespace {

Json blockwise_units(const FiniteTracialAlgebra& alg, const MatrixUnitSystem& units) {
  Json out = Json::array();
  for (std::size_t b = 0; b < alg.num_blocks(); ++b) {
    Json per_block = Json::array();
    for (Index i = 0; i < units.order(); ++i) {
      Json row = Json::array();
      for (Index j = 0; j < units.order(); ++j) {
        row.push_back(matrix_to_json(alg.block(units(i, j), b)));
      }
      per_block.push_back(std::move(row));
    }
    out.push_back(std::move(per_block));
  }
  return out;
}

MatrixUnitSystem assemble_units(const FiniteTracialAlgebra& alg, Index n, const Json& j,
                                const std::string& where) {
  if (!j.is_array() || j.size() != alg.num_blocks()) {
    throw InputError(where + ": expected one unit array per block");
  }
  std::vector<MatrixUnitSystem> per_block;
  for (std::size_t b = 0; b < alg.num_blocks(); ++b) {
    MatrixUnitSystem sys = units_from_json(j[b], where + "[" + std::to_string(b) + "]");
    if (sys.order() != n || sys.ambient_dim() != alg.blocks()[b]) {
      throw InputError(where + "[" + std::to_string(b) +
                       "]: expected n x n matrices of the block size");
    }
    per_block.push_back(std::move(sys));
  }
  std::vector<ComplexMatrix> units;
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < n; ++k) {
      std::vector<ComplexMatrix> parts;
      for (const auto& sys : per_block) parts.push_back(sys(i, k));
      units.push_back(alg.assemble(parts));
    }
  }
  return MatrixUnitSystem(n, std::move(units));
}

}  // namespace

Json trace_to_json(const FiniteDimTrace& tr) {
  Json out;
  out["n"] = tr.n();
  out["blocks"] = tr.algebra().blocks();
  out["weights"] = tr.algebra().weights();
  out["g_units"] = blockwise_units(tr.algebra(), tr.g_units());
  out["f_units"] = blockwise_units(tr.algebra(), tr.f_units());
  return out;
}

FiniteDimTrace trace_from_json(const Json& j, const TolerancePolicy& pol) {
  const Index n = require_index(j, "n", "trace");
  const FiniteTracialAlgebra alg = algebra_from_json(j, "trace");
  MatrixUnitSystem g = assemble_units(alg, n, require(j, "g_units", "trace"), "trace.g_units");
  MatrixUnitSystem f = assemble_units(alg, n, require(j, "f_units", "trace"), "trace.f_units");
  try {
    return FiniteDimTrace(n, alg, std::move(g), std::move(f), pol);
  } catch (const InvalidArgument& e) {
    throw InputError(std::string("trace: ") + e.what());
  }
}

Json channel_to_json(const Channel& ch) {
  Json out;
  out["n"] = ch.n();
  out["choi"] = matrix_to_json(ch.choi());
  return out;
}

Channel channel_from_json(const Json& j) {
  const bool wrapped = j.is_object() && j.contains("choi");
  ComplexMatrix choi = matrix_from_json(wrapped ? j["choi"] : j, "choi");
  try {
    Channel ch = Channel::from_choi(std::move(choi));
    if (wrapped && j.contains("n") && require_index(j, "n", "channel") != ch.n()) {
      throw InputError("channel: \"n\" does not match the Choi matrix size");
    }
    return ch;
  } catch (const DimensionError& e) {
    throw InputError(std::string("channel: ") + e.what());
  }
}

}  // namespace qfactor::cli
