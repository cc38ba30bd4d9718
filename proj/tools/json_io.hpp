#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qfactor/free_product.hpp"

namespace qfactor::cli {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent input document (exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

/// {"dim": d, "entries": [[[re, im], ...], ...]}
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& where = "matrix");

/// n x n nested array of JsonMatrix.
Json units_to_json(const MatrixUnitSystem& units);
MatrixUnitSystem units_from_json(const Json& j, const std::string& where = "units");

/// {"n", "blocks", "weights", "g_units", "f_units"}; unit systems are stored
/// per block as n x n arrays of block-sized matrices.
Json trace_to_json(const FiniteDimTrace& tr);
FiniteDimTrace trace_from_json(const Json& j, const TolerancePolicy& pol = {});

/// {"n", "choi"}; a bare JsonMatrix is also accepted on input.
Json channel_to_json(const Channel& ch);
Channel channel_from_json(const Json& j);

/// {"blocks", "weights"}
FiniteTracialAlgebra algebra_from_json(const Json& j, const std::string& where = "algebra");

const Json& require(const Json& j, const std::string& key, const std::string& where);
Index require_index(const Json& j, const std::string& key, const std::string& where);
std::vector<Index> index_list(const Json& j, const std::string& where);
std::vector<double> number_list(const Json& j, const std::string& where);
std::vector<ComplexMatrix> matrix_list(const Json& j, const std::string& where);

}  // namespace qfactor::cli
