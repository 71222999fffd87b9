#pragma once

// JSON encodings. Keys are written in a fixed order; field elements are plain
// integers over prime fields and coordinate lists (low degree first) otherwise.
//   field:  {"p": 5, "k": 2, "modulus": [2, 1, 1]}   (modulus only when k > 1)
//   tensor: {"field": ..., "dims": [...], "entries": [...]}  flat, axis 0 slowest
//   matrix: list of rows
//   module: {"field": ..., "dimV": n, "algebra": [matrix, ...]}

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "densor/lie.hpp"
#include "densor/tensor.hpp"

namespace densor {

using Json = nlohmann::ordered_json;

/// Malformed input; the message names the offending field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json field_to_json(const Field& F);
Field field_from_json(const Json& j);

Json elem_to_json(const Field& F, Elem e);
Elem elem_from_json(const Field& F, const Json& j, const std::string& where);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Field& F, const Json& j, const std::string& where);

Json tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const Json& j);

Json tuple_to_json(const OperatorTuple& o);
OperatorTuple tuple_from_json(const Frame& frame, const Json& j, const std::string& where);

Json module_to_json(const LieModule& m);
LieModule module_from_json(const Json& j);

/// Parses a file; syntax errors become ParseError with the line number.
Json read_json_file(const std::string& path);

}  // namespace densor
