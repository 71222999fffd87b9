#include "densor/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace densor {

namespace {

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  return *it;
}

std::uint64_t as_uint(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw ParseError(where + ": expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::vector<std::size_t> dims_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a nonempty list");
  std::vector<std::size_t> d;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto v = as_uint(j[i], where + "[" + std::to_string(i) + "]");
    if (v == 0) throw ParseError(where + "[" + std::to_string(i) + "]: dimension must be positive");
    d.push_back(v);
  }
  return d;
}

}  // namespace

Json field_to_json(const Field& F) {
  Json j;
  j["p"] = F.p();
  j["k"] = F.k();
  if (F.k() > 1) j["modulus"] = F.modulus();
  return j;
}

Field field_from_json(const Json& j) {
  const auto p = as_uint(require(j, "p", "field"), "field.p");
  std::uint64_t k = 1;
  if (j.contains("k")) k = as_uint(j["k"], "field.k");
  try {
    if (j.contains("modulus")) {
      const Json& m = j["modulus"];
      if (!m.is_array()) throw ParseError("field.modulus: expected a list");
      std::vector<std::uint32_t> mod;
      for (std::size_t i = 0; i < m.size(); ++i)
        mod.push_back(static_cast<std::uint32_t>(as_uint(m[i], "field.modulus[" + std::to_string(i) + "]")));
      if (mod.size() != k + 1) throw ParseError("field.modulus: degree does not match k");
      return Field::with_modulus(static_cast<std::uint32_t>(p), mod);
    }
    return Field::make(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(k));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("field: ") + e.what());
  }
}

Json elem_to_json(const Field& F, Elem e) {
  if (F.is_prime()) return e;
  return F.coords(e);
}

Elem elem_from_json(const Field& F, const Json& j, const std::string& where) {
  if (F.is_prime()) {
    const auto v = as_uint(j, where);
    if (v >= F.p()) throw ParseError(where + ": entry out of range");
    return static_cast<Elem>(v);
  }
  if (!j.is_array() || j.size() != F.k()) throw ParseError(where + ": expected " + std::to_string(F.k()) + " coordinates");
  std::vector<std::uint32_t> c;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto v = as_uint(j[i], where);
    if (v >= F.p()) throw ParseError(where + ": coordinate out of range");
    c.push_back(static_cast<std::uint32_t>(v));
  }
  return F.from_coords(c);
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(elem_to_json(m.field(), m(i, k)));
    rows.push_back(std::move(r));
  }
  return rows;
}

Matrix matrix_from_json(const Field& F, const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError(where + ": expected a list of rows");
  const std::size_t rows = j.size(), cols = j[0].size();
  Matrix m(F, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != cols) throw ParseError(w + ": ragged row");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = elem_from_json(F, j[i][k], w + "[" + std::to_string(k) + "]");
  }
  return m;
}

Json tensor_to_json(const Tensor& t) {
  Json j;
  j["field"] = field_to_json(t.field());
  j["dims"] = t.dims();
  Json e = Json::array();
  for (auto x : t.entries()) e.push_back(elem_to_json(t.field(), x));
  j["entries"] = std::move(e);
  return j;
}

Tensor tensor_from_json(const Json& j) {
  const Field F = field_from_json(require(j, "field", "tensor"));
  const auto dims = dims_from_json(require(j, "dims", "tensor"), "dims");
  if (dims.size() < 2) throw ParseError("dims: a tensor needs at least two axes");
  const Json& e = require(j, "entries", "tensor");
  Frame frame = make_frame(F, dims);
  if (!e.is_array() || e.size() != frame.volume())
    throw ParseError("entries: expected " + std::to_string(frame.volume()) + " entries");
  Tensor t(frame);
  for (std::size_t i = 0; i < e.size(); ++i) t[i] = elem_from_json(F, e[i], "entries[" + std::to_string(i) + "]");
  return t;
}

Json tuple_to_json(const OperatorTuple& o) {
  Json j = Json::array();
  for (const auto& m : o.mats) j.push_back(matrix_to_json(m));
  return j;
}

OperatorTuple tuple_from_json(const Frame& frame, const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != frame.arity()) throw ParseError(where + ": expected one matrix per axis");
  OperatorTuple o;
  for (std::size_t a = 0; a < j.size(); ++a) {
    Matrix m = matrix_from_json(frame.field, j[a], where + "[" + std::to_string(a) + "]");
    if (m.rows() != frame.dims[a] || m.cols() != frame.dims[a])
      throw ParseError(where + "[" + std::to_string(a) + "]: wrong matrix size");
    o.mats.push_back(std::move(m));
  }
  return o;
}

Json module_to_json(const LieModule& m) {
  Json j;
  j["field"] = field_to_json(m.field);
  j["dimV"] = m.dim;
  Json a = Json::array();
  for (const auto& x : m.action) a.push_back(matrix_to_json(x));
  j["algebra"] = std::move(a);
  return j;
}

LieModule module_from_json(const Json& j) {
  LieModule m;
  m.field = field_from_json(require(j, "field", "module"));
  m.dim = as_uint(require(j, "dimV", "module"), "dimV");
  if (m.dim == 0) throw ParseError("dimV: must be positive");
  const Json& a = require(j, "algebra", "module");
  if (!a.is_array() || a.empty()) throw ParseError("algebra: expected a nonempty list of matrices");
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string w = "algebra[" + std::to_string(i) + "]";
    Matrix x = matrix_from_json(m.field, a[i], w);
    if (x.rows() != m.dim || x.cols() != m.dim) throw ParseError(w + ": expected a dimV x dimV matrix");
    m.action.push_back(std::move(x));
  }
  return m;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    // byte offset -> line
    const std::string text = ss.str();
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ParseError(path + ":" + std::to_string(line) + ": " + e.what());
  }
}

}  // namespace densor
