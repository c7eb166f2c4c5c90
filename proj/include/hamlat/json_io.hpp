#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hamlat/cartan.hpp"
#include "hamlat/chains.hpp"
#include "hamlat/field.hpp"
#include "hamlat/hamming.hpp"
#include "hamlat/matrix.hpp"

namespace hamlat {

using Json = nlohmann::ordered_json;

// Every *_from_json throws std::invalid_argument on malformed input.

Json to_json(const HElement& x);
/// {"n": 4, "bits": "1010"} or a bare bit-string.
HElement helement_from_json(const Json& j);
/// A bit-string, or an inline JSON object when the text starts with '{'.
HElement parse_helement(std::string_view text);

Json to_json(const Rank& r);

/// A chain file before validation.
struct ChainFile {
  std::vector<std::size_t> sizes;
  std::vector<Embedding> embeddings;
  bool complete = false;
};

/// {"sizes": [...], "embeddings": [[[...], ...], ...] | absent | null, "complete": bool}
Json to_json(const ChainSpace& c);
/// Parses the shape only; omitted or null embeddings become canonical ones.
ChainFile chain_file_from_json(const Json& j);
ChainSpace chain_from_json(const Json& j);

/// Field named by a matrix object's "field" member.
AnyField field_from_json(const Json& j);

template <ExactField F>
Json element_to_json(const F& field, const typename F::Element& a) {
  if constexpr (std::is_same_v<F, RationalField>) {
    return field.to_string(a);
  } else {
    return a;
  }
}

template <ExactField F>
typename F::Element element_from_json(const F& field, const Json& j) {
  if constexpr (std::is_same_v<F, RationalField>) {
    if (j.is_number_integer()) return field.from_int(j.get<std::int64_t>());
    if (j.is_string()) return field.parse(j.get<std::string>());
    throw std::invalid_argument("rational entries must be integers or \"p/q\" strings");
  } else {
    if (!j.is_number_integer()) throw std::invalid_argument("entries over " + field.name() + " must be integers");
    return field.from_int(j.get<std::int64_t>());
  }
}

template <ExactField F>
Json to_json(const Matrix<F>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.n(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.n(); ++j) row.push_back(element_to_json(m.field(), m(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"field", m.field().name()}, {"n", m.n()}, {"rows", std::move(rows)}};
}

template <ExactField F>
Matrix<F> matrix_from_json(const F& field, const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array()) {
    throw std::invalid_argument("matrix must be an object with a \"rows\" array");
  }
  if (j.contains("field") && j["field"] != field.name()) {
    throw std::invalid_argument("matrix over " + j["field"].dump() + " where " + field.name() + " was expected");
  }
  const auto& rows = j["rows"];
  const std::size_t n = rows.size();
  if (n == 0) throw std::invalid_argument("matrix has no rows");
  if (j.contains("n") && j["n"] != n) throw std::invalid_argument("matrix \"n\" disagrees with its rows");
  Matrix<F> m(field, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!rows[r].is_array() || rows[r].size() != n) throw std::invalid_argument("matrix rows must form a square");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = element_from_json(field, rows[r][c]);
  }
  return m;
}

template <ExactField F>
Json to_json(const CartanFrame<F>& frame) {
  Json out = Json::array();
  for (const auto& e : frame.idempotents()) out.push_back(to_json(e));
  return out;
}

template <ExactField F>
std::vector<Matrix<F>> matrices_from_json(const F& field, const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("frame must be a non-empty array of matrices");
  std::vector<Matrix<F>> out;
  for (const auto& m : j) out.push_back(matrix_from_json(field, m));
  return out;
}

Json to_json(const Theorem3Report& r);

/// Reads a file, or throws std::invalid_argument.
std::string read_file(const std::string& path);
Json parse_json(std::string_view text, const std::string& source);

}  // namespace hamlat
