#pragma once

// JSON (de)serialization of automata and Graphviz DOT export.
//
// Schema:
//   {"alphabet": ["a", "b"], "alpha": [..], "beta": [..],
//    "transitions": {"a": [[..], ..], "b": [[..], ..]}}
// Matrices are row-major lists of rows.

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wfax/error.hpp"
#include "wfax/wfa.hpp"

namespace wfax {

using Json = nlohmann::json;

namespace detail {

inline double finite_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(where + ": non-finite value");
  return v;
}

inline Vector vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = finite_number(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

inline Matrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = 0;
  if (rows > 0) {
    if (!j[0].is_array()) throw SchemaError(where + "[0]: expected a row array");
    cols = static_cast<Eigen::Index>(j[0].size());
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw SchemaError(where + ": ragged matrix at row " + std::to_string(r));
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = finite_number(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

inline Json to_json(const Vector& v) {
  Json j = Json::array();
  for (double x : v) j.push_back(x);
  return j;
}

inline Json to_json(const Matrix& m) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(std::move(row));
  }
  return j;
}

inline const Json& require_key(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw SchemaError(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

inline Alphabet alphabet_from_json(const Json& j) {
  if (!j.is_array()) throw SchemaError("alphabet: expected an array of strings");
  std::vector<std::string> names;
  for (const auto& s : j) {
    if (!s.is_string()) throw SchemaError("alphabet: expected an array of strings");
    names.push_back(s.get<std::string>());
  }
  try {
    return Alphabet(std::move(names));
  } catch (const AlphabetError& e) {
    throw SchemaError(std::string("alphabet: ") + e.what());
  }
}

inline std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

}  // namespace detail

inline Json to_json(const Wfa& wfa) {
  Json j;
  j["alphabet"] = wfa.alphabet().symbols();
  j["alpha"] = detail::to_json(wfa.alpha());
  j["beta"] = detail::to_json(wfa.beta());
  Json t = Json::object();
  for (std::size_t s = 0; s < wfa.alphabet().size(); ++s)
    t[wfa.alphabet().name(static_cast<Symbol>(s))] = detail::to_json(wfa.transitions()[s]);
  j["transitions"] = std::move(t);
  return j;
}

inline Wfa wfa_from_json(const Json& j) {
  Alphabet alphabet = detail::alphabet_from_json(detail::require_key(j, "alphabet"));
  Vector alpha = detail::vector_from_json(detail::require_key(j, "alpha"), "alpha");
  Vector beta = detail::vector_from_json(detail::require_key(j, "beta"), "beta");
  const Json& t = detail::require_key(j, "transitions");
  if (!t.is_object()) throw SchemaError("transitions: expected an object keyed by symbol");
  std::vector<Matrix> mats;
  for (const auto& name : alphabet.symbols()) {
    if (!t.contains(name)) throw SchemaError("transitions: missing matrix for symbol '" + name + "'");
    mats.push_back(detail::matrix_from_json(t.at(name), "transitions." + name));
  }
  if (t.size() != alphabet.size()) throw SchemaError("transitions: keys do not match the alphabet");
  try {
    return Wfa(std::move(alphabet), std::move(alpha), std::move(beta), std::move(mats));
  } catch (const DimensionError& e) {
    throw SchemaError(e.what());
  } catch (const NumericError& e) {
    throw SchemaError(e.what());
  }
}

inline std::string save(const Wfa& wfa) { return to_json(wfa).dump(2); }

inline Wfa load(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return wfa_from_json(j);
}

struct DotOptions {
  /// Transitions with |weight| <= this are not drawn.
  double weight_threshold = 0.0;
  /// Initial/final values with |value| >= this are flagged with an
  /// `underline` attribute listing them.
  double underline_threshold = 0.1;
};

/// Graphviz export. Nodes are labeled "q<i>/<initial>/<final>"; each drawn
/// edge is labeled "<symbol>, <weight>".
inline std::string export_dot(const Wfa& wfa, const DotOptions& opts = {}) {
  using detail::format_number;
  std::ostringstream os;
  os << "digraph wfa {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (std::size_t q = 0; q < wfa.n_states(); ++q) {
    const double a = wfa.alpha()[static_cast<Eigen::Index>(q)];
    const double b = wfa.beta()[static_cast<Eigen::Index>(q)];
    os << "  q" << q << " [label=\"q" << q << "/" << format_number(a) << "/" << format_number(b) << "\"";
    std::string marks;
    if (std::abs(a) >= opts.underline_threshold) marks = "initial";
    if (std::abs(b) >= opts.underline_threshold) marks += marks.empty() ? "final" : ",final";
    if (!marks.empty()) os << ", underline=\"" << marks << "\"";
    os << "];\n";
  }
  for (std::size_t s = 0; s < wfa.alphabet().size(); ++s) {
    const Matrix& m = wfa.transitions()[s];
    std::string label = wfa.alphabet().name(static_cast<Symbol>(s));
    // quote-escape symbol names such as '"'
    std::string escaped;
    for (char c : label) {
      if (c == '"' || c == '\\') escaped += '\\';
      escaped += c;
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index k = 0; k < m.cols(); ++k)
        if (std::abs(m(i, k)) > opts.weight_threshold)
          os << "  q" << i << " -> q" << k << " [label=\"" << escaped << ", " << format_number(m(i, k))
             << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace wfax
