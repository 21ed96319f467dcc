#pragma once

// JSON encodings. Complex numbers are [re, im]; matrices are row-major
// arrays of rows and carry the basis they are written in.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "tto/clark.hpp"
#include "tto/errors.hpp"
#include "tto/hardy.hpp"
#include "tto/inner.hpp"
#include "tto/modelspace.hpp"
#include "tto/operators.hpp"

namespace tto {

using json = nlohmann::ordered_json;

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw invariant_error("expected a complex number [re, im], got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const std::vector<cplx>& v) {
  json out = json::array();
  for (const cplx& z : v) out.push_back(to_json(z));
  return out;
}

inline json to_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(to_json(v(k)));
  return out;
}

inline json to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_array()) throw invariant_error("matrix: expected an array of rows");
  const auto r = static_cast<Eigen::Index>(j.size());
  const auto c = r == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXcd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) throw invariant_error("matrix: ragged rows");
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

inline json to_json(const BlaschkeProduct& u) {
  json zeros = json::array();
  for (const auto& z : u.zeros()) zeros.push_back(json::array({z.point.real(), z.point.imag(), z.multiplicity}));
  return {{"zeros", std::move(zeros)}, {"constant", to_json(u.constant())}};
}

inline BlaschkeProduct blaschke_from_json(const json& j) {
  if (!j.is_object()) throw invariant_error("u: expected an object with \"zeros\" and optional \"constant\"");
  for (const auto& [key, _] : j.items())
    if (key != "zeros" && key != "constant") throw invariant_error("u: unknown key \"" + key + "\"");
  std::vector<BlaschkeZero> zeros;
  if (j.contains("zeros")) {
    for (const auto& z : j.at("zeros")) {
      if (!z.is_array() || z.size() < 2 || z.size() > 3) throw invariant_error("u.zeros: entries are [re, im] or [re, im, mult]");
      const int mult = z.size() == 3 ? z[2].get<int>() : 1;
      zeros.push_back({{z[0].get<double>(), z[1].get<double>()}, mult});
    }
  }
  const cplx c = j.contains("constant") ? complex_from_json(j.at("constant")) : cplx{1.0};
  return BlaschkeProduct(std::move(zeros), c);
}

inline json to_json(const Polynomial& p) {
  json out = json::array();
  for (const cplx& c : p.coeffs()) out.push_back(to_json(c));
  return out;
}

inline Polynomial polynomial_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw invariant_error("polynomial: expected a non-empty coefficient array");
  std::vector<cplx> c;
  for (const auto& x : j) c.push_back(complex_from_json(x));
  return Polynomial(std::move(c));
}

inline json to_json(const RationalSymbol& s) {
  return {{"numerator", to_json(s.numerator())}, {"denominator", to_json(s.denominator())}};
}

inline RationalSymbol symbol_from_json(const json& j) {
  if (!j.is_object() || !j.contains("numerator"))
    throw invariant_error("symbol: expected {\"numerator\": [...], \"denominator\": [...]}");
  for (const auto& [key, _] : j.items())
    if (key != "numerator" && key != "denominator") throw invariant_error("symbol: unknown key \"" + key + "\"");
  const Polynomial num = polynomial_from_json(j.at("numerator"));
  if (!j.contains("denominator")) return RationalSymbol(num);
  return RationalSymbol(num, polynomial_from_json(j.at("denominator")));
}

inline json to_json(const BoundaryFunction& f) { return {{"N", f.size()}, {"values", to_json(f.values())}}; }

inline json to_json(const BasisTag& t) { return {{"zero_order", to_json(t.zero_order)}, {"grid", t.grid}}; }

inline json to_json(const OperatorMatrix& m) {
  json out{{"rows", m.rows()}, {"cols", m.matrix().cols()}};
  if (m.domain() == m.codomain()) {
    out["basis"] = to_json(m.domain());
  } else {
    out["domain"] = to_json(m.domain());
    out["codomain"] = to_json(m.codomain());
  }
  out["entries"] = to_json(m.matrix());
  return out;
}

inline json to_json(const ClarkMeasure& mu) {
  json w = json::array();
  for (double x : mu.weights) w.push_back(x);
  return {{"alpha", to_json(mu.alpha)}, {"atoms", to_json(mu.atoms)}, {"weights", std::move(w)}};
}

inline json to_json(const SedlockParameter& a) {
  if (a.is_infinite()) return "inf";
  return to_json(a.value());
}

}  // namespace tto
