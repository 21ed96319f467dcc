#pragma once

// Dense univariate polynomials over the complex numbers, coefficients stored
// in ascending powers. Root extraction goes through companion-matrix
// eigenvalues followed by a few Newton steps.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tto/errors.hpp"

namespace tto {

using cplx = std::complex<double>;

class Polynomial {
 public:
  Polynomial() : c_{cplx{0.0}} {}
  Polynomial(std::initializer_list<cplx> coeffs) : c_(coeffs) { normalize(); }
  explicit Polynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { normalize(); }

  static Polynomial constant(cplx c) { return Polynomial({c}); }
  static Polynomial monomial(std::size_t k, cplx c = 1.0) {
    std::vector<cplx> v(k + 1, cplx{0.0});
    v[k] = c;
    return Polynomial(std::move(v));
  }

  // prod (z - r) over the given roots
  static Polynomial from_roots(std::span<const cplx> roots) {
    Polynomial p = constant(1.0);
    for (const cplx& r : roots) p = p * Polynomial({-r, 1.0});
    return p;
  }

  std::size_t degree() const { return c_.size() - 1; }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx operator[](std::size_t k) const { return k < c_.size() ? c_[k] : cplx{0.0}; }
  cplx leading() const { return c_.back(); }
  bool is_zero() const { return c_.size() == 1 && c_[0] == cplx{0.0}; }

  cplx operator()(cplx z) const {
    cplx acc = c_.back();
    for (std::size_t k = c_.size() - 1; k-- > 0;) acc = acc * z + c_[k];
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() == 1) return Polynomial();
    std::vector<cplx> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
  }

  // Upper bound for |p^(k)(z)| on the closed disk.
  double derivative_scale(std::size_t k) const {
    double s = 0.0;
    for (std::size_t i = k; i < c_.size(); ++i) {
      double f = 1.0;
      for (std::size_t j = 0; j < k; ++j) f *= static_cast<double>(i - j);
      s += std::abs(c_[i]) * f;
    }
    return s;
  }

  double l1_norm() const {
    double s = 0.0;
    for (const cplx& v : c_) s += std::abs(v);
    return s;
  }

  // conj(p(conj(z))): conjugated coefficients
  Polynomial conjugate_coeffs() const {
    std::vector<cplx> v(c_);
    for (cplx& x : v) x = std::conj(x);
    return Polynomial(std::move(v));
  }

  // Drops trailing coefficients below rel_tol * max |coeff|.
  Polynomial trimmed(double rel_tol) const {
    double m = 0.0;
    for (const cplx& v : c_) m = std::max(m, std::abs(v));
    std::vector<cplx> v(c_);
    while (v.size() > 1 && std::abs(v.back()) <= rel_tol * m) v.pop_back();
    return Polynomial(std::move(v));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<cplx> v(std::max(a.c_.size(), b.c_.size()), cplx{0.0});
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] + b[k];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<cplx> v(std::max(a.c_.size(), b.c_.size()), cplx{0.0});
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] - b[k];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<cplx> v(a.c_.size() + b.c_.size() - 1, cplx{0.0});
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(cplx s, const Polynomial& p) {
    std::vector<cplx> v(p.c_);
    for (cplx& x : v) x *= s;
    return Polynomial(std::move(v));
  }

 private:
  void normalize() {
    if (c_.empty()) c_.push_back(cplx{0.0});
    while (c_.size() > 1 && c_.back() == cplx{0.0}) c_.pop_back();
  }

  std::vector<cplx> c_;
};

// All complex roots of p (degree >= 1), with multiplicity, via the
// eigenvalues of the companion matrix. Each root is refined by Newton steps.
inline std::vector<cplx> polynomial_roots(const Polynomial& p) {
  const std::size_t n = p.degree();
  if (n == 0) return {};
  const cplx lead = p.leading();
  if (lead == cplx{0.0}) throw root_finding_error("polynomial_roots: zero leading coefficient");

  std::vector<cplx> roots;
  roots.reserve(n);
  // Exact zero roots are split off so that z^m factors stay exact.
  std::size_t low = 0;
  while (low < n && p[low] == cplx{0.0}) ++low;
  for (std::size_t k = 0; k < low; ++k) roots.push_back(cplx{0.0});
  const std::size_t m = n - low;
  if (m == 0) return roots;

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(m),
                                                      static_cast<Eigen::Index>(m));
  for (std::size_t i = 1; i < m; ++i)
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < m; ++i)
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m - 1)) = -p[low + i] / lead;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
  if (es.info() != Eigen::Success) throw root_finding_error("polynomial_roots: eigen solver failed");

  const Polynomial dp = p.derivative();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    cplx r = es.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      const cplx d = dp(r);
      if (std::abs(d) < 1e-300) break;
      const cplx step = p(r) / d;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      // Newton is unreliable near multiple roots; only accept shrinking steps.
      const cplx cand = r - step;
      if (std::abs(p(cand)) <= std::abs(p(r))) r = cand; else break;
    }
    roots.push_back(r);
  }
  return roots;
}

}  // namespace tto
