#pragma once

// Hardy-space calculus on a uniform grid of the unit circle: Fourier
// coefficients by FFT, Riesz projection, Szego (outer) factorization,
// canonical Smirnov pairs and inner-outer splitting of rational symbols.

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "tto/errors.hpp"
#include "tto/inner.hpp"
#include "tto/poly.hpp"

namespace tto {

inline constexpr int kDefaultGridSize = 1024;

class BoundaryGrid {
 public:
  explicit BoundaryGrid(int n = kDefaultGridSize) : n_(n) {
    if (n_ < 256 || (n_ & (n_ - 1)) != 0)
      throw invariant_error("BoundaryGrid: size must be a power of two >= 256");
  }

  // Checks N >= 4 * degree + 64 for a Blaschke product in play.
  void require_resolves(int degree) const {
    if (n_ < 4 * degree + 64) {
      std::ostringstream os;
      os << "BoundaryGrid: N = " << n_ << " too small for degree " << degree;
      throw invariant_error(os.str());
    }
  }

  int size() const { return n_; }
  cplx point(int k) const { return std::polar(1.0, 2.0 * std::numbers::pi * k / n_); }

  Eigen::VectorXcd points() const {
    Eigen::VectorXcd z(n_);
    for (int k = 0; k < n_; ++k) z(k) = point(k);
    return z;
  }

  friend bool operator==(const BoundaryGrid&, const BoundaryGrid&) = default;

 private:
  int n_;
};

// Samples of a function on the circle at e^{2 pi i k / N}.
class BoundaryFunction {
 public:
  BoundaryFunction(BoundaryGrid grid, Eigen::VectorXcd values) : grid_(grid), v_(std::move(values)) {
    if (v_.size() != grid_.size()) throw invariant_error("BoundaryFunction: sample count must equal N");
    if (!v_.allFinite()) throw invariant_error("BoundaryFunction: non-finite sample");
  }

  template <class F>
  static BoundaryFunction sample(BoundaryGrid grid, F&& f) {
    Eigen::VectorXcd v(grid.size());
    for (int k = 0; k < grid.size(); ++k) v(k) = f(grid.point(k));
    return {grid, std::move(v)};
  }

  static BoundaryFunction constant(BoundaryGrid grid, cplx c) {
    return {grid, Eigen::VectorXcd::Constant(grid.size(), c)};
  }

  const BoundaryGrid& grid() const { return grid_; }
  const Eigen::VectorXcd& values() const { return v_; }
  int size() const { return grid_.size(); }

  BoundaryFunction conj() const { return {grid_, v_.conjugate()}; }

  friend BoundaryFunction operator*(const BoundaryFunction& a, const BoundaryFunction& b) {
    check_same(a, b);
    return {a.grid_, a.v_.cwiseProduct(b.v_)};
  }
  friend BoundaryFunction operator/(const BoundaryFunction& a, const BoundaryFunction& b) {
    check_same(a, b);
    return {a.grid_, a.v_.cwiseQuotient(b.v_)};
  }
  friend BoundaryFunction operator+(const BoundaryFunction& a, const BoundaryFunction& b) {
    check_same(a, b);
    return {a.grid_, a.v_ + b.v_};
  }
  friend BoundaryFunction operator-(const BoundaryFunction& a, const BoundaryFunction& b) {
    check_same(a, b);
    return {a.grid_, a.v_ - b.v_};
  }
  friend BoundaryFunction operator*(cplx s, const BoundaryFunction& a) { return {a.grid_, s * a.v_}; }
  friend BoundaryFunction operator+(const BoundaryFunction& a, cplx s) {
    return {a.grid_, (a.v_.array() + s).matrix()};
  }

 private:
  static void check_same(const BoundaryFunction& a, const BoundaryFunction& b) {
    if (!(a.grid_ == b.grid_)) throw invariant_error("BoundaryFunction: grid mismatch");
  }

  BoundaryGrid grid_;
  Eigen::VectorXcd v_;
};

// <f, g> = (1/N) sum f conj(g)
inline cplx grid_inner(const BoundaryFunction& f, const BoundaryFunction& g) {
  return g.values().dot(f.values()) / static_cast<double>(f.size());
}

inline double grid_norm(const BoundaryFunction& f) {
  return f.values().norm() / std::sqrt(static_cast<double>(f.size()));
}

// c_k with f = sum c_k z^k; index k >= N/2 holds frequency k - N.
inline Eigen::VectorXcd fourier_coefficients(const BoundaryFunction& f) {
  Eigen::FFT<double> fft;
  std::vector<cplx> in(f.values().data(), f.values().data() + f.size());
  std::vector<cplx> out;
  fft.fwd(out, in);
  Eigen::VectorXcd c(f.size());
  for (int k = 0; k < f.size(); ++k) c(k) = out[static_cast<std::size_t>(k)] / static_cast<double>(f.size());
  return c;
}

inline BoundaryFunction from_fourier_coefficients(BoundaryGrid grid, const Eigen::VectorXcd& c) {
  Eigen::FFT<double> fft;
  std::vector<cplx> in(static_cast<std::size_t>(grid.size()));
  for (int k = 0; k < grid.size(); ++k) in[static_cast<std::size_t>(k)] = c(k) * static_cast<double>(grid.size());
  std::vector<cplx> out;
  fft.inv(out, in);
  return {grid, Eigen::Map<const Eigen::VectorXcd>(out.data(), grid.size())};
}

// Relative l2 size of the negative-frequency part.
inline double negative_content(const BoundaryFunction& f) {
  const auto c = fourier_coefficients(f);
  const int n = f.size();
  const double total = c.norm();
  if (total == 0.0) return 0.0;
  return c.segment(n / 2, n / 2).norm() / total;
}

// Orthogonal projection onto H^2: negative frequencies (and the Nyquist
// bin) are dropped.
inline BoundaryFunction riesz_project(const BoundaryFunction& f) {
  auto c = fourier_coefficients(f);
  const int n = f.size();
  c.segment(n / 2, n / 2).setZero();
  return from_fourier_coefficients(f.grid(), c);
}

// Outer function O with |O| = w on the circle and O(0) > 0:
// O = exp(c_0 + 2 sum_{k>0} c_k z^k), c_k the Fourier coefficients of log w.
inline BoundaryFunction outer_from_modulus(const BoundaryFunction& w) {
  const int n = w.size();
  Eigen::VectorXcd logw(n);
  for (int k = 0; k < n; ++k) {
    const double r = w.values()(k).real();
    if (!(r > 1e-10) || std::abs(w.values()(k).imag()) > 1e-12 * std::max(1.0, r))
      throw positivity_error("outer_from_modulus: modulus must be real and > 1e-10");
    logw(k) = std::log(r);
  }
  auto c = fourier_coefficients({w.grid(), logw});
  c(0) = c(0).real();
  for (int k = 1; k < n / 2; ++k) c(k) *= 2.0;
  c.segment(n / 2, n / 2).setZero();
  auto h = from_fourier_coefficients(w.grid(), c);
  Eigen::VectorXcd o = h.values().array().exp().matrix();
  return {w.grid(), std::move(o)};
}

// Value at 0 of an analytic grid function (its mean).
inline cplx value_at_origin(const BoundaryFunction& f) { return f.values().mean(); }

// phi = numerator / denominator, coefficients in ascending powers.
class RationalSymbol {
 public:
  RationalSymbol() : num_(Polynomial::constant(0.0)), den_(Polynomial::constant(1.0)) {}

  RationalSymbol(Polynomial numerator, Polynomial denominator = Polynomial::constant(1.0))
      : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (den_.is_zero()) throw invariant_error("RationalSymbol: zero denominator");
    for (const cplx& r : polynomial_roots(den_))
      if (std::abs(std::abs(r) - 1.0) <= 1e-8)
        throw invariant_error("RationalSymbol: denominator has a root on the unit circle");
  }

  static RationalSymbol constant(cplx c) { return RationalSymbol(Polynomial::constant(c)); }
  static RationalSymbol identity() { return RationalSymbol(Polynomial({0.0, 1.0})); }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  bool is_zero() const { return num_.trimmed(1e-15).is_zero(); }

  cplx operator()(cplx z) const { return num_(z) / den_(z); }

  BoundaryFunction sample(BoundaryGrid grid) const {
    return BoundaryFunction::sample(grid, [this](cplx z) { return (*this)(z); });
  }

  // Cancels numerator/denominator roots that agree within tol.
  RationalSymbol lowest_terms(double tol = 1e-8) const {
    if (num_.degree() == 0 || den_.degree() == 0) return *this;
    auto nr = polynomial_roots(num_);
    auto dr = polynomial_roots(den_);
    bool any = false;
    for (auto it = dr.begin(); it != dr.end();) {
      auto m = std::find_if(nr.begin(), nr.end(), [&](cplx r) { return std::abs(r - *it) < tol; });
      if (m != nr.end()) {
        nr.erase(m);
        it = dr.erase(it);
        any = true;
      } else {
        ++it;
      }
    }
    if (!any) return *this;
    return {num_.leading() * Polynomial::from_roots(nr), den_.leading() * Polynomial::from_roots(dr)};
  }

  // Roots of the denominator inside the open disk.
  std::vector<cplx> interior_poles() const {
    std::vector<cplx> out;
    if (den_.degree() == 0) return out;
    for (const cplx& r : polynomial_roots(den_))
      if (std::abs(r) < 1.0) out.push_back(r);
    return out;
  }

  bool analytic_on_closed_disk() const { return interior_poles().empty(); }

  friend RationalSymbol operator*(const RationalSymbol& a, const RationalSymbol& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  friend RationalSymbol operator+(const RationalSymbol& a, const RationalSymbol& b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RationalSymbol operator-(const RationalSymbol& a, const RationalSymbol& b) {
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
  }

 private:
  Polynomial num_;
  Polynomial den_;
};

// u = p / q as a rational symbol.
inline RationalSymbol as_rational(const BlaschkeProduct& u) {
  return {u.numerator_polynomial(), u.denominator_polynomial()};
}

inline BoundaryFunction sample_blaschke(const BlaschkeProduct& u, BoundaryGrid grid) {
  return BoundaryFunction::sample(grid, [&u](cplx z) { return u(z); });
}

namespace detail {

// Replaces each factor (z - a), |a| < 1, by (1 - conj(a) z); the quotient
// old/new is the Blaschke factor at a.
inline Polynomial reflect_roots(const Polynomial& p, const std::vector<cplx>& inside,
                                const std::vector<cplx>& outside) {
  Polynomial out = Polynomial::constant(p.leading());
  for (const cplx& a : inside) out = out * Polynomial({1.0, -std::conj(a)});
  for (const cplx& r : outside) out = out * Polynomial({-r, 1.0});
  return out;
}

inline std::pair<std::vector<cplx>, std::vector<cplx>> split_roots(const Polynomial& p) {
  std::vector<cplx> in, out;
  if (p.degree() == 0) return {in, out};
  for (const cplx& r : polynomial_roots(p)) (std::abs(r) < 1.0 ? in : out).push_back(r);
  return {in, out};
}

}  // namespace detail

// f = inner * outer, inner the Blaschke product over numerator roots in the
// open disk.
inline std::pair<BlaschkeProduct, RationalSymbol> inner_outer_split(const RationalSymbol& f) {
  if (f.is_zero()) throw degenerate_input_error("inner_outer_split: symbol is identically zero");
  const auto [in, out] = detail::split_roots(f.numerator());
  for (const cplx& r : out)
    if (std::abs(std::abs(r) - 1.0) <= 1e-8)
      throw degenerate_input_error("inner_outer_split: numerator root on the unit circle");
  const BlaschkeProduct inner = BlaschkeProduct::from_points(in);
  return {inner, RationalSymbol(detail::reflect_roots(f.numerator(), in, out), f.denominator())};
}

struct SmirnovPair {
  BoundaryFunction a;  // outer, a(0) = a0 > 0
  BoundaryFunction b;
  double a0 = 0.0;
};

// phi = b / (v a) with v inner (interior poles of phi) and (a, b) the
// canonical pair of v * phi.
struct LocalSmirnovForm {
  BlaschkeProduct v;
  RationalSymbol analytic_part;  // v * phi, analytic on the closed disk
  SmirnovPair pair;
};

namespace detail {

inline void certify_pair(const SmirnovPair& p) {
  const Eigen::ArrayXd s = p.a.values().array().abs2() + p.b.values().array().abs2();
  if ((s - 1.0).abs().maxCoeff() > 1e-8)
    throw numerical_error("canonical_pair: |a|^2 + |b|^2 = 1 violated");
  const double mean_log = p.a.values().array().abs().log().mean();
  if (std::abs(std::log(p.a0) - mean_log) > 1e-7)
    throw numerical_error("canonical_pair: Jensen equality for outer a violated");
}

inline SmirnovPair pair_from_modulus(const RationalSymbol& analytic, BoundaryGrid grid) {
  const auto phi = analytic.sample(grid);
  Eigen::VectorXcd w(grid.size());
  for (int k = 0; k < grid.size(); ++k) w(k) = 1.0 / std::sqrt(1.0 + std::norm(phi.values()(k)));
  auto a = outer_from_modulus({grid, std::move(w)});
  auto b = phi * a;
  const double a0 = value_at_origin(a).real();
  SmirnovPair p{std::move(a), std::move(b), a0};
  certify_pair(p);
  return p;
}

}  // namespace detail

// Canonical pair for phi in the Smirnov class (no poles in the closed disk).
inline SmirnovPair canonical_pair(const RationalSymbol& phi, BoundaryGrid grid = BoundaryGrid{}) {
  if (!phi.lowest_terms().analytic_on_closed_disk())
    throw precondition_error("canonical_pair: symbol has poles in the disk (not in N+)");
  return detail::pair_from_modulus(phi, grid);
}

inline LocalSmirnovForm smirnov_representation(const RationalSymbol& phi, BoundaryGrid grid = BoundaryGrid{}) {
  const auto reduced = phi.lowest_terms();
  const auto [in, out] = detail::split_roots(reduced.denominator());
  BlaschkeProduct v = BlaschkeProduct::from_points(in);
  RationalSymbol analytic(reduced.numerator(), detail::reflect_roots(reduced.denominator(), in, out));
  auto pair = detail::pair_from_modulus(analytic, grid);
  return {std::move(v), std::move(analytic), std::move(pair)};
}

// phi is in N+_u: the inner part of its reduced denominator is coprime to u.
inline bool local_smirnov_check(const RationalSymbol& phi, const BlaschkeProduct& u) {
  const auto reduced = phi.lowest_terms();
  const auto v = BlaschkeProduct::from_points(reduced.interior_poles());
  return gcid(u, v).degree() == 0;
}

// u divides f for f analytic on the closed disk.
inline bool divides(const BlaschkeProduct& u, const RationalSymbol& f, double tol = kTolDiv) {
  const auto reduced = f.lowest_terms();
  for (const cplx& r : polynomial_roots(reduced.denominator()))
    if (std::abs(r) <= 1.0 + 1e-8) throw precondition_error("divides: symbol has a pole in the closed disk");
  return divides(u, reduced.numerator(), tol);
}

}  // namespace tto
