#pragma once

// Finite Blaschke products u(z) = c * prod ((z - a_j) / (1 - conj(a_j) z))^{m_j}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "tto/errors.hpp"
#include "tto/poly.hpp"

namespace tto {

inline constexpr double kZeroModulusLimit = 1.0 - 1e-12;
inline constexpr double kTolZero = 1e-8;  // hyperbolic matching tolerance
inline constexpr double kTolDiv = 1e-8;
// Root finders split an m-fold root into a cluster of radius ~eps^{1/m};
// clusters are merged at this pseudo-hyperbolic radius.
inline constexpr double kRootClusterRadius = 1e-6;

// Pseudo-hyperbolic distance |a - b| / |1 - conj(a) b| on the disk.
inline double pseudo_hyperbolic(cplx a, cplx b) {
  return std::abs(a - b) / std::abs(1.0 - std::conj(a) * b);
}

struct BlaschkeZero {
  cplx point;
  int multiplicity = 1;
};

class BlaschkeProduct {
 public:
  // Degree-zero unit (the constant 1).
  BlaschkeProduct() = default;

  explicit BlaschkeProduct(std::vector<BlaschkeZero> zeros, cplx constant = 1.0)
      : zeros_(std::move(zeros)), constant_(constant) {
    for (const auto& z : zeros_) {
      if (z.multiplicity < 1) throw invariant_error("BlaschkeProduct: multiplicity must be >= 1");
      if (!(std::abs(z.point) < kZeroModulusLimit)) {
        std::ostringstream os;
        os << "BlaschkeProduct: zero " << z.point << " has modulus " << std::abs(z.point)
           << " >= 1 - 1e-12";
        throw invariant_error(os.str());
      }
    }
    if (!(std::abs(std::abs(constant_) - 1.0) <= 1e-12))
      throw invariant_error("BlaschkeProduct: constant must be unimodular");
  }

  // Product with simple zeros listed in order (repeats allowed).
  static BlaschkeProduct from_points(const std::vector<cplx>& points, cplx constant = 1.0) {
    std::vector<BlaschkeZero> z;
    z.reserve(points.size());
    for (const cplx& p : points) z.push_back({p, 1});
    return BlaschkeProduct(std::move(z), constant);
  }

  static BlaschkeProduct monomial(int n) {
    if (n == 0) return {};
    return BlaschkeProduct({{cplx{0.0}, n}});
  }

  const std::vector<BlaschkeZero>& zeros() const { return zeros_; }
  cplx constant() const { return constant_; }

  int degree() const {
    int d = 0;
    for (const auto& z : zeros_) d += z.multiplicity;
    return d;
  }

  // Zero list with multiplicities expanded, input order preserved.
  std::vector<cplx> expanded_zeros() const {
    std::vector<cplx> out;
    for (const auto& z : zeros_)
      for (int k = 0; k < z.multiplicity; ++k) out.push_back(z.point);
    return out;
  }

  // Zeros merged at tol_zero so that every point appears once.
  std::vector<BlaschkeZero> grouped_zeros() const {
    std::vector<BlaschkeZero> out;
    for (const auto& z : zeros_) {
      auto it = std::find_if(out.begin(), out.end(), [&](const BlaschkeZero& g) {
        return pseudo_hyperbolic(g.point, z.point) < kTolZero;
      });
      if (it == out.end()) out.push_back(z); else it->multiplicity += z.multiplicity;
    }
    return out;
  }

  cplx operator()(cplx z) const {
    cplx v = constant_;
    for (const auto& zr : zeros_) {
      const cplx den = 1.0 - std::conj(zr.point) * z;
      if (std::abs(den) < 1e-14) {
        std::ostringstream os;
        os << "eval_blaschke: " << z << " is within 1e-14 of the pole " << 1.0 / std::conj(zr.point);
        throw pole_proximity_error(os.str());
      }
      const cplx f = (z - zr.point) / den;
      for (int k = 0; k < zr.multiplicity; ++k) v *= f;
    }
    return v;
  }

  // p with u = p / q: p = c * prod (z - a_j)^{m_j}
  Polynomial numerator_polynomial() const {
    auto pts = expanded_zeros();
    return constant_ * Polynomial::from_roots(pts);
  }

  // q with u = p / q: q = prod (1 - conj(a_j) z)^{m_j}
  Polynomial denominator_polynomial() const {
    Polynomial q = Polynomial::constant(1.0);
    for (const cplx& a : expanded_zeros()) q = q * Polynomial({1.0, -std::conj(a)});
    return q;
  }

  // |u'(zeta)| for |zeta| = 1, equal to sum m_j (1 - |a_j|^2) / |zeta - a_j|^2.
  double boundary_derivative_modulus(cplx zeta) const {
    double s = 0.0;
    for (const auto& z : zeros_)
      s += z.multiplicity * (1.0 - std::norm(z.point)) / std::norm(zeta - z.point);
    return s;
  }

  friend BlaschkeProduct operator*(const BlaschkeProduct& a, const BlaschkeProduct& b) {
    std::vector<BlaschkeZero> z(a.zeros_);
    z.insert(z.end(), b.zeros_.begin(), b.zeros_.end());
    cplx c = a.constant_ * b.constant_;
    c /= std::abs(c);
    return BlaschkeProduct(std::move(z), c);
  }

 private:
  std::vector<BlaschkeZero> zeros_;
  cplx constant_{1.0};
};

inline cplx eval_blaschke(const BlaschkeProduct& u, cplx z) { return u(z); }

namespace detail {

// Single-linkage clustering of root-finder output into zeros with
// multiplicities; each cluster is replaced by its centroid.
inline std::vector<BlaschkeZero> cluster_roots(const std::vector<cplx>& roots, double radius) {
  const std::size_t n = roots.size();
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = i;
  auto find = [&](std::size_t i) {
    while (label[i] != i) i = label[i] = label[label[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (pseudo_hyperbolic(roots[i], roots[j]) < radius) label[find(j)] = find(i);

  std::vector<BlaschkeZero> out;
  std::vector<std::size_t> rep;
  std::vector<cplx> sum;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    auto it = std::find(rep.begin(), rep.end(), r);
    if (it == rep.end()) {
      rep.push_back(r);
      sum.push_back(roots[i]);
      out.push_back({roots[i], 1});
    } else {
      const auto k = static_cast<std::size_t>(it - rep.begin());
      sum[k] += roots[i];
      out[k].multiplicity += 1;
    }
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k].point = sum[k] / static_cast<double>(out[k].multiplicity);
  return out;
}

inline void sort_zeros(std::vector<BlaschkeZero>& z) {
  auto key = [](cplx p) {
    double t = std::arg(p);
    if (t < 0) t += 2.0 * std::numbers::pi;
    return std::pair{std::abs(p) < 1e-15 ? -1.0 : t, std::abs(p)};
  };
  std::stable_sort(z.begin(), z.end(),
                   [&](const BlaschkeZero& a, const BlaschkeZero& b) { return key(a.point) < key(b.point); });
}

}  // namespace detail

// u_alpha = (u - alpha) / (1 - conj(alpha) u), |alpha| < 1, as a Blaschke
// product whose constant makes it equal to that function on the circle.
inline BlaschkeProduct frostman_shift(const BlaschkeProduct& u, cplx alpha) {
  if (!(std::abs(alpha) < 1.0)) throw invariant_error("frostman_shift: requires |alpha| < 1");
  if (alpha == cplx{0.0}) return u;
  if (u.degree() == 0) throw invariant_error("frostman_shift: u must be non-constant");

  const Polynomial target = u.numerator_polynomial() - alpha * u.denominator_polynomial();
  const auto roots = polynomial_roots(target);
  for (const cplx& r : roots)
    if (!(std::abs(r) < 1.0 - 1e-10)) {
      std::ostringstream os;
      os << "frostman_shift: computed zero " << r << " is not inside the disk";
      throw root_finding_error(os.str());
    }
  auto zeros = detail::cluster_roots(roots, kRootClusterRadius);
  detail::sort_zeros(zeros);

  auto shifted = [&](cplx z) {
    const cplx uz = u(z);
    return (uz - alpha) / (1.0 - std::conj(alpha) * uz);
  };
  const BlaschkeProduct bare(zeros);
  const cplx z0 = std::polar(1.0, 0.3141592653589793);
  cplx c = shifted(z0) / bare(z0);
  c /= std::abs(c);
  BlaschkeProduct out(std::move(zeros), c);

  constexpr int kChecks = 64;
  for (int k = 0; k < kChecks; ++k) {
    const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / kChecks);
    if (std::abs(out(z) - shifted(z)) > 1e-9)
      throw root_finding_error("frostman_shift: boundary verification failed");
  }
  return out;
}

// Greatest common inner divisor: shared zeros with minimum multiplicity.
inline BlaschkeProduct gcid(const BlaschkeProduct& u1, const BlaschkeProduct& u2) {
  const auto g1 = u1.grouped_zeros();
  const auto g2 = u2.grouped_zeros();
  std::vector<BlaschkeZero> common;
  for (const auto& a : g1) {
    for (const auto& b : g2) {
      if (pseudo_hyperbolic(a.point, b.point) < kTolZero) {
        common.push_back({a.point, std::min(a.multiplicity, b.multiplicity)});
        break;
      }
    }
  }
  return BlaschkeProduct(std::move(common));
}

// True iff u1 divides the polynomial f: f^(k)(a) = 0 for k < m at every
// zero a of multiplicity m, relative to a derivative scale bound for f.
inline bool divides(const BlaschkeProduct& u1, const Polynomial& f, double tol = kTolDiv) {
  if (f.is_zero()) return true;
  for (const auto& z : u1.grouped_zeros()) {
    Polynomial d = f;
    for (int k = 0; k < z.multiplicity; ++k) {
      const double scale = f.derivative_scale(static_cast<std::size_t>(k));
      if (scale > 0.0 && std::abs(d(z.point)) > tol * scale) return false;
      d = d.derivative();
    }
  }
  return true;
}

}  // namespace tto
