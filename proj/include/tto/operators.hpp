#pragma once

// Operators on K_u as matrices in the Takenaka-Malmquist basis: compressed
// and modified compressed shifts, truncated Toeplitz operators, Sedlock
// classes, the Crofoot transform and the functional calculus of S_u^alpha
// for rational symbols.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tto/errors.hpp"
#include "tto/hardy.hpp"
#include "tto/inner.hpp"
#include "tto/modelspace.hpp"

namespace tto {

inline constexpr double kSingularCondition = 1e12;

// Matrix of a linear map K_{domain} -> K_{codomain}.
class OperatorMatrix {
 public:
  OperatorMatrix(Eigen::MatrixXcd m, BasisTag tag) : m_(std::move(m)), domain_(tag), codomain_(std::move(tag)) {
    check_shape();
  }
  OperatorMatrix(Eigen::MatrixXcd m, BasisTag domain, BasisTag codomain)
      : m_(std::move(m)), domain_(std::move(domain)), codomain_(std::move(codomain)) {
    check_shape();
  }

  static OperatorMatrix identity(const ModelSpaceBasis& B) {
    return {Eigen::MatrixXcd::Identity(B.dimension(), B.dimension()), B.tag()};
  }

  const Eigen::MatrixXcd& matrix() const { return m_; }
  const BasisTag& domain() const { return domain_; }
  const BasisTag& codomain() const { return codomain_; }
  Eigen::Index rows() const { return m_.rows(); }
  cplx operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  OperatorMatrix adjoint() const { return {m_.adjoint(), codomain_, domain_}; }

  KuVector apply(const KuVector& f) const { return {m_ * f.coeffs}; }

  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (!(a.domain_ == b.codomain_)) throw basis_mismatch_error("OperatorMatrix: composition across different bases");
    return {a.m_ * b.m_, b.domain_, a.codomain_};
  }
  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    a.check_same(b);
    return {a.m_ + b.m_, a.domain_, a.codomain_};
  }
  friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    a.check_same(b);
    return {a.m_ - b.m_, a.domain_, a.codomain_};
  }
  friend OperatorMatrix operator*(cplx s, const OperatorMatrix& a) { return {s * a.m_, a.domain_, a.codomain_}; }

 private:
  void check_shape() const {
    if (m_.rows() != static_cast<Eigen::Index>(codomain_.zero_order.size()) ||
        m_.cols() != static_cast<Eigen::Index>(domain_.zero_order.size()))
      throw basis_mismatch_error("OperatorMatrix: shape does not match basis dimension");
    if (!m_.allFinite()) throw numerical_error("OperatorMatrix: non-finite entry");
  }
  void check_same(const OperatorMatrix& o) const {
    if (!(domain_ == o.domain_) || !(codomain_ == o.codomain_))
      throw basis_mismatch_error("OperatorMatrix: sum across different bases");
  }

  Eigen::MatrixXcd m_;
  BasisTag domain_;
  BasisTag codomain_;
};

// Spectral norm.
inline double op_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}
inline double op_norm(const OperatorMatrix& m) { return op_norm(m.matrix()); }

inline double condition_number(const Eigen::MatrixXcd& m) {
  const auto s = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
  const double lo = s(s.size() - 1);
  return lo == 0.0 ? std::numeric_limits<double>::infinity() : s(0) / lo;
}

// Singular when the smallest singular value is below max(1, ||m||) / 1e12.
// The floor of 1 keeps tiny matrices (a 1x1 block holding 1e-17, say) from
// looking perfectly conditioned.
inline bool numerically_singular(const Eigen::MatrixXcd& m) {
  const auto s = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
  const double lo = s(s.size() - 1);
  return !(lo * kSingularCondition > std::max(1.0, s(0)));
}

inline Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return a * b - b * a; }

// alpha in C u {infinity}. Infinity is a separate state, never a large float.
class SedlockParameter {
 public:
  enum class Regime { inside, boundary, outside, infinity };

  static SedlockParameter finite(cplx a) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw invariant_error("SedlockParameter: non-finite value; use SedlockParameter::infinity()");
    return SedlockParameter(a, false);
  }
  static SedlockParameter infinity() { return SedlockParameter(0.0, true); }

  bool is_infinite() const { return inf_; }
  cplx value() const {
    if (inf_) throw invariant_error("SedlockParameter: infinity has no finite value");
    return a_;
  }

  Regime regime() const {
    if (inf_) return Regime::infinity;
    const double r = std::abs(a_);
    if (std::abs(r - 1.0) <= 1e-10) return Regime::boundary;
    return r < 1.0 ? Regime::inside : Regime::outside;
  }

  // 1 / conj(alpha), with 0 <-> infinity.
  SedlockParameter reflected() const {
    if (inf_) return finite(0.0);
    if (a_ == cplx{0.0}) return infinity();
    return finite(1.0 / std::conj(a_));
  }

  std::string to_string() const {
    if (inf_) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << a_.real() << "," << a_.imag();
    return os.str();
  }

  friend bool operator==(const SedlockParameter&, const SedlockParameter&) = default;

 private:
  SedlockParameter(cplx a, bool inf) : a_(a), inf_(inf) {}
  cplx a_;
  bool inf_;
};

// Entries <phi e_j, e_i> on the grid.
inline OperatorMatrix tto_matrix(const ModelSpaceBasis& B, const BoundaryFunction& phi) {
  if (!(phi.grid() == B.grid())) throw invariant_error("tto_matrix: grid mismatch");
  const auto& E = B.samples();
  const Eigen::MatrixXcd weighted = phi.values().asDiagonal() * E;
  return {E.adjoint() * weighted / static_cast<double>(B.grid().size()), B.tag()};
}

inline OperatorMatrix tto_matrix(const ModelSpaceBasis& B, const RationalSymbol& phi) {
  return tto_matrix(B, phi.sample(B.grid()));
}

inline OperatorMatrix compressed_shift(const ModelSpaceBasis& B) {
  return tto_matrix(B, RationalSymbol::identity());
}

// k_0 (x) C_u k_0, i.e. h -> <h, C_u k_0> k_0.
inline OperatorMatrix rank_one_direction(const ModelSpaceBasis& B) {
  const auto k0 = reproducing_kernel(B, 0.0);
  const auto ck0 = conjugate(B, k0);
  return {k0.coeffs * ck0.coeffs.adjoint(), B.tag()};
}

// S_u + alpha / (1 - alpha conj(u(0))) k_0 (x) C_u k_0
inline OperatorMatrix modified_shift(const ModelSpaceBasis& B, cplx alpha) {
  const cplx u0 = B.u()(0.0);
  const cplx den = 1.0 - alpha * std::conj(u0);
  if (std::abs(den) < 1e-14) throw degenerate_parameter_error("modified_shift: 1 - alpha conj(u(0)) vanishes");
  return compressed_shift(B) + (alpha / den) * rank_one_direction(B);
}

// The operator whose commutant is the Sedlock class of alpha:
// S_u^alpha for |alpha| <= 1, (S_u^{1/conj(alpha)})^* for |alpha| > 1,
// S_u^* for infinity.
inline OperatorMatrix class_shift(const ModelSpaceBasis& B, const SedlockParameter& alpha) {
  switch (alpha.regime()) {
    case SedlockParameter::Regime::inside:
    case SedlockParameter::Regime::boundary:
      return modified_shift(B, alpha.value());
    case SedlockParameter::Regime::outside:
      return modified_shift(B, 1.0 / std::conj(alpha.value())).adjoint();
    case SedlockParameter::Regime::infinity:
      break;
  }
  return compressed_shift(B).adjoint();
}

// TTO with symbol phi + alpha conj(S_u C_u phi) + c, phi in K_u.
inline OperatorMatrix sedlock_operator(const ModelSpaceBasis& B, const KuVector& phi, cplx alpha, cplx c) {
  const auto s = compressed_shift(B);
  const KuVector shifted_tilde = s.apply(conjugate(B, phi));
  const auto symbol = B.synthesize(phi) + alpha * B.synthesize(shifted_tilde).conj() + c;
  return tto_matrix(B, symbol);
}

// p(T) by Horner's rule.
inline Eigen::MatrixXcd evaluate_polynomial(const Polynomial& p, const Eigen::MatrixXcd& t) {
  const auto n = t.rows();
  const auto& c = p.coeffs();
  Eigen::MatrixXcd acc = c.back() * Eigen::MatrixXcd::Identity(n, n);
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    acc = acc * t;
    acc.diagonal().array() += c[k];
  }
  return acc;
}

struct CrofootTransform {
  ModelSpaceBasis shifted_basis;  // TM basis of u_alpha
  OperatorMatrix map;             // K_{u_alpha} -> K_u
};

// Multiplication by (1 - |alpha|^2)^{-1/2} (1 - conj(alpha) u), unitary from
// K_{u_alpha} onto K_u.
inline CrofootTransform crofoot(const ModelSpaceBasis& B, cplx alpha) {
  if (!(std::abs(alpha) < 1.0)) throw invariant_error("crofoot: requires |alpha| < 1");
  ModelSpaceBasis shifted(frostman_shift(B.u(), alpha), B.grid());
  const auto& grid = B.grid();
  const double scale = 1.0 / std::sqrt(1.0 - std::norm(alpha));
  Eigen::VectorXcd m(grid.size());
  for (int k = 0; k < grid.size(); ++k) m(k) = scale * (1.0 - std::conj(alpha) * B.u()(grid.point(k)));
  const Eigen::MatrixXcd images = m.asDiagonal() * shifted.samples();
  Eigen::MatrixXcd j = B.samples().adjoint() * images / static_cast<double>(grid.size());
  OperatorMatrix map(std::move(j), shifted.tag(), B.tag());
  return {std::move(shifted), std::move(map)};
}

namespace detail {

inline Eigen::MatrixXcd solve_checked(const Eigen::MatrixXcd& den, const Eigen::MatrixXcd& rhs, const char* what) {
  if (numerically_singular(den)) {
    const double cond = condition_number(den);
    std::ostringstream os;
    os << what << ": denominator operator is numerically singular (condition " << cond
       << "), the g.c.i.d. condition is violated";
    throw singular_denominator_error(os.str());
  }
  return den.fullPivLu().solve(rhs);
}

}  // namespace detail

// phi(S_u^alpha) = (den(S_u^alpha))^{-1} num(S_u^alpha) for rational phi in
// N+_{u_alpha}, |alpha| < 1.
inline OperatorMatrix quotient_operator(const ModelSpaceBasis& B, const RationalSymbol& phi, cplx alpha) {
  if (!(std::abs(alpha) < 1.0)) throw invariant_error("quotient_operator: requires |alpha| < 1");
  const auto reduced = phi.lowest_terms();
  const auto ua = frostman_shift(B.u(), alpha);
  if (!local_smirnov_check(reduced, ua))
    throw singular_denominator_error("quotient_operator: denominator shares an inner factor with u_alpha (g.c.i.d. violation)");
  const auto s = modified_shift(B, alpha).matrix();
  const Eigen::MatrixXcd num = evaluate_polynomial(reduced.numerator(), s);
  const Eigen::MatrixXcd den = evaluate_polynomial(reduced.denominator(), s);
  return {detail::solve_checked(den, num, "quotient_operator"), B.tag()};
}

// Same operator through the canonical pair: (A_{va/(1-alpha conj u)})^{-1} A_{b/(1-alpha conj u)}.
inline OperatorMatrix pair_quotient_operator(const ModelSpaceBasis& B, const LocalSmirnovForm& form, cplx alpha) {
  const auto weight = BoundaryFunction::sample(B.grid(), [&](cplx z) { return 1.0 / (1.0 - alpha * std::conj(B.u()(z))); });
  const auto va = sample_blaschke(form.v, B.grid()) * form.pair.a;
  const auto num = tto_matrix(B, form.pair.b * weight);
  const auto den = tto_matrix(B, va * weight);
  return {detail::solve_checked(den.matrix(), num.matrix(), "pair_quotient_operator"), B.tag()};
}

// |alpha| > 1 or infinity: the adjoint of the calculus at 1 / conj(alpha).
inline OperatorMatrix adjoint_class_operator(const ModelSpaceBasis& B, const RationalSymbol& phi,
                                             const SedlockParameter& alpha) {
  const auto r = alpha.regime();
  if (r != SedlockParameter::Regime::outside && r != SedlockParameter::Regime::infinity)
    throw invariant_error("adjoint_class_operator: requires |alpha| > 1 or alpha = infinity");
  return quotient_operator(B, phi, alpha.reflected().value()).adjoint();
}

struct SedlockClassification {
  enum class Kind { none, all, set };
  Kind kind = Kind::none;
  std::vector<SedlockParameter> alphas;

  bool contains(const SedlockParameter& a, double tol = 1e-8) const {
    if (kind == Kind::all) return true;
    for (const auto& x : alphas) {
      if (x.is_infinite() || a.is_infinite()) {
        if (x.is_infinite() && a.is_infinite()) return true;
        continue;
      }
      if (std::abs(x.value() - a.value()) <= tol * std::max(1.0, std::abs(a.value()))) return true;
    }
    return false;
  }
};

// Finds every alpha in C u {infinity} with A in the Sedlock class of alpha,
// by solving [A, S_u + t R] = 0 in the least-squares sense for t.
inline SedlockClassification sedlock_membership(const OperatorMatrix& A, const ModelSpaceBasis& B, double tol = 1e-8) {
  const Eigen::MatrixXcd& a = A.matrix();
  const auto n = a.rows();
  const double scale = std::max(1.0, a.norm());
  const cplx mean = a.trace() / static_cast<double>(n);
  if ((a - mean * Eigen::MatrixXcd::Identity(n, n)).norm() <= tol * scale)
    return {SedlockClassification::Kind::all, {}};

  const Eigen::MatrixXcd s = compressed_shift(B).matrix();
  const Eigen::MatrixXcd r = rank_one_direction(B).matrix();
  const cplx u0 = B.u()(0.0);
  const Eigen::MatrixXcd c0 = commutator(a, s);
  const Eigen::MatrixXcd c1 = commutator(a, r);

  SedlockClassification out;
  const double c1n = c1.norm();
  if (c1n > tol * scale) {
    const cplx t = -c0.cwiseProduct(c1.conjugate()).sum() / (c1n * c1n);
    if ((c0 + t * c1).norm() <= tol * scale) {
      const cplx den = 1.0 + t * std::conj(u0);
      if (std::abs(den) < 1e-12)
        out.alphas.push_back(SedlockParameter::infinity());
      else
        out.alphas.push_back(SedlockParameter::finite(t / den));
    }
  }
  const bool has_inf = std::any_of(out.alphas.begin(), out.alphas.end(), [](const auto& x) { return x.is_infinite(); });
  if (!has_inf && commutator(a, s.adjoint()).norm() <= tol * scale) out.alphas.push_back(SedlockParameter::infinity());
  out.kind = out.alphas.empty() ? SedlockClassification::Kind::none : SedlockClassification::Kind::set;
  return out;
}

// ||C_u A C_u - A^*||; every truncated Toeplitz operator is C_u-symmetric.
inline double c_symmetry_residual(const ModelSpaceBasis& B, const OperatorMatrix& A) {
  const Eigen::MatrixXcd k = conjugation_matrix(B);
  return op_norm(k * A.matrix().conjugate() * k.conjugate() - A.matrix().adjoint());
}

}  // namespace tto
