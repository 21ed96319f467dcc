#pragma once

// Clark measures of a finite Blaschke product, the normalized Cauchy
// transform V_alpha from L^2(mu_alpha) onto K_u, and the functional calculus
// Phi(S_u^alpha) = V_alpha M_Phi V_alpha^{-1} for unimodular alpha.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tto/errors.hpp"
#include "tto/inner.hpp"
#include "tto/modelspace.hpp"
#include "tto/operators.hpp"

namespace tto {

inline constexpr double kTolInv = 1e-10;
inline constexpr double kAtomSeparation = 1e-8;

struct ClarkMeasure {
  cplx alpha;
  std::vector<cplx> atoms;  // sorted by angle in [0, 2 pi)
  std::vector<double> weights;

  std::size_t size() const { return atoms.size(); }
  double total_mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

// A function on the atoms of a Clark measure, i.e. an element of L^2(mu).
struct AtomFunction {
  Eigen::VectorXcd values;

  static AtomFunction constant(std::size_t m, cplx c) {
    return {Eigen::VectorXcd::Constant(static_cast<Eigen::Index>(m), c)};
  }
  static AtomFunction identity(const ClarkMeasure& mu) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(mu.size()));
    for (std::size_t j = 0; j < mu.size(); ++j) v(static_cast<Eigen::Index>(j)) = mu.atoms[j];
    return {v};
  }
  bool is_real(double tol = 1e-12) const { return values.imag().cwiseAbs().maxCoeff() <= tol; }
};

inline bool is_unimodular(cplx a) { return std::abs(std::abs(a) - 1.0) <= 1e-10; }

// Re((1 + conj(alpha) u(z)) / (1 - conj(alpha) u(z))) minus the Poisson
// integral of mu at z.
inline double herglotz_residual(const BlaschkeProduct& u, const ClarkMeasure& mu, cplx z) {
  const cplx uz = std::conj(mu.alpha) * u(z);
  const double lhs = ((1.0 + uz) / (1.0 - uz)).real();
  double rhs = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) rhs += mu.weights[j] * ((mu.atoms[j] + z) / (mu.atoms[j] - z)).real();
  return std::abs(lhs - rhs);
}

// Fixed spiral of interior points used to certify the Herglotz identity.
inline std::vector<cplx> herglotz_test_points(int count = 32) {
  std::vector<cplx> pts;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) pts.push_back(std::polar(0.9 * std::sqrt((k + 0.5) / count), golden * k));
  return pts;
}

// Atoms are the solutions of u(zeta) = alpha on the circle, weights
// 1 / |u'(zeta)|; the Herglotz identity is asserted before returning.
inline ClarkMeasure clark_measure(const BlaschkeProduct& u, cplx alpha) {
  if (!is_unimodular(alpha)) throw invariant_error("clark_measure: requires |alpha| = 1");
  if (u.degree() == 0) throw invariant_error("clark_measure: u must be non-constant");
  alpha /= std::abs(alpha);

  const Polynomial target = u.numerator_polynomial() - alpha * u.denominator_polynomial();
  auto roots = polynomial_roots(target);
  if (static_cast<int>(roots.size()) != u.degree())
    throw root_finding_error("clark_measure: wrong number of boundary solutions");

  std::vector<double> angles;
  for (const cplx& r : roots) {
    if (std::abs(std::abs(r) - 1.0) > 1e-4) {
      std::ostringstream os;
      os << "clark_measure: solution " << r << " of u = alpha is off the circle";
      throw root_finding_error(os.str());
    }
    // Newton on theta for arg(u(e^{i theta}) / alpha) = 0; the derivative of
    // arg u along the circle is |u'|.
    double t = std::arg(r);
    for (int it = 0; it < 8; ++it) {
      const cplx z = std::polar(1.0, t);
      const double step = std::arg(u(z) / alpha) / u.boundary_derivative_modulus(z);
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    t = std::fmod(t, 2.0 * std::numbers::pi);
    if (t < 0) t += 2.0 * std::numbers::pi;
    angles.push_back(t);
  }
  std::sort(angles.begin(), angles.end());

  ClarkMeasure mu{alpha, {}, {}};
  for (double t : angles) {
    const cplx z = std::polar(1.0, t);
    mu.atoms.push_back(z);
    mu.weights.push_back(1.0 / u.boundary_derivative_modulus(z));
  }
  for (std::size_t j = 0; j < mu.size(); ++j) {
    const cplx next = mu.atoms[(j + 1) % mu.size()];
    if (mu.size() > 1 && std::abs(mu.atoms[j] - next) < kAtomSeparation) {
      std::ostringstream os;
      os << "clark_measure: atoms " << mu.atoms[j] << " and " << next
         << " coincide; alpha is an exceptional (multiple-root) parameter";
      throw multiple_root_error(os.str());
    }
  }
  for (const cplx& z : herglotz_test_points())
    if (herglotz_residual(u, mu, z) > 1e-7)
      throw numerical_error("clark_measure: Herglotz identity certification failed");
  return mu;
}

inline ClarkMeasure clark_measure(const ModelSpaceBasis& B, cplx alpha) { return clark_measure(B.u(), alpha); }

// (alpha - u(0)) / (1 - alpha conj(u(0))), the unitary index attached to
// mu_alpha in Clark's parametrization.
inline cplx clark_beta(const BlaschkeProduct& u, cplx alpha) {
  const cplx u0 = u(0.0);
  return (alpha - u0) / (1.0 - alpha * std::conj(u0));
}

// V_alpha as a matrix from weighted C^m onto K_u coordinates. Column j is
// the image of the indicator of atom j:
//   (1 - conj(alpha) u(z)) w_j / (1 - conj(zeta_j) z) = w_j k_{zeta_j}(z),
// whose coordinates are w_j conj(e_k(zeta_j)).
struct CauchyTransform {
  Eigen::MatrixXcd matrix;
  ClarkMeasure measure;

  Eigen::VectorXd weights() const {
    return Eigen::Map<const Eigen::VectorXd>(measure.weights.data(), static_cast<Eigen::Index>(measure.size()));
  }

  // Adjoint for the weighted source metric: W^{-1} V^*.
  Eigen::MatrixXcd metric_adjoint() const { return weights().cwiseInverse().asDiagonal() * matrix.adjoint(); }

  Eigen::MatrixXcd inverse() const { return matrix.fullPivLu().inverse(); }
};

inline CauchyTransform cauchy_transform(const ModelSpaceBasis& B, const ClarkMeasure& mu) {
  if (static_cast<int>(mu.size()) != B.dimension())
    throw invariant_error("cauchy_transform: atom count must equal dim K_u");
  Eigen::MatrixXcd v(B.dimension(), static_cast<Eigen::Index>(mu.size()));
  for (std::size_t j = 0; j < mu.size(); ++j)
    v.col(static_cast<Eigen::Index>(j)) = mu.weights[j] * B.eval_basis(mu.atoms[j]).conjugate();
  return {std::move(v), mu};
}

// ||W^{-1} V^* V - I||: unitarity of V from L^2(mu) onto K_u.
inline double cauchy_unitarity_residual(const CauchyTransform& V) {
  const auto m = V.matrix.cols();
  return op_norm(V.metric_adjoint() * V.matrix - Eigen::MatrixXcd::Identity(m, m));
}

struct IntertwiningReport {
  cplx alpha;
  cplx beta;                   // clark_beta(u, alpha)
  double unitarity = 0.0;      // ||W^{-1} V^* V - I||
  double versus_beta = 0.0;    // ||V diag(zeta) V^{-1} - S_u^{beta}||
  double versus_alpha = 0.0;   // ||V diag(zeta) V^{-1} - S_u^{alpha}||
};

// Measures V M_zeta V^{-1} against the modified shift at beta_alpha and at
// alpha itself.
inline IntertwiningReport verify_clark_intertwining(const ModelSpaceBasis& B, cplx alpha) {
  const auto mu = clark_measure(B, alpha);
  const auto V = cauchy_transform(B, mu);
  const Eigen::MatrixXcd diag = AtomFunction::identity(mu).values.asDiagonal();
  const Eigen::MatrixXcd conj = V.matrix * diag * V.inverse();
  IntertwiningReport r;
  r.alpha = mu.alpha;
  r.beta = clark_beta(B.u(), mu.alpha);
  r.unitarity = cauchy_unitarity_residual(V);
  r.versus_beta = op_norm(conj - modified_shift(B, r.beta).matrix());
  r.versus_alpha = op_norm(conj - modified_shift(B, mu.alpha).matrix());
  return r;
}

// Unimodular parameter whose Clark measure diagonalizes S_u^gamma. For the
// modified shift S_u + gamma / (1 - gamma conj(u(0))) k_0 (x) C_u k_0 this
// is gamma itself: the eigenvalues are the solutions of u = gamma.
inline cplx diagonalizing_parameter(cplx gamma) {
  if (!is_unimodular(gamma)) throw invariant_error("diagonalizing_parameter: requires |gamma| = 1");
  return gamma / std::abs(gamma);
}

// Phi(S_u^alpha) = V diag(Phi) V^{-1}.
inline OperatorMatrix functional_calculus_unitary(const ModelSpaceBasis& B, cplx alpha, const AtomFunction& phi) {
  const auto V = cauchy_transform(B, clark_measure(B, diagonalizing_parameter(alpha)));
  if (phi.values.size() != V.matrix.cols()) throw invariant_error("functional_calculus_unitary: one value per atom");
  return {V.matrix * phi.values.asDiagonal() * V.metric_adjoint(), B.tag()};
}

struct Eigenspace {
  double eigenvalue;
  Eigen::MatrixXcd basis;  // orthonormal columns in K_u coordinates
  std::vector<std::size_t> atoms;  // level set {Phi = eigenvalue}
};

// Eigenvalues and eigenspaces of Phi(S_u^alpha) for real Phi: the distinct
// atom values, with eigenspace V applied to indicators of the level set.
inline std::vector<Eigenspace> spectral_data(const ModelSpaceBasis& B, cplx alpha, const AtomFunction& phi,
                                             double level_tol = 1e-10) {
  if (!phi.is_real()) throw precondition_error("spectral_data: Phi must be real at every atom");
  const auto V = cauchy_transform(B, clark_measure(B, diagonalizing_parameter(alpha)));
  std::vector<Eigenspace> out;
  for (Eigen::Index j = 0; j < phi.values.size(); ++j) {
    const double lam = phi.values(j).real();
    auto it = std::find_if(out.begin(), out.end(), [&](const Eigenspace& e) {
      return std::abs(e.eigenvalue - lam) <= level_tol * std::max(1.0, std::abs(lam));
    });
    if (it == out.end()) {
      out.push_back({lam, {}, {}});
      it = std::prev(out.end());
    }
    it->atoms.push_back(static_cast<std::size_t>(j));
  }
  for (auto& e : out) {
    e.basis.resize(V.matrix.rows(), static_cast<Eigen::Index>(e.atoms.size()));
    for (std::size_t k = 0; k < e.atoms.size(); ++k) {
      const auto j = static_cast<Eigen::Index>(e.atoms[k]);
      // Columns of V are orthogonal with squared norms w_j.
      e.basis.col(static_cast<Eigen::Index>(k)) = V.matrix.col(j) / std::sqrt(V.measure.weights[e.atoms[k]]);
    }
  }
  std::sort(out.begin(), out.end(), [](const Eigenspace& a, const Eigenspace& b) { return a.eigenvalue < b.eigenvalue; });
  return out;
}

// 1 / Phi atomwise, or nothing when some |Phi(zeta_j)| <= tol_inv.
inline std::optional<AtomFunction> atomic_mult_inverse(const AtomFunction& phi, double tol = kTolInv) {
  if (phi.values.size() == 0 || phi.values.cwiseAbs().minCoeff() <= tol) return std::nullopt;
  return AtomFunction{phi.values.cwiseInverse()};
}

}  // namespace tto
