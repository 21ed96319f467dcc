#pragma once

// The model space K_u = H^2 minus uH^2 as coordinates in the
// Takenaka-Malmquist orthonormal basis
//   e_k(z) = sqrt(1 - |a_k|^2) / (1 - conj(a_k) z) * prod_{j<k} (z - a_j) / (1 - conj(a_j) z).

#include <cmath>
#include <complex>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tto/errors.hpp"
#include "tto/hardy.hpp"
#include "tto/inner.hpp"

namespace tto {

// Identifies the coordinate system an operator matrix lives in.
struct BasisTag {
  std::vector<cplx> zero_order;
  int grid = 0;
  friend bool operator==(const BasisTag&, const BasisTag&) = default;
};

struct KuVector {
  Eigen::VectorXcd coeffs;
};

class ModelSpaceBasis {
 public:
  ModelSpaceBasis(BlaschkeProduct u, BoundaryGrid grid = BoundaryGrid{})
      : u_(std::move(u)), grid_(grid), zeros_(u_.expanded_zeros()) {
    if (zeros_.empty()) throw invariant_error("ModelSpaceBasis: u must have degree >= 1");
    grid_.require_resolves(dimension());
    const int n = grid_.size();
    const int d = dimension();
    samples_.resize(n, d);
    for (int k = 0; k < n; ++k) samples_.row(k) = eval_basis(grid_.point(k)).transpose();

    const Eigen::MatrixXcd gram = samples_.adjoint() * samples_ / static_cast<double>(n);
    const double gram_err = (gram - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (gram_err > 1e-9) {
      std::ostringstream os;
      os << "ModelSpaceBasis: Gram matrix deviates from identity by " << gram_err
         << " (zeros too close to the circle for N = " << n << ")";
      throw numerical_error(os.str());
    }
    for (int j = 0; j < d; ++j)
      if (negative_content(basis_function(j)) > 1e-9)
        throw numerical_error("ModelSpaceBasis: basis function not resolved as analytic on the grid");
  }

  const BlaschkeProduct& u() const { return u_; }
  const BoundaryGrid& grid() const { return grid_; }
  const std::vector<cplx>& zero_order() const { return zeros_; }
  int dimension() const { return static_cast<int>(zeros_.size()); }
  BasisTag tag() const { return {zeros_, grid_.size()}; }

  // Grid samples, one column per basis function.
  const Eigen::MatrixXcd& samples() const { return samples_; }

  BoundaryFunction basis_function(int k) const { return {grid_, samples_.col(k)}; }

  // (e_1(z), ..., e_n(z)) at any z away from the poles.
  Eigen::VectorXcd eval_basis(cplx z) const {
    const int d = dimension();
    Eigen::VectorXcd e(d);
    cplx prefix = 1.0;
    for (int k = 0; k < d; ++k) {
      const cplx a = zeros_[static_cast<std::size_t>(k)];
      const cplx den = 1.0 - std::conj(a) * z;
      e(k) = prefix * std::sqrt(1.0 - std::norm(a)) / den;
      prefix *= (z - a) / den;
    }
    return e;
  }

  BoundaryFunction synthesize(const KuVector& f) const {
    if (f.coeffs.size() != dimension()) throw invariant_error("synthesize: coordinate count must equal dim K_u");
    return {grid_, samples_ * f.coeffs};
  }

  cplx evaluate(const KuVector& f, cplx z) const { return (eval_basis(z).transpose() * f.coeffs)(0); }

  // P_u f in coordinates: <f, e_k>.
  KuVector coordinates(const BoundaryFunction& f) const {
    if (!(f.grid() == grid_)) throw invariant_error("project_Ku: grid mismatch");
    return {samples_.adjoint() * f.values() / static_cast<double>(grid_.size())};
  }

 private:
  BlaschkeProduct u_;
  BoundaryGrid grid_;
  std::vector<cplx> zeros_;
  Eigen::MatrixXcd samples_;
};

inline ModelSpaceBasis tm_basis(const BlaschkeProduct& u, BoundaryGrid grid = BoundaryGrid{}) {
  return {u, grid};
}

inline KuVector project_Ku(const ModelSpaceBasis& B, const BoundaryFunction& f) { return B.coordinates(f); }

// k_lambda with <f, k_lambda> = f(lambda).
inline KuVector reproducing_kernel(const ModelSpaceBasis& B, cplx lambda) {
  if (!(std::abs(lambda) < 1.0)) throw invariant_error("reproducing_kernel: requires |lambda| < 1");
  return {B.eval_basis(lambda).conjugate()};
}

inline cplx ku_inner(const KuVector& f, const KuVector& g) { return g.coeffs.dot(f.coeffs); }

// Matrix K with coords(C_u f) = K * conj(coords(f)), C_u f = u conj(z f).
inline Eigen::MatrixXcd conjugation_matrix(const ModelSpaceBasis& B) {
  const auto& grid = B.grid();
  const int n = grid.size();
  const int d = B.dimension();
  Eigen::VectorXcd uz(n);
  for (int k = 0; k < n; ++k) uz(k) = B.u()(grid.point(k)) * std::conj(grid.point(k));
  Eigen::MatrixXcd images(n, d);
  for (int j = 0; j < d; ++j) images.col(j) = uz.cwiseProduct(B.samples().col(j).conjugate());
  return B.samples().adjoint() * images / static_cast<double>(n);
}

inline KuVector conjugate(const ModelSpaceBasis& B, const KuVector& f) {
  return {conjugation_matrix(B) * f.coeffs.conjugate()};
}

// ||P_u f|| / ||f|| for analytic f: zero exactly when u divides f.
inline double ku_residual(const ModelSpaceBasis& B, const BoundaryFunction& f) {
  const double nf = grid_norm(f);
  if (nf == 0.0) return 0.0;
  return B.coordinates(f).coeffs.norm() / nf;
}

// u divides the analytic grid function f.
inline bool divides(const ModelSpaceBasis& B, const BoundaryFunction& f, double tol = kTolDiv) {
  return ku_residual(B, f) <= tol;
}

}  // namespace tto
