#pragma once

// Verification suites. Each suite turns an identity about the Sedlock classes into
// named residuals and returns one report per check, plus negative controls
// in which a hypothesis is deliberately broken and the residuals must blow up.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tto/clark.hpp"
#include "tto/errors.hpp"
#include "tto/hardy.hpp"
#include "tto/inner.hpp"
#include "tto/modelspace.hpp"
#include "tto/operators.hpp"
#include "tto/serialize.hpp"

namespace tto {

inline constexpr double kDefaultTol = 1e-8;
// A negative control counts as flagged when some residual exceeds this
// multiple of the tolerance.
inline constexpr double kControlMargin = 100.0;

// Seeded generator; doubles are built from the top 53 bits so that streams
// agree across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  double uniform() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(g_() % static_cast<std::uint64_t>(hi - lo + 1)); }

  cplx in_disk(double radius = 1.0) {
    return std::polar(radius * std::sqrt(uniform()), 2.0 * std::numbers::pi * uniform());
  }
  cplx on_circle() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

 private:
  std::mt19937_64 g_;
};

// Independent stream for (seed, tag).
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : tag) h = (h ^ c) * 1099511628211ull;
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (h | 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// ---- random inputs ---------------------------------------------------------

inline BlaschkeProduct random_blaschke(Rng& rng, int degree, double max_radius = 0.85, double min_separation = 0.1) {
  std::vector<cplx> pts;
  int tries = 0;
  while (static_cast<int>(pts.size()) < degree) {
    const cplx z = rng.in_disk(max_radius);
    const bool ok = std::all_of(pts.begin(), pts.end(), [&](cplx p) { return pseudo_hyperbolic(p, z) >= min_separation; });
    if (ok || ++tries > 10000) pts.push_back(z);
  }
  return BlaschkeProduct::from_points(pts, rng.on_circle());
}

inline Polynomial random_polynomial(Rng& rng, int degree) {
  std::vector<cplx> c;
  for (int k = 0; k <= degree; ++k) c.push_back(rng.in_disk());
  return Polynomial(std::move(c));
}

// Analytic on the closed disk: poles at modulus 1.5 to 3.
inline RationalSymbol random_bounded_symbol(Rng& rng) {
  Polynomial num = random_polynomial(rng, rng.integer(0, 3));
  if (num.l1_norm() < 0.25) num = num + Polynomial::constant(1.0);
  Polynomial den = Polynomial::constant(1.0);
  const int poles = rng.integer(0, 2);
  for (int k = 0; k < poles; ++k) {
    const cplx p = std::polar(rng.uniform(1.5, 3.0), 2.0 * std::numbers::pi * rng.uniform());
    den = den * Polynomial({1.0, -1.0 / p});
  }
  return RationalSymbol(num, den);
}

// One extra pole inside the disk, kept at pseudo-hyperbolic distance >= 0.3
// from every zero of ua, so the symbol lies in the local Smirnov class of ua.
inline RationalSymbol random_local_symbol(Rng& rng, const BlaschkeProduct& ua) {
  const auto zeros = ua.expanded_zeros();
  cplx c;
  for (int tries = 0;; ++tries) {
    c = rng.in_disk(0.8);
    const bool ok = std::all_of(zeros.begin(), zeros.end(), [&](cplx z) { return pseudo_hyperbolic(z, c) >= 0.3; });
    if (ok || tries > 10000) break;
  }
  return random_bounded_symbol(rng) * RationalSymbol(Polynomial::constant(1.0), Polynomial({-c, 1.0}));
}

inline KuVector random_ku_vector(Rng& rng, int n) {
  Eigen::VectorXcd v(n);
  for (int k = 0; k < n; ++k) v(k) = rng.in_disk();
  return {v};
}

// Real values in [-2, 2]; when there are at least two atoms the last value
// repeats the first so that one level set has two atoms.
inline AtomFunction random_real_atom_function(Rng& rng, std::size_t m) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(m));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = rng.uniform(-2.0, 2.0);
  if (m >= 3) v(v.size() - 1) = v(0);
  return {v};
}

inline AtomFunction random_atom_function(Rng& rng, std::size_t m) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(m));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = 0.5 * rng.on_circle() + rng.in_disk(1.5);
  return {v};
}

// ---- reports ----------------------------------------------------------------

struct VerificationReport {
  VerificationReport() = default;
  VerificationReport(std::string name, json p) : suite(std::move(name)), params(std::move(p)) {}

  std::string suite;
  json params = json::object();
  std::vector<std::pair<std::string, double>> residuals;
  double tolerance = kDefaultTol;
  bool negative_control = false;
  std::string outcome = "evaluated";
  json diagnostics = json::object();

  void add(std::string name, double value) { residuals.emplace_back(std::move(name), value); }

  bool pass() const {
    return std::all_of(residuals.begin(), residuals.end(), [&](const auto& r) { return r.second < tolerance; });
  }
  std::string verdict() const { return pass() ? "pass" : "fail"; }

  // A control is met when it fails by a clear margin.
  bool as_expected() const {
    if (!negative_control) return pass();
    return std::any_of(residuals.begin(), residuals.end(),
                       [&](const auto& r) { return !(r.second <= kControlMargin * tolerance); });
  }
};

inline json to_json(const VerificationReport& r) {
  json res = json::object();
  for (const auto& [name, v] : r.residuals) res[name] = std::isfinite(v) ? json(v) : json("nan");
  json out{{"suite", r.suite},
           {"params", r.params},
           {"residuals", std::move(res)},
           {"tolerance", r.tolerance},
           {"verdict", r.verdict()},
           {"control", r.negative_control ? "negative" : "positive"},
           {"expected", r.negative_control ? "fail" : "pass"},
           {"as_expected", r.as_expected()},
           {"outcome", r.outcome}};
  if (!r.diagnostics.empty()) out["diagnostics"] = r.diagnostics;
  return out;
}

struct SuiteOptions {
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  int samples = 20;
};

namespace detail {

inline double relative(const Eigen::MatrixXcd& diff, const Eigen::MatrixXcd& ref) {
  return op_norm(diff) / std::max(1.0, op_norm(ref));
}

inline double max_entry(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline json base_params(const ModelSpaceBasis& B, const SedlockParameter& a, const SuiteOptions& opt) {
  return {{"u", to_json(B.u())}, {"alpha", to_json(a)}, {"grid", B.grid().size()}, {"seed", opt.seed}};
}

inline BoundaryFunction kernel_weight(const ModelSpaceBasis& B, cplx alpha) {
  return BoundaryFunction::sample(B.grid(), [&](cplx z) { return 1.0 / (1.0 - alpha * std::conj(B.u()(z))); });
}

inline cplx other_inside(cplx a) { return std::abs(a) < 0.5 ? a + 0.45 : -0.5 * a; }

inline SedlockParameter other_parameter(const SedlockParameter& a) {
  if (a.is_infinite()) return SedlockParameter::finite(0.0);
  const cplx v = a.value();
  if (a.regime() == SedlockParameter::Regime::boundary) return SedlockParameter::finite(v * std::polar(1.0, 1.0));
  return SedlockParameter::finite(v + 0.5);
}

// ||A A^+ - I||: zero iff A is invertible. The pseudo-inverse drops singular
// values below max(1, ||A||) / 1e12, the same cut as numerically_singular.
inline double invertibility_defect(const Eigen::MatrixXcd& a) {
  const auto n = a.rows();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = std::max(1.0, s(0)) / kSingularCondition;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > cut) inv(k) = 1.0 / s(k);
  const Eigen::MatrixXcd pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
  return op_norm(a * pinv - Eigen::MatrixXcd::Identity(n, n));
}

}  // namespace detail

// Commutant of T as the nullspace of X -> XT - TX, with a basis of it
// (columns are column-major vec(X)).
struct CommutantData {
  int dimension = 0;
  Eigen::MatrixXcd basis;
  double gap = 0.0;  // smallest singular value above the threshold
};

inline CommutantData commutant(const Eigen::MatrixXcd& t, double rel = 1e-9) {
  const auto n = t.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd k(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      k.block(i * n, j * n, n, n) = t(j, i) * id - (i == j ? t : Eigen::MatrixXcd::Zero(n, n));
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(k, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double thr = rel * std::max(1.0, s(0));
  CommutantData out;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= thr) ++out.dimension; else out.gap = s(i);
  }
  out.basis = svd.matrixV().rightCols(out.dimension);
  return out;
}

// ---- suites -------------------------------------------------------------------

inline std::vector<VerificationReport> suite_commutant(const ModelSpaceBasis& B, const SedlockParameter& alpha,
                                                       const SuiteOptions& opt = {}) {
  using R = SedlockParameter::Regime;
  Rng rng(derive_seed(opt.seed, "commutant|" + alpha.to_string()));
  const int n = B.dimension();
  const Eigen::MatrixXcd t = class_shift(B, alpha).matrix();

  VerificationReport rep{"commutant", detail::base_params(B, alpha, opt)};
  rep.tolerance = opt.tol;
  const auto cd = commutant(t);
  rep.add("dimension_mismatch", std::abs(cd.dimension - n));
  rep.diagnostics["commutant_dimension"] = cd.dimension;
  rep.diagnostics["singular_value_gap"] = cd.gap;

  // Random members of the class.
  std::vector<Eigen::MatrixXcd> members;
  const int half = opt.samples / 2;
  for (int s = 0; s < opt.samples; ++s) {
    const bool sedlock_form = s >= half;
    switch (alpha.regime()) {
      case R::inside:
        if (sedlock_form) {
          members.push_back(sedlock_operator(B, random_ku_vector(rng, n), alpha.value(), rng.in_disk()).matrix());
        } else {
          const auto ua = frostman_shift(B.u(), alpha.value());
          members.push_back(quotient_operator(B, random_local_symbol(rng, ua), alpha.value()).matrix());
        }
        break;
      case R::boundary:
        if (sedlock_form)
          members.push_back(sedlock_operator(B, random_ku_vector(rng, n), alpha.value(), rng.in_disk()).matrix());
        else
          members.push_back(functional_calculus_unitary(B, alpha.value(), random_atom_function(rng, static_cast<std::size_t>(n))).matrix());
        break;
      case R::outside:
      case R::infinity: {
        if (sedlock_form) {
          const auto phi = random_ku_vector(rng, n);
          const cplx c = rng.in_disk();
          if (alpha.is_infinite()) {
            const auto tilde = compressed_shift(B).apply(conjugate(B, phi));
            members.push_back(tto_matrix(B, B.synthesize(tilde).conj() + c).matrix());
          } else {
            members.push_back(sedlock_operator(B, phi, alpha.value(), c).matrix());
          }
        } else {
          const cplx inner = alpha.reflected().value();
          const auto ua = frostman_shift(B.u(), inner);
          members.push_back(adjoint_class_operator(B, random_local_symbol(rng, ua), alpha).matrix());
        }
        break;
      }
    }
  }
  double worst = 0.0;
  for (const auto& m : members) worst = std::max(worst, detail::relative(commutator(m, t), m));
  rep.add("class_commutation", worst);

  // Converse: random commuting X are classified back to alpha.
  int misses = 0;
  for (int s = 0; s < 5; ++s) {
    Eigen::VectorXcd coef(cd.basis.cols());
    for (Eigen::Index k = 0; k < coef.size(); ++k) coef(k) = rng.in_disk();
    const Eigen::VectorXcd x = cd.basis * coef;
    Eigen::MatrixXcd xm = Eigen::Map<const Eigen::MatrixXcd>(x.data(), n, n);
    xm /= std::max(1e-300, xm.norm());
    if (!sedlock_membership(OperatorMatrix(xm, B.tag()), B, opt.tol).contains(alpha, opt.tol)) ++misses;
  }
  rep.add("membership_misses", misses);

  std::vector<VerificationReport> out{std::move(rep)};
  if (n >= 2 && !members.empty()) {
    // Wrong alpha: the same class members against another modified shift.
    const auto other = detail::other_parameter(alpha);
    VerificationReport ctl{"commutant", detail::base_params(B, alpha, opt)};
    ctl.tolerance = opt.tol;
    ctl.negative_control = true;
    ctl.params["wrong_alpha"] = to_json(other);
    const Eigen::MatrixXcd t2 = class_shift(B, other).matrix();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : members) best = std::min(best, detail::relative(commutator(m, t2), m));
    ctl.add("class_commutation_wrong_alpha", best);
    out.push_back(std::move(ctl));
  }
  return out;
}

// phi in the local Smirnov class of u_alpha, |alpha| < 1.
inline std::vector<VerificationReport> suite_adjoint_graph(const ModelSpaceBasis& B, const RationalSymbol& phi, cplx alpha,
                                                           const SuiteOptions& opt = {}) {
  if (!(std::abs(alpha) < 1.0)) throw invariant_error("suite_adjoint_graph: requires |alpha| < 1");
  const auto ua = frostman_shift(B.u(), alpha);
  if (!local_smirnov_check(phi, ua))
    throw precondition_error("suite_adjoint_graph: symbol is not in the local Smirnov class of u_alpha");
  Rng rng(derive_seed(opt.seed, "adjoint_graph|" + SedlockParameter::finite(alpha).to_string()));
  const int n = B.dimension();
  const auto form = smirnov_representation(phi, B.grid());
  const Eigen::MatrixXcd a = quotient_operator(B, phi, alpha).matrix();
  const auto va = sample_blaschke(form.v, B.grid()) * form.pair.a;

  auto graph_parts = [&](cplx at) {
    const auto w = detail::kernel_weight(B, at);
    return std::pair{tto_matrix(B, form.pair.b * w).matrix(), tto_matrix(B, va * w).matrix()};
  };

  VerificationReport rep{"adjoint_graph", detail::base_params(B, SedlockParameter::finite(alpha), opt)};
  rep.tolerance = opt.tol;
  rep.params["phi"] = to_json(phi);

  const auto [tb, tva] = graph_parts(alpha);
  double vec_graph = 0.0;
  for (int s = 0; s < 3; ++s) {
    const Eigen::VectorXcd f = random_ku_vector(rng, n).coeffs;
    vec_graph = std::max(vec_graph, (tb * f - tva * (a * f)).norm() / (std::max(1.0, op_norm(tb)) * f.norm()));
  }
  rep.add("graph_vectors", vec_graph);
  rep.add("graph_operator", detail::relative(tb - tva * a, tb));

  const auto wc = detail::kernel_weight(B, alpha).conj();
  const Eigen::MatrixXcd tbc = tto_matrix(B, form.pair.b.conj() * wc).matrix();
  const Eigen::MatrixXcd tvac = tto_matrix(B, va.conj() * wc).matrix();
  rep.add("adjoint_pair", detail::relative(tbc - tvac * a.adjoint(), tbc));

  rep.add("pair_route", detail::relative(a - pair_quotient_operator(B, form, alpha).matrix(), a));

  const auto cf = crofoot(B, alpha);
  const Eigen::MatrixXcd& j = cf.map.matrix();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  rep.add("crofoot_unitarity", op_norm(j.adjoint() * j - id));
  const Eigen::MatrixXcd a0 = quotient_operator(cf.shifted_basis, phi, 0.0).matrix();
  rep.add("crofoot_conjugacy", detail::relative(a - j * a0 * j.inverse(), a));
  rep.add("crofoot_shift",
          op_norm(j.adjoint() * modified_shift(B, alpha).matrix() * j - compressed_shift(cf.shifted_basis).matrix()));
  rep.add("conjugation_identity",
          op_norm(conjugation_matrix(B) * j.conjugate() - j * conjugation_matrix(cf.shifted_basis)));

  std::vector<VerificationReport> out{std::move(rep)};
  if (n >= 2 && detail::max_entry(a - a.trace() / static_cast<double>(n) * id) > 1e-6) {
    const cplx other = detail::other_inside(alpha);
    VerificationReport ctl{"adjoint_graph", detail::base_params(B, SedlockParameter::finite(alpha), opt)};
    ctl.tolerance = opt.tol;
    ctl.negative_control = true;
    ctl.params["phi"] = to_json(phi);
    ctl.params["wrong_alpha"] = to_json(other);
    const auto [tb2, tva2] = graph_parts(other);
    ctl.add("graph_operator_wrong_alpha", detail::relative(tb2 - tva2 * a, tb2));
    out.push_back(std::move(ctl));
  }
  return out;
}

inline std::vector<VerificationReport> suite_product_uniqueness(const ModelSpaceBasis& B, cplx alpha,
                                                                const RationalSymbol& psi, const RationalSymbol& phi,
                                                                const SuiteOptions& opt = {}) {
  if (!(std::abs(alpha) < 1.0)) throw invariant_error("suite_product_uniqueness: requires |alpha| < 1");
  Rng rng(derive_seed(opt.seed, "product_uniqueness|" + SedlockParameter::finite(alpha).to_string()));
  const auto ua = frostman_shift(B.u(), alpha);
  const Eigen::MatrixXcd qpsi = quotient_operator(B, psi, alpha).matrix();
  const Eigen::MatrixXcd qphi = quotient_operator(B, phi, alpha).matrix();
  const Eigen::MatrixXcd qprod = quotient_operator(B, psi * phi, alpha).matrix();

  VerificationReport rep{"product_uniqueness", detail::base_params(B, SedlockParameter::finite(alpha), opt)};
  rep.tolerance = opt.tol;
  rep.params["psi"] = to_json(psi);
  rep.params["phi"] = to_json(phi);
  rep.add("product_psi_phi", detail::relative(qpsi * qphi - qprod, qprod));
  rep.add("product_phi_psi", detail::relative(qphi * qpsi - qprod, qprod));

  const double scale = std::max(1.0, detail::max_entry(qphi));
  const RationalSymbol multiple = as_rational(ua) * RationalSymbol(random_polynomial(rng, 2));
  rep.params["multiple"] = to_json(multiple);
  rep.add("multiple_difference", detail::max_entry(qphi - quotient_operator(B, phi + multiple, alpha).matrix()) / scale);
  rep.add("multiple_divisibility_miss", divides(ua, multiple) ? 0.0 : 1.0);

  Polynomial g = random_polynomial(rng, 2);
  if (divides(ua, g)) g = g + Polynomial::constant(1.0);
  const RationalSymbol nonmultiple(g);
  rep.params["nonmultiple"] = to_json(nonmultiple);
  const double gap = detail::max_entry(qphi - quotient_operator(B, phi + nonmultiple, alpha).matrix()) / scale;
  rep.add("nonmultiple_misclassified", divides(ua, nonmultiple) ? 1.0 : 0.0);
  rep.add("nonmultiple_separation_shortfall", gap > kControlMargin * opt.tol ? 0.0 : 1.0);

  VerificationReport ctl{"product_uniqueness", rep.params};
  ctl.tolerance = opt.tol;
  ctl.negative_control = true;
  ctl.add("nonmultiple_difference", gap);
  return {std::move(rep), std::move(ctl)};
}

namespace detail {

// Recovers the K_{u_beta} representative Psi of M's symbol in the class of
// beta (|beta| < 1) and adds the membership and divisibility residuals.
inline void inverse_symbol_checks(VerificationReport& rep, const ModelSpaceBasis& B, const Eigen::MatrixXcd& m,
                                  cplx beta, const LocalSmirnovForm& form) {
  const int n = B.dimension();
  const auto cf = crofoot(B, beta);
  const auto& shifted = cf.shifted_basis;
  const auto w = kernel_weight(B, beta);
  Eigen::MatrixXcd sys(n * n, n);
  for (int k = 0; k < n; ++k) {
    const Eigen::MatrixXcd tk = tto_matrix(B, shifted.basis_function(k) * w).matrix();
    sys.col(k) = Eigen::Map<const Eigen::VectorXcd>(tk.data(), n * n);
  }
  const Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(m.data(), n * n);
  const Eigen::VectorXcd c = sys.colPivHouseholderQr().solve(rhs);
  rep.add("representative_fit", (sys * c - rhs).norm() / std::max(1.0, rhs.norm()));

  const auto psi = shifted.synthesize({c});
  const auto va = sample_blaschke(form.v, B.grid()) * form.pair.a;
  const auto lhs = psi * form.pair.b;
  const double scale = std::max({grid_norm(lhs), grid_norm(va), 1e-300});
  rep.add("divisibility", shifted.coordinates(lhs - va).coeffs.norm() / scale);
  rep.diagnostics["representative_basis"] = to_json(shifted.u());
  rep.diagnostics["representative"] = to_json(c);
}

}  // namespace detail

// |alpha| != 1: A = phi(S_u^alpha), or the adjoint calculus outside.
inline std::vector<VerificationReport> suite_inverse(const ModelSpaceBasis& B, const SedlockParameter& alpha,
                                                     const RationalSymbol& phi, const SuiteOptions& opt = {}) {
  using R = SedlockParameter::Regime;
  if (alpha.regime() == R::boundary) throw invariant_error("suite_inverse: use the atom-function form for |alpha| = 1");
  const bool inside = alpha.regime() == R::inside;
  const cplx beta = inside ? alpha.value() : alpha.reflected().value();
  const auto ub = frostman_shift(B.u(), beta);
  if (!local_smirnov_check(phi, ub))
    throw precondition_error("suite_inverse: symbol is not in the local Smirnov class of the shifted inner function");

  VerificationReport rep{"inverse", detail::base_params(B, alpha, opt)};
  rep.tolerance = opt.tol;
  rep.params["phi"] = to_json(phi);
  const Eigen::MatrixXcd a = inside ? quotient_operator(B, phi, beta).matrix()
                                    : adjoint_class_operator(B, phi, alpha).matrix();
  const int n = B.dimension();
  const auto reduced = phi.lowest_terms();
  // phi(S) is singular exactly when the numerator vanishes at a zero of u_beta.
  const auto numerator_inner = inner_outer_split(RationalSymbol(reduced.numerator())).first;
  const bool expect_singular = gcid(numerator_inner, ub).degree() > 0;
  const bool singular = numerically_singular(a);
  rep.add("invertibility_mismatch", expect_singular == singular ? 0.0 : 1.0);

  std::vector<VerificationReport> out;
  if (singular) {
    rep.outcome = "non_invertible";
  } else {
    const Eigen::MatrixXcd m = a.inverse();
    rep.add("inverse_residual", op_norm(a * m - Eigen::MatrixXcd::Identity(n, n)));
    rep.add("membership_miss", sedlock_membership(OperatorMatrix(m, B.tag()), B, opt.tol).contains(alpha, opt.tol) ? 0.0 : 1.0);
    rep.add("inverse_commutation", detail::relative(commutator(m, class_shift(B, alpha).matrix()), m));
    const auto form = smirnov_representation(phi, B.grid());
    detail::inverse_symbol_checks(rep, B, inside ? m : Eigen::MatrixXcd(m.adjoint()), beta, form);
    rep.outcome = "invertible";
  }
  out.push_back(std::move(rep));

  // Non-coprime data: the numerator picks up a zero of u_beta.
  const cplx z0 = ub.expanded_zeros().front();
  const RationalSymbol bad = phi * RationalSymbol(Polynomial({-z0, 1.0}));
  VerificationReport ctl{"inverse", detail::base_params(B, alpha, opt)};
  ctl.tolerance = opt.tol;
  ctl.negative_control = true;
  ctl.params["phi"] = to_json(bad);
  const Eigen::MatrixXcd abad = inside ? quotient_operator(B, bad, beta).matrix()
                                       : adjoint_class_operator(B, bad, alpha).matrix();
  ctl.add("inverse_residual", detail::invertibility_defect(abad));
  out.push_back(std::move(ctl));
  return out;
}

// |alpha| = 1: A = Phi(S_u^alpha) through the Clark measure.
inline std::vector<VerificationReport> suite_inverse(const ModelSpaceBasis& B, cplx alpha, const AtomFunction& phi,
                                                     const SuiteOptions& opt = {}) {
  const auto param = SedlockParameter::finite(alpha);
  if (param.regime() != SedlockParameter::Regime::boundary) throw invariant_error("suite_inverse: requires |alpha| = 1");
  const int n = B.dimension();
  const Eigen::MatrixXcd a = functional_calculus_unitary(B, alpha, phi).matrix();

  VerificationReport rep{"inverse", detail::base_params(B, param, opt)};
  rep.tolerance = opt.tol;
  rep.params["phi_atoms"] = to_json(phi.values);
  const auto inv = atomic_mult_inverse(phi);
  const bool singular = numerically_singular(a);
  rep.add("invertibility_mismatch", inv.has_value() == singular ? 1.0 : 0.0);
  if (inv && !singular) {
    const Eigen::MatrixXcd m = functional_calculus_unitary(B, alpha, *inv).matrix();
    rep.add("inverse_residual", op_norm(a * m - Eigen::MatrixXcd::Identity(n, n)));
    rep.add("membership_miss", sedlock_membership(OperatorMatrix(m, B.tag()), B, opt.tol).contains(param, opt.tol) ? 0.0 : 1.0);
    rep.outcome = "invertible";
  } else {
    rep.outcome = "non_invertible";
  }

  AtomFunction bad = phi;
  bad.values(0) = 0.0;
  VerificationReport ctl{"inverse", detail::base_params(B, param, opt)};
  ctl.tolerance = opt.tol;
  ctl.negative_control = true;
  ctl.params["phi_atoms"] = to_json(bad.values);
  ctl.add("inverse_residual", detail::invertibility_defect(functional_calculus_unitary(B, alpha, bad).matrix()));
  return {std::move(rep), std::move(ctl)};
}

inline std::vector<VerificationReport> suite_selfadjoint(const ModelSpaceBasis& B, cplx alpha, const AtomFunction& phi,
                                                         const SuiteOptions& opt = {}) {
  const auto param = SedlockParameter::finite(alpha);
  if (param.regime() != SedlockParameter::Regime::boundary) throw invariant_error("suite_selfadjoint: requires |alpha| = 1");
  if (!phi.is_real()) throw precondition_error("suite_selfadjoint: Phi must be real (the non-real case is the built-in control)");
  const int n = B.dimension();
  const Eigen::MatrixXcd a = functional_calculus_unitary(B, alpha, phi).matrix();

  VerificationReport rep{"selfadjoint", detail::base_params(B, param, opt)};
  rep.tolerance = opt.tol;
  rep.params["phi_atoms"] = to_json(phi.values);
  rep.add("hermitian", op_norm(a - a.adjoint()));

  // Dense oracle.
  const Eigen::MatrixXcd herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  const Eigen::VectorXd dense = es.eigenvalues();
  std::vector<double> expected(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) expected[static_cast<std::size_t>(k)] = phi.values(k).real();
  std::sort(expected.begin(), expected.end());
  double ev = 0.0;
  for (int k = 0; k < n; ++k) ev = std::max(ev, std::abs(dense(k) - expected[static_cast<std::size_t>(k)]));
  rep.add("eigenvalue_multiset", ev);

  const auto spaces = spectral_data(B, alpha, phi);
  int dim_mismatch = 0;
  double angle = 0.0;
  double eq = 0.0;
  for (const auto& sp : spaces) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < dense.size(); ++k)
      if (std::abs(dense(k) - sp.eigenvalue) <= 1e-6 * std::max(1.0, std::abs(sp.eigenvalue))) idx.push_back(k);
    dim_mismatch += std::abs(static_cast<int>(idx.size()) - static_cast<int>(sp.atoms.size()));
    Eigen::MatrixXcd q(n, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) q.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(idx[k]);
    const Eigen::MatrixXcd p_dense = q * q.adjoint();
    const Eigen::MatrixXcd p_clark = sp.basis * sp.basis.adjoint();
    angle = std::max(angle, op_norm(p_dense - p_clark));
    eq = std::max(eq, op_norm(a * sp.basis - sp.eigenvalue * sp.basis));
  }
  rep.add("eigenspace_dimension_mismatch", dim_mismatch);
  rep.add("subspace_angle", angle);
  rep.add("eigen_equation", eq);

  // Clark atoms against a dense eigensolver of the unitary S_u^alpha.
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> us(modified_shift(B, alpha).matrix());
  const auto mu = clark_measure(B, alpha);
  double atom_err = 0.0;
  for (const cplx& z : mu.atoms) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < us.eigenvalues().size(); ++k) best = std::min(best, std::abs(us.eigenvalues()(k) - z));
    atom_err = std::max(atom_err, best);
  }
  rep.add("atoms_vs_dense", atom_err);

  AtomFunction bad = phi;
  bad.values(0) += cplx(0.0, 0.5);
  VerificationReport ctl{"selfadjoint", detail::base_params(B, param, opt)};
  ctl.tolerance = opt.tol;
  ctl.negative_control = true;
  ctl.params["phi_atoms"] = to_json(bad.values);
  const Eigen::MatrixXcd abad = functional_calculus_unitary(B, alpha, bad).matrix();
  ctl.add("hermitian", op_norm(abad - abad.adjoint()));
  return {std::move(rep), std::move(ctl)};
}

inline std::vector<VerificationReport> suite_clark(const ModelSpaceBasis& B, cplx alpha, const SuiteOptions& opt = {}) {
  const auto param = SedlockParameter::finite(alpha);
  if (param.regime() != SedlockParameter::Regime::boundary) throw invariant_error("suite_clark: requires |alpha| = 1");
  const auto mu = clark_measure(B, alpha);
  VerificationReport rep{"clark", detail::base_params(B, param, opt)};
  rep.tolerance = opt.tol;
  double h = 0.0;
  for (const cplx& z : herglotz_test_points(32)) h = std::max(h, herglotz_residual(B.u(), mu, z));
  rep.add("herglotz", h);
  const cplx u0 = B.u()(0.0);
  const double origin = ((1.0 + std::conj(mu.alpha) * u0) / (1.0 - std::conj(mu.alpha) * u0)).real();
  rep.add("mass_vs_origin", std::abs(mu.total_mass() - origin));
  const auto it = verify_clark_intertwining(B, alpha);
  rep.add("unitarity", it.unitarity);
  rep.add("intertwining", it.versus_alpha);
  rep.diagnostics["measure"] = to_json(mu);
  rep.diagnostics["beta"] = to_json(it.beta);
  rep.diagnostics["intertwining_at_beta"] = it.versus_beta;

  VerificationReport ctl{"clark", detail::base_params(B, param, opt)};
  ctl.tolerance = opt.tol;
  ctl.negative_control = true;
  const cplx other = alpha * std::polar(1.0, 1.0);
  ctl.params["wrong_alpha"] = to_json(other);
  const auto V = cauchy_transform(B, mu);
  const Eigen::MatrixXcd diag = AtomFunction::identity(mu).values.asDiagonal();
  ctl.add("intertwining_wrong_alpha", op_norm(V.matrix * diag * V.inverse() - modified_shift(B, other).matrix()));
  return {std::move(rep), std::move(ctl)};
}

// Deterministic merge: stable sort by suite name.
inline void sort_reports(std::vector<VerificationReport>& reps) {
  std::stable_sort(reps.begin(), reps.end(),
                   [](const VerificationReport& a, const VerificationReport& b) { return a.suite < b.suite; });
}

}  // namespace tto
