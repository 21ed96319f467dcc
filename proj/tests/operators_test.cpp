#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"
#include "tto/operators.hpp"

using namespace tto;
using tto::testing::mat;

namespace {
const BlaschkeProduct kGeneric({{{0.6, 0.2}, 2}, {{-0.1, -0.7}, 1}, {{0.3, 0.3}, 1}}, std::polar(1.0, 0.7));

Eigen::MatrixXcd lower_shift(int n) {
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) s(k + 1, k) = 1.0;
  return s;
}
}  // namespace

TEST(CompressedShift, Examples) {
  EXPECT_MAT_NEAR(compressed_shift(ModelSpaceBasis(BlaschkeProduct::monomial(2))).matrix(), mat({{0, 0}, {1, 0}}), 1e-14);
  EXPECT_MAT_NEAR(compressed_shift(ModelSpaceBasis(BlaschkeProduct::monomial(3))).matrix(), lower_shift(3), 1e-14);
  EXPECT_MAT_NEAR(compressed_shift(ModelSpaceBasis(BlaschkeProduct::monomial(1))).matrix(), mat({{0}}), 1e-14);
}

TEST(CompressedShift, SpectrumIsZeroSet) {
  const ModelSpaceBasis B(BlaschkeProduct::from_points({0.5, cplx(-0.2, 0.4), cplx(0.0, -0.6)}));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(compressed_shift(B).matrix());
  for (const cplx& a : B.zero_order()) {
    double best = 1.0;
    for (Eigen::Index k = 0; k < 3; ++k) best = std::min(best, std::abs(es.eigenvalues()(k) - a));
    EXPECT_LT(best, 1e-12);
  }
}

TEST(ModifiedShift, Examples) {
  const ModelSpaceBasis B(kGeneric);
  EXPECT_MAT_NEAR(modified_shift(B, 0.0).matrix(), compressed_shift(B).matrix(), 1e-15);
  const cplx a(0.3, -1.2);
  EXPECT_MAT_NEAR(modified_shift(ModelSpaceBasis(BlaschkeProduct::monomial(2)), a).matrix(), mat({{0, a}, {1, 0}}), 1e-14);
  EXPECT_MAT_NEAR(modified_shift(ModelSpaceBasis(BlaschkeProduct::monomial(1)), a).matrix(), mat({{a}}), 1e-14);
}

TEST(ModifiedShift, UnitaryOnCircle) {
  const ModelSpaceBasis B(kGeneric);
  const Eigen::MatrixXcd u = modified_shift(B, std::polar(1.0, 1.3)).matrix();
  EXPECT_MAT_NEAR(u.adjoint() * u, Eigen::MatrixXcd::Identity(4, 4), 1e-12);
}

TEST(ModifiedShift, DegenerateParameter) {
  // u(0) = 0.5 gives 1 - alpha conj(u(0)) = 0 at alpha = 2.
  const ModelSpaceBasis B(BlaschkeProduct::from_points({-0.5}));
  EXPECT_THROW(modified_shift(B, 2.0), degenerate_parameter_error);
}

TEST(TtoMatrix, Examples) {
  const ModelSpaceBasis B(BlaschkeProduct::monomial(2));
  EXPECT_MAT_NEAR(tto_matrix(B, RationalSymbol::constant(1.0)).matrix(), Eigen::MatrixXcd::Identity(2, 2), 1e-14);
  EXPECT_MAT_NEAR(tto_matrix(B, RationalSymbol::identity()).matrix(), mat({{0, 0}, {1, 0}}), 1e-14);
  const auto zbar = BoundaryFunction::sample(B.grid(), [](cplx z) { return std::conj(z); });
  EXPECT_MAT_NEAR(tto_matrix(B, zbar).matrix(), mat({{0, 1}, {0, 0}}), 1e-14);
}

TEST(TtoMatrix, AdjointIsConjugateSymbol) {
  const ModelSpaceBasis B(kGeneric);
  const auto phi = BoundaryFunction::sample(B.grid(), [](cplx z) { return std::exp(z) + 2.0 * std::conj(z * z); });
  EXPECT_MAT_NEAR(tto_matrix(B, phi).matrix().adjoint(), tto_matrix(B, phi.conj()).matrix(), 1e-12);
}

TEST(TtoMatrix, CSymmetric) {
  const ModelSpaceBasis B(kGeneric);
  const auto phi = BoundaryFunction::sample(B.grid(), [](cplx z) { return std::exp(z) + 2.0 * std::conj(z * z); });
  EXPECT_LT(c_symmetry_residual(B, tto_matrix(B, phi)), 1e-12);
}

TEST(OperatorMatrix, BasisMismatchIsRejected) {
  const ModelSpaceBasis B2(BlaschkeProduct::monomial(2));
  const ModelSpaceBasis B2b(BlaschkeProduct::from_points({0.1, 0.2}));
  EXPECT_THROW(compressed_shift(B2) * compressed_shift(B2b), basis_mismatch_error);
  EXPECT_THROW(compressed_shift(B2) + compressed_shift(B2b), basis_mismatch_error);
}

TEST(SedlockOperator, Examples) {
  const ModelSpaceBasis B3(BlaschkeProduct::monomial(3));
  const KuVector zero{Eigen::VectorXcd::Zero(3)};
  for (cplx a : {cplx(0.0), cplx(0.4), cplx(0.0, 3.0)})
    EXPECT_MAT_NEAR(sedlock_operator(B3, zero, a, 1.0).matrix(), Eigen::MatrixXcd::Identity(3, 3), 1e-14);

  const ModelSpaceBasis B2(BlaschkeProduct::monomial(2));
  EXPECT_MAT_NEAR(sedlock_operator(B2, {mat({{0}, {1}})}, 0.0, 0.0).matrix(), mat({{0, 0}, {1, 0}}), 1e-14);

  const KuVector phi{mat({{cplx(0.2, 0.1)}, {cplx(-1.0, 0.5)}, {cplx(0.7, 0.0)}})};
  const auto a = sedlock_operator(B3, phi, 0.4, 0.0).matrix();
  EXPECT_LT(op_norm(commutator(a, modified_shift(B3, 0.4).matrix())), 1e-9);
}

TEST(SedlockOperator, CommutesForGenericU) {
  const ModelSpaceBasis B(kGeneric);
  const KuVector phi{mat({{cplx(0.2, 0.1)}, {cplx(-1.0, 0.5)}, {0.7}, {cplx(0.0, 1.0)}})};
  for (cplx a : {cplx(0.3, -0.2), std::polar(1.0, 2.0), cplx(1.5, 2.0)})
    EXPECT_LT(op_norm(commutator(sedlock_operator(B, phi, a, 0.5).matrix(), class_shift(B, SedlockParameter::finite(a)).matrix())), 1e-9);
}

TEST(Crofoot, Examples) {
  const ModelSpaceBasis B2(BlaschkeProduct::monomial(2));
  EXPECT_MAT_NEAR(crofoot(B2, 0.0).map.matrix(), Eigen::MatrixXcd::Identity(2, 2), 1e-14);

  const auto j = crofoot(B2, 0.25).map.matrix();
  EXPECT_LT(op_norm(j.adjoint() * j - Eigen::MatrixXcd::Identity(2, 2)), 1e-9);

  const ModelSpaceBasis B3(BlaschkeProduct::monomial(3));
  const auto cf = crofoot(B3, 0.5);
  const Eigen::MatrixXcd& m = cf.map.matrix();
  EXPECT_LT(op_norm(m.inverse() * modified_shift(B3, 0.5).matrix() * m - compressed_shift(cf.shifted_basis).matrix()), 1e-9);
}

TEST(Crofoot, ConjugationIdentity) {
  const ModelSpaceBasis B(kGeneric);
  const cplx a(0.3, -0.4);
  const auto cf = crofoot(B, a);
  const Eigen::MatrixXcd& j = cf.map.matrix();
  EXPECT_LT(op_norm(conjugation_matrix(B) * j.conjugate() - j * conjugation_matrix(cf.shifted_basis)), 1e-9);
  EXPECT_THROW(crofoot(B, 1.0), invariant_error);
}

TEST(QuotientOperator, Examples) {
  const ModelSpaceBasis B3(BlaschkeProduct::monomial(3));
  EXPECT_MAT_NEAR(quotient_operator(B3, RationalSymbol::constant(1.0), 0.0).matrix(), Eigen::MatrixXcd::Identity(3, 3), 1e-14);
  EXPECT_MAT_NEAR(quotient_operator(B3, RationalSymbol(Polynomial({2, 1})), 0.0).matrix(),
                  2.0 * Eigen::MatrixXcd::Identity(3, 3) + lower_shift(3), 1e-14);

  const ModelSpaceBasis B2(BlaschkeProduct::monomial(2));
  const RationalSymbol phi(Polynomial({2, 1}), Polynomial({1, -0.5}));
  EXPECT_LT(op_norm(quotient_operator(B2, phi, 0.0).matrix() - tto_matrix(B2, phi).matrix()), 1e-8);
}

TEST(QuotientOperator, AgreesWithWeightedTto) {
  const ModelSpaceBasis B(kGeneric);
  const RationalSymbol phi(Polynomial({0.3, cplx(1.0, -2.0), 0.5}), Polynomial({1.0, cplx(-0.2, 0.3)}));
  const cplx a(0.2, 0.5);
  const auto w = BoundaryFunction::sample(B.grid(), [&](cplx z) { return 1.0 / (1.0 - a * std::conj(kGeneric(z))); });
  EXPECT_LT(op_norm(quotient_operator(B, phi, a).matrix() - tto_matrix(B, phi.sample(B.grid()) * w).matrix()), 1e-8);
}

TEST(QuotientOperator, InteriorPoleMatchesPairRoute) {
  const ModelSpaceBasis B(kGeneric);
  const cplx a(-0.3, 0.1);
  const RationalSymbol phi(Polynomial({2, 1}), Polynomial({cplx(-0.1, 0.05), 1}));
  const auto form = smirnov_representation(phi, B.grid());
  EXPECT_LT(op_norm(quotient_operator(B, phi, a).matrix() - pair_quotient_operator(B, form, a).matrix()), 1e-8);
}

TEST(QuotientOperator, GcidViolation) {
  const ModelSpaceBasis B(BlaschkeProduct::monomial(2));
  const RationalSymbol over_z(Polynomial({2, 1}), Polynomial({0, 1}));
  EXPECT_THROW(quotient_operator(B, over_z, 0.0), singular_denominator_error);
}

TEST(AdjointClassOperator, Examples) {
  const ModelSpaceBasis B2(BlaschkeProduct::monomial(2));
  EXPECT_MAT_NEAR(adjoint_class_operator(B2, RationalSymbol::constant(1.0), SedlockParameter::finite(4.0)).matrix(),
                  Eigen::MatrixXcd::Identity(2, 2), 1e-14);
  const auto a = adjoint_class_operator(B2, RationalSymbol::identity(), SedlockParameter::finite(4.0));
  EXPECT_MAT_NEAR(a.matrix(), modified_shift(B2, 0.25).matrix().adjoint(), 1e-14);
  EXPECT_LT(op_norm(commutator(a.matrix(), class_shift(B2, SedlockParameter::finite(4.0)).matrix())), 1e-9);

  const ModelSpaceBasis B3(BlaschkeProduct::monomial(3));
  const RationalSymbol phi(Polynomial({1, cplx(0.0, 2.0), 0.5}));
  const auto ai = adjoint_class_operator(B3, phi, SedlockParameter::infinity());
  EXPECT_MAT_NEAR(ai.matrix(), evaluate_polynomial(Polynomial({1, cplx(0.0, -2.0), 0.5}), lower_shift(3).adjoint()), 1e-13);
  EXPECT_THROW(adjoint_class_operator(B3, phi, SedlockParameter::finite(0.5)), invariant_error);
}

TEST(SedlockParameter, Regimes) {
  using R = SedlockParameter::Regime;
  EXPECT_EQ(SedlockParameter::finite(0.5).regime(), R::inside);
  EXPECT_EQ(SedlockParameter::finite(std::polar(1.0, 0.3)).regime(), R::boundary);
  EXPECT_EQ(SedlockParameter::finite(2.0).regime(), R::outside);
  EXPECT_EQ(SedlockParameter::infinity().regime(), R::infinity);
  EXPECT_TRUE(SedlockParameter::finite(0.0).reflected().is_infinite());
  EXPECT_CPLX_NEAR(SedlockParameter::infinity().reflected().value(), 0.0, 0.0);
  EXPECT_CPLX_NEAR(SedlockParameter::finite(cplx(0.0, 2.0)).reflected().value(), cplx(0.0, 0.5), 1e-15);
  EXPECT_THROW(SedlockParameter::finite(cplx(INFINITY, 0.0)), invariant_error);
}

TEST(SedlockMembership, Examples) {
  const ModelSpaceBasis B(kGeneric);
  EXPECT_EQ(sedlock_membership(OperatorMatrix::identity(B), B).kind, SedlockClassification::Kind::all);
  const auto s = sedlock_membership(compressed_shift(B), B);
  ASSERT_EQ(s.kind, SedlockClassification::Kind::set);
  EXPECT_TRUE(s.contains(SedlockParameter::finite(0.0)));
  EXPECT_FALSE(s.contains(SedlockParameter::infinity()));
  const auto si = sedlock_membership(compressed_shift(B).adjoint(), B);
  EXPECT_TRUE(si.contains(SedlockParameter::infinity()));
  EXPECT_FALSE(si.contains(SedlockParameter::finite(0.0)));
}

TEST(SedlockMembership, RecoversEachRegime) {
  const ModelSpaceBasis B(kGeneric);
  for (const auto& a : {SedlockParameter::finite(cplx(0.3, -0.4)), SedlockParameter::finite(std::polar(1.0, 2.2)),
                        SedlockParameter::finite(cplx(1.5, 2.0))}) {
    const KuVector phi{mat({{cplx(0.2, 0.1)}, {cplx(-1.0, 0.5)}, {0.7}, {cplx(0.0, 1.0)}})};
    const auto A = sedlock_operator(B, phi, a.value(), 0.0);
    const auto cls = sedlock_membership(A, B);
    EXPECT_TRUE(cls.contains(a)) << a.to_string();
  }
}

TEST(SedlockMembership, GenericMatrixBelongsNowhere) {
  const ModelSpaceBasis B(kGeneric);
  Eigen::MatrixXcd m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = cplx(std::sin(1.0 + i + 3 * j), std::cos(2.0 * i - j));
  EXPECT_EQ(sedlock_membership(OperatorMatrix(m, B.tag()), B).kind, SedlockClassification::Kind::none);
}
