#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"
#include "tto/modelspace.hpp"

using namespace tto;
using tto::testing::mat;

TEST(TmBasis, MonomialsForZerosAtOrigin) {
  for (int n : {2, 3}) {
    const ModelSpaceBasis B(BlaschkeProduct::monomial(n));
    for (int k = 0; k < n; ++k) {
      const auto e = B.basis_function(k);
      for (int j = 0; j < B.grid().size(); j += 37) EXPECT_CPLX_NEAR(e.values()(j), std::pow(B.grid().point(j), k), 1e-14);
    }
  }
}

TEST(TmBasis, SingleZero) {
  const ModelSpaceBasis B(BlaschkeProduct::from_points({0.5}));
  const auto e = B.basis_function(0);
  EXPECT_NEAR(grid_norm(e), 1.0, 1e-14);
  const cplx z = B.grid().point(11);
  EXPECT_CPLX_NEAR(e.values()(11), std::sqrt(0.75) / (1.0 - 0.5 * z), 1e-14);
}

TEST(TmBasis, OrthonormalAndAnalytic) {
  const ModelSpaceBasis B(BlaschkeProduct({{{0.6, 0.2}, 2}, {{-0.1, -0.7}, 1}, {{0.0, 0.3}, 1}}));
  const Eigen::MatrixXcd g = B.samples().adjoint() * B.samples() / static_cast<double>(B.grid().size());
  EXPECT_MAT_NEAR(g, Eigen::MatrixXcd::Identity(4, 4), 1e-12);
  for (int k = 0; k < 4; ++k) EXPECT_LT(negative_content(B.basis_function(k)), 1e-12);
}

TEST(TmBasis, UnresolvedZeroIsRejected) {
  EXPECT_THROW(ModelSpaceBasis(BlaschkeProduct::from_points({0.9999})), numerical_error);
}

TEST(ReproducingKernel, Examples) {
  const ModelSpaceBasis B2(BlaschkeProduct::monomial(2));
  const auto k0 = reproducing_kernel(B2, 0.0);
  EXPECT_MAT_NEAR(k0.coeffs, mat({{1.0}, {0.0}}), 1e-14);

  const ModelSpaceBasis B1(BlaschkeProduct::monomial(1));
  EXPECT_MAT_NEAR(reproducing_kernel(B1, 0.3).coeffs, mat({{1.0}}), 1e-14);

  const ModelSpaceBasis B3(BlaschkeProduct::monomial(3));
  EXPECT_MAT_NEAR(reproducing_kernel(B3, 0.2).coeffs, mat({{1.0}, {0.2}, {0.04}}), 1e-14);
  const cplx lam(0.1, 0.2);
  EXPECT_MAT_NEAR(reproducing_kernel(B3, lam).coeffs, mat({{1.0}, {std::conj(lam)}, {std::conj(lam * lam)}}), 1e-14);
}

TEST(ReproducingKernel, Reproduces) {
  const ModelSpaceBasis B(BlaschkeProduct({{{0.6, 0.2}, 2}, {{-0.1, -0.7}, 1}}));
  const KuVector f{mat({{cplx(0.3, 1.0)}, {-2.0}, {cplx(0.0, 0.5)}})};
  for (cplx lam : {cplx(0.0), cplx(0.4, -0.3), cplx(-0.8, 0.1)})
    EXPECT_CPLX_NEAR(ku_inner(f, reproducing_kernel(B, lam)), B.evaluate(f, lam), 1e-13);
}

TEST(Conjugation, Examples) {
  const ModelSpaceBasis B2(BlaschkeProduct::monomial(2));
  EXPECT_MAT_NEAR(conjugate(B2, {mat({{1.0}, {0.0}})}).coeffs, mat({{0.0}, {1.0}}), 1e-14);
  EXPECT_MAT_NEAR(conjugate(B2, {mat({{0.0}, {1.0}})}).coeffs, mat({{1.0}, {0.0}}), 1e-14);
  const ModelSpaceBasis B1(BlaschkeProduct::monomial(1));
  EXPECT_MAT_NEAR(conjugate(B1, {mat({{1.0}})}).coeffs, mat({{1.0}}), 1e-14);
}

TEST(Conjugation, InvolutiveIsometry) {
  const ModelSpaceBasis B(BlaschkeProduct({{{0.6, 0.2}, 2}, {{-0.1, -0.7}, 1}}, std::polar(1.0, 2.0)));
  const KuVector f{mat({{cplx(0.3, 1.0)}, {-2.0}, {cplx(0.0, 0.5)}})};
  const KuVector g{mat({{0.1}, {cplx(1.0, 1.0)}, {cplx(0.2, -0.5)}})};
  EXPECT_MAT_NEAR(conjugate(B, conjugate(B, f)).coeffs, f.coeffs, 1e-13);
  // <Cf, Cg> = <g, f>
  EXPECT_CPLX_NEAR(ku_inner(conjugate(B, f), conjugate(B, g)), ku_inner(g, f), 1e-13);
}

TEST(ProjectKu, Examples) {
  const ModelSpaceBasis B2(BlaschkeProduct::monomial(2));
  const auto z3 = BoundaryFunction::sample(B2.grid(), [](cplx z) { return z * z * z; });
  EXPECT_LT(project_Ku(B2, z3).coeffs.norm(), 1e-14);
  const auto poly = BoundaryFunction::sample(B2.grid(), [](cplx z) { return 1.0 + z + z * z; });
  EXPECT_MAT_NEAR(project_Ku(B2, poly).coeffs, mat({{1.0}, {1.0}}), 1e-14);

  const ModelSpaceBasis B(BlaschkeProduct::from_points({0.3, cplx(0.1, -0.5)}));
  EXPECT_MAT_NEAR(project_Ku(B, B.basis_function(0)).coeffs, mat({{1.0}, {0.0}}), 1e-13);
}

TEST(ProjectKu, KillsMultiplesOfU) {
  const auto u = BlaschkeProduct({{{0.6, 0.2}, 2}, {{-0.1, -0.7}, 1}});
  const ModelSpaceBasis B(u);
  const auto f = BoundaryFunction::sample(B.grid(), [&](cplx z) { return u(z) * (1.0 + 0.5 * z) / (1.0 - 0.2 * z); });
  EXPECT_LT(ku_residual(B, f), 1e-13);
  EXPECT_TRUE(divides(B, f));
  const auto g = BoundaryFunction::sample(B.grid(), [](cplx z) { return 1.0 + z; });
  EXPECT_FALSE(divides(B, g));
}
