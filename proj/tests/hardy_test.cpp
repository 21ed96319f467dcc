#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"
#include "tto/hardy.hpp"

using namespace tto;

namespace {
const BoundaryGrid grid{};

BoundaryFunction f_of(cplx (*f)(cplx)) { return BoundaryFunction::sample(grid, f); }
}  // namespace

TEST(BoundaryGrid, Validation) {
  EXPECT_THROW(BoundaryGrid(100), invariant_error);
  EXPECT_THROW(BoundaryGrid(128), invariant_error);
  EXPECT_NO_THROW(BoundaryGrid(256));
  EXPECT_THROW(BoundaryGrid(256).require_resolves(64), invariant_error);
}

TEST(Riesz, Examples) {
  const auto zbar = f_of([](cplx z) { return std::conj(z); });
  EXPECT_LT(grid_norm(riesz_project(zbar)), 1e-15);
  const auto z = f_of([](cplx w) { return w; });
  EXPECT_LT(grid_norm(riesz_project(z) - z), 1e-14);
  const auto mixed = f_of([](cplx w) { return 1.0 + std::conj(w); });
  EXPECT_LT(grid_norm(riesz_project(mixed) - BoundaryFunction::constant(grid, 1.0)), 1e-14);
}

TEST(Riesz, FourierRoundTrip) {
  const auto f = f_of([](cplx w) { return std::exp(w) + 0.3 * std::conj(w * w); });
  EXPECT_LT(grid_norm(from_fourier_coefficients(grid, fourier_coefficients(f)) - f), 1e-14);
  EXPECT_NEAR(negative_content(f), 0.3 / grid_norm(f), 1e-12);
}

TEST(Outer, Examples) {
  const auto one = outer_from_modulus(BoundaryFunction::constant(grid, 1.0));
  EXPECT_LT(grid_norm(one - BoundaryFunction::constant(grid, 1.0)), 1e-14);

  const auto w = f_of([](cplx z) { return cplx(std::abs(2.0 + z)); });
  const auto o = outer_from_modulus(w);
  EXPECT_LT(grid_norm(o - f_of([](cplx z) { return 2.0 + z; })), 1e-12);
  EXPECT_CPLX_NEAR(value_at_origin(o), 2.0, 1e-12);

  const auto w2 = f_of([](cplx z) { return cplx(std::abs(z - 2.0)); });
  const auto o2 = outer_from_modulus(w2);
  EXPECT_CPLX_NEAR(value_at_origin(o2), 2.0, 1e-12);
  EXPECT_LT((o2.values().cwiseAbs() - w2.values().real()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(negative_content(o2), 1e-12);
}

TEST(Outer, RejectsNonPositive) {
  const auto w = f_of([](cplx z) { return cplx(std::abs(1.0 - z)); });  // vanishes at z = 1
  EXPECT_THROW(outer_from_modulus(w), positivity_error);
}

TEST(CanonicalPair, Examples) {
  const auto p0 = canonical_pair(RationalSymbol(), grid);
  EXPECT_LT(grid_norm(p0.a - BoundaryFunction::constant(grid, 1.0)), 1e-14);
  EXPECT_LT(grid_norm(p0.b), 1e-15);

  const cplx c(1.0, 2.0);
  const auto pc = canonical_pair(RationalSymbol::constant(c), grid);
  const double s = 1.0 / std::sqrt(1.0 + std::norm(c));
  EXPECT_LT(grid_norm(pc.a - BoundaryFunction::constant(grid, s)), 1e-13);
  EXPECT_LT(grid_norm(pc.b - BoundaryFunction::constant(grid, c * s)), 1e-13);

  const auto pz = canonical_pair(RationalSymbol::identity(), grid);
  EXPECT_LT(grid_norm(pz.a - BoundaryFunction::constant(grid, 1.0 / std::sqrt(2.0))), 1e-13);
  EXPECT_LT(grid_norm(pz.b - (1.0 / std::sqrt(2.0)) * f_of([](cplx z) { return z; })), 1e-13);
  EXPECT_NEAR(pz.a0, 1.0 / std::sqrt(2.0), 1e-13);
}

TEST(CanonicalPair, GeneralSymbolIdentities) {
  const RationalSymbol phi(Polynomial({0.3, cplx(1.0, -2.0), 0.5}), Polynomial({1.0, cplx(-0.2, 0.3)}));
  const auto p = canonical_pair(phi, grid);
  EXPECT_LT((p.a.values().array().abs2() + p.b.values().array().abs2() - 1.0).abs().maxCoeff(), 1e-10);
  EXPECT_LT(grid_norm(p.b - phi.sample(grid) * p.a), 1e-12);
  EXPECT_LT(negative_content(p.a), 1e-10);
  EXPECT_LT(negative_content(p.b), 1e-10);
  EXPECT_GT(p.a0, 0.0);
}

TEST(CanonicalPair, RejectsInteriorPoles) {
  EXPECT_THROW(canonical_pair(RationalSymbol(Polynomial({1.0}), Polynomial({-0.5, 1.0})), grid), precondition_error);
}

TEST(InnerOuterSplit, Examples) {
  {
    const auto [in, out] = inner_outer_split(RationalSymbol(Polynomial({0, 0, 1})));
    EXPECT_EQ(in.degree(), 2);
    EXPECT_LT(std::abs(out(0.3) - 1.0), 1e-14);
  }
  {
    const auto [in, out] = inner_outer_split(RationalSymbol(Polynomial({2, 1})));
    EXPECT_EQ(in.degree(), 0);
    EXPECT_LT(std::abs(out(0.3) - 2.3), 1e-14);
  }
  {
    const auto [in, out] = inner_outer_split(RationalSymbol(Polynomial({0, 2, 1})));
    EXPECT_EQ(in.degree(), 1);
    EXPECT_LT(std::abs(out(0.3) - 2.3), 1e-13);
  }
  EXPECT_THROW(inner_outer_split(RationalSymbol()), degenerate_input_error);
}

TEST(InnerOuterSplit, ProductRecoversSymbol) {
  const RationalSymbol f(Polynomial::from_roots(std::vector<cplx>{{0.4, 0.2}, {-1.7, 0.5}, {0.1, -0.6}}),
                         Polynomial({1.0, 0.25}));
  const auto [in, out] = inner_outer_split(f);
  EXPECT_EQ(in.degree(), 2);
  for (int k = 0; k < 20; ++k) {
    const cplx z = std::polar(1.0, 0.31 * k);
    EXPECT_LT(std::abs(in(z) * out(z) - f(z)), 1e-12);
  }
}

TEST(LocalSmirnov, Examples) {
  const RationalSymbol outer_den(Polynomial({1.0}), Polynomial({1.0, -0.5}));
  EXPECT_TRUE(local_smirnov_check(outer_den, BlaschkeProduct::monomial(2)));
  EXPECT_TRUE(local_smirnov_check(outer_den, BlaschkeProduct::from_points({0.5})));

  const RationalSymbol over_z(Polynomial({2, 1}), Polynomial({0, 1}));
  EXPECT_FALSE(local_smirnov_check(over_z, BlaschkeProduct::monomial(2)));

  // (2 + z) (1 - 0.5 z) / (z - 0.5): inner factor of the denominator has its zero at 0.5.
  const RationalSymbol third(Polynomial({2, 1}) * Polynomial({1, -0.5}), Polynomial({-0.5, 1}));
  EXPECT_TRUE(local_smirnov_check(third, BlaschkeProduct::monomial(3)));
  EXPECT_FALSE(local_smirnov_check(third, BlaschkeProduct::from_points({0.5, 0.0})));
}

TEST(LocalSmirnov, CancelledPoleIsNotAPole) {
  const RationalSymbol cancelled(Polynomial({0, 1}) * Polynomial({2, 1}), Polynomial({0, 1}));
  EXPECT_TRUE(local_smirnov_check(cancelled, BlaschkeProduct::monomial(2)));
}

TEST(SmirnovRepresentation, LocalForm) {
  const RationalSymbol phi(Polynomial({2, 1}), Polynomial({-0.5, 1}) * Polynomial({1, -0.4}));
  const auto form = smirnov_representation(phi, grid);
  EXPECT_EQ(form.v.degree(), 1);
  const auto vb = sample_blaschke(form.v, grid);
  EXPECT_LT(grid_norm(form.pair.b - phi.sample(grid) * vb * form.pair.a), 1e-11);
}

TEST(RationalSymbol, RejectsPoleOnCircle) {
  EXPECT_THROW(RationalSymbol(Polynomial({1.0}), Polynomial({1.0, -1.0})), invariant_error);
}

TEST(RationalSymbol, DividesRequiresAnalyticSymbol) {
  const auto z3 = BlaschkeProduct::monomial(3);
  EXPECT_TRUE(divides(z3, RationalSymbol(Polynomial({0, 0, 0, 1}), Polynomial({1, 0.2}))));
  EXPECT_THROW(divides(z3, RationalSymbol(Polynomial({1}), Polynomial({-0.5, 1}))), precondition_error);
}
