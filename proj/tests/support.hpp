#pragma once

#include <complex>
#include <initializer_list>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "tto/poly.hpp"

namespace tto::testing {

inline Eigen::MatrixXcd mat(std::initializer_list<std::initializer_list<cplx>> rows) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const cplx& x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace tto::testing

#define EXPECT_MAT_NEAR(a, b, tol) EXPECT_LE(::tto::testing::max_abs_diff((a), (b)), (tol))
#define EXPECT_CPLX_NEAR(a, b, tol) EXPECT_LE(std::abs(::tto::cplx(a) - ::tto::cplx(b)), (tol))
