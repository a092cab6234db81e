#pragma once

#include <doctest.h>

#include <cmath>
#include <complex>

#include "bergtoep/hermitian.hpp"

namespace test_support {

using bergtoep::CMatrix;
using bergtoep::Cx;

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline void check_close(Cx a, Cx b, double tol) { CHECK(std::abs(a - b) <= tol); }

inline void check_close(const CMatrix& a, const CMatrix& b, double tol) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  CHECK(max_abs_diff(a, b) <= tol);
}

inline CMatrix mat2(Cx a, Cx b, Cx c, Cx d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace test_support
