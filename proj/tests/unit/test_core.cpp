#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "bergtoep/bergman.hpp"
#include "bergtoep/errors.hpp"
#include "bergtoep/hermitian.hpp"
#include "bergtoep/random.hpp"
#include "support.hpp"

using namespace bergtoep;
using test_support::check_close;
using test_support::mat2;

namespace {

const Cx I(0.0, 1.0);

HermitianMatrix random_psd(Rng& rng, std::size_t n, double shift) {
  const PolyMatrixSymbol s = random_symbol(rng, n, 0);
  CMatrix a = s(0.0);
  return HermitianMatrix(CMatrix(a.adjoint() * a + shift * CMatrix::Identity(a.rows(), a.cols())));
}

}  // namespace

TEST_CASE("monomial_inner closed forms") {
  check_close(monomial_inner(3, 3, 0), 0.25, 1e-15);
  check_close(monomial_inner(2, 5, 1), 0.0, 0.0);
  check_close(monomial_inner(1, 1, 2), 1.0 / 12.0, 1e-15);
}

TEST_CASE("series_inner") {
  check_close(series_inner(PowerSeries{1.0}, PowerSeries{1.0}), 1.0, 1e-15);
  check_close(series_inner(PowerSeries::monomial(1), PowerSeries::monomial(1)), 0.5, 1e-15);
  check_close(series_inner(PowerSeries{1.0, 1.0}, PowerSeries{1.0, -1.0}), 0.5, 1e-15);
  // conjugate symmetry
  Rng rng(11);
  const PowerSeries f = random_series(rng, 5);
  const PowerSeries g = random_series(rng, 7);
  check_close(series_inner(f, g), std::conj(series_inner(g, f)), 1e-14);
}

TEST_CASE("normalized monomials are orthonormal up to degree 40") {
  double worst = 0.0;
  for (std::size_t a = 0; a <= 40; ++a)
    for (std::size_t b = 0; b <= 40; ++b) {
      const Cx v = series_inner(PowerSeries::monomial(a, std::sqrt(a + 1.0)), PowerSeries::monomial(b, std::sqrt(b + 1.0)));
      worst = std::max(worst, std::abs(v - (a == b ? 1.0 : 0.0)));
    }
  CHECK(worst <= 1e-14);
}

TEST_CASE("inner product formula") {
  SUBCASE("monomials collapse to 1/(a+1)") {
    for (std::size_t a = 0; a <= 20; ++a) {
      const VectorPoly f = VectorPoly::unit_monomial(2, 0, a);
      const IpFormulaResult r = ip_via_derivative_formula(f, f);
      CHECK(std::abs(r.lhs - 1.0 / (a + 1.0)) <= 1e-15);
      CHECK(r.residual <= 1e-12);
    }
  }
  SUBCASE("zero vectors") {
    const IpFormulaResult r = ip_via_derivative_formula(VectorPoly::zero(3), VectorPoly::zero(3));
    CHECK(r.lhs == Cx(0.0));
    CHECK(r.rhs == Cx(0.0));
    CHECK(r.residual == 0.0);
  }
  SUBCASE("random degree-6 vectors") {
    Rng rng(12);
    for (int t = 0; t < 20; ++t) {
      const VectorPoly f = random_vector(rng, 3, 6);
      const VectorPoly g = random_vector(rng, 3, 6);
      CHECK(ip_via_derivative_formula(f, g).residual <= 1e-12);
    }
  }
}

TEST_CASE("gram_at") {
  check_close(gram_at(PolyMatrixSymbol::identity(2), Cx(0.3, -0.2)).matrix(), CMatrix::Identity(2, 2), 1e-15);
  check_close(gram_at(PolyMatrixSymbol::scalar(PowerSeries::monomial(1)), 0.5).matrix()(0, 0), 0.25, 1e-15);
  const PolyMatrixSymbol f(2, {PowerSeries{1.0}, PowerSeries::monomial(1), PowerSeries{0.0}, PowerSeries{1.0}});
  check_close(gram_at(f, 0.5 * I).matrix(), mat2(1.0, 0.5 * I, -0.5 * I, 1.25), 1e-15);

  Rng rng(13);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const PolyMatrixSymbol s = random_symbol(rng, random_index(rng, 1, 3), random_index(rng, 0, 4));
    worst = std::min(worst, gram_at(s, random_disk_point(rng, 0.99)).min_eigenvalue());
  }
  CHECK(worst >= -1e-12);
}

TEST_CASE("inverse_gram_at") {
  check_close(inverse_gram_at(PolyMatrixSymbol::identity(2), 0.4).matrix(), CMatrix::Identity(2, 2), 1e-15);
  const PolyMatrixSymbol two = PolyMatrixSymbol::diagonal({PowerSeries{2.0}, PowerSeries{2.0}});
  check_close(inverse_gram_at(two, Cx(0.1, 0.7)).matrix(), CMatrix::Identity(2, 2) * 0.25, 1e-15);
  const PolyMatrixSymbol f(2, {PowerSeries{1.0}, PowerSeries::monomial(1), PowerSeries{0.0}, PowerSeries{1.0}});
  check_close(inverse_gram_at(f, 0.0).matrix(), CMatrix::Identity(2, 2), 1e-15);
  check_close(inverse_gram_at(f, 0.5).matrix(), mat2(1.25, -0.5, -0.5, 1.0), 1e-14);

  const PolyMatrixSymbol z = PolyMatrixSymbol::scalar(PowerSeries::monomial(1));
  try {
    inverse_gram_at(z, 0.0);
    FAIL("expected SingularSymbolError");
  } catch (const SingularSymbolError& e) {
    CHECK(e.code() == ErrorCode::SingularSymbol);
    CHECK(e.point() == Cx(0.0));
  }
}

TEST_CASE("jacobi_eigen agrees with Eigen's solver") {
  Rng rng(14);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = random_index(rng, 1, 6);
    const HermitianMatrix a(random_symbol(rng, n, 0)(0.0));
    const EigenDecomposition d = a.eigen();
    Eigen::SelfAdjointEigenSolver<CMatrix> ref(a.matrix());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(d.values[i] - ref.eigenvalues()(static_cast<Eigen::Index>(i))) <= 1e-11);
    // A V = V diag(values)
    CMatrix lam = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) lam(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d.values[i];
    check_close(a.matrix() * d.vectors, d.vectors * lam, 1e-11);
  }
}

TEST_CASE("hermitian_power") {
  check_close(hermitian_power(HermitianMatrix::identity(3), 1.5).matrix(), CMatrix::Identity(3, 3), 1e-14);
  check_close(hermitian_power(HermitianMatrix::diagonal({4.0, 9.0}), 0.5).matrix(),
              HermitianMatrix::diagonal({2.0, 3.0}).matrix(), 1e-14);
  check_close(hermitian_power(HermitianMatrix(mat2(2.0, 1.0, 1.0, 2.0)), 2.0).matrix(), mat2(5.0, 4.0, 4.0, 5.0), 1e-13);
  CHECK_THROWS_AS(hermitian_power(HermitianMatrix::diagonal({1.0, -1e-6}), 0.5), NotPsdError);
  // tiny negative eigenvalues are clamped
  CHECK(hermitian_power(HermitianMatrix::diagonal({1.0, -1e-11}), 0.5).min_eigenvalue() == doctest::Approx(0.0));

  Rng rng(15);
  for (int t = 0; t < 50; ++t) {
    const HermitianMatrix a = random_psd(rng, random_index(rng, 1, 4), 1e-3);
    check_close(hermitian_power(a, 1.0).matrix(), a.matrix(), 1e-12);
    const double p = 0.3 + 2.0 * static_cast<double>(t) / 50.0;
    check_close(hermitian_power(hermitian_power(a, p), 1.0 / p).matrix(), a.matrix(), 1e-9);
  }
}

TEST_CASE("hermitian_order") {
  CHECK(hermitian_order(HermitianMatrix(2), HermitianMatrix::identity(2), 0.0));
  CHECK_FALSE(hermitian_order(HermitianMatrix::diagonal({2.0, 0.0}), HermitianMatrix::diagonal({1.0, 1.0}), 1e-12));
  CHECK(hermitian_order(HermitianMatrix(mat2(1.0, 1.0, 1.0, 1.0)), HermitianMatrix::identity(2) * 2.0, 1e-12));

  Rng rng(16);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = random_index(rng, 1, 4);
    const HermitianMatrix a = random_psd(rng, n, 0.0);
    const HermitianMatrix b = a + random_psd(rng, n, 0.0);
    const HermitianMatrix c = b + random_psd(rng, n, 0.0);
    CHECK(hermitian_order(a, a, 1e-12));
    CHECK(hermitian_order(a, b, 1e-12));
    CHECK(hermitian_order(b, c, 1e-12));
    CHECK(hermitian_order(a, c, 1e-12));
    // antisymmetry: a <= b and b <= a only when they coincide
    if (hermitian_order(b, a, 1e-12)) CHECK(test_support::max_abs_diff(a.matrix(), b.matrix()) <= 1e-10);
  }
}

TEST_CASE("sqrt_product_norm") {
  CHECK(sqrt_product_norm(HermitianMatrix::identity(2), HermitianMatrix::identity(2)) == doctest::Approx(1.0));
  CHECK(sqrt_product_norm(HermitianMatrix::diagonal({4.0, 1.0}), HermitianMatrix::diagonal({1.0, 9.0})) ==
        doctest::Approx(3.0));
}

TEST_CASE("power series and symbol plumbing") {
  const PowerSeries f{1.0, 2.0, 3.0};
  check_close(f(2.0), 17.0, 1e-14);
  check_close(f.derivative()(1.0), 8.0, 1e-14);
  CHECK(PowerSeries{0.0, 0.0}.is_zero());
  CHECK(PowerSeries{0.0, 0.0}.degree() == 1);
  CHECK_THROWS_AS(PolyMatrixSymbol(2, {PowerSeries{1.0}}), DimensionMismatchError);
  const VectorPoly v = VectorPoly::unit_monomial(3, 1, 2);
  CHECK(v.degree() == 2);
  check_close(v(0.5)(1), 0.25, 1e-15);
  check_close(v.derivative()(0.5)(1), 1.0, 1e-15);
}
