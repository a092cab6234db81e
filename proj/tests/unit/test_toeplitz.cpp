#include <doctest.h>

#include <cmath>

#include "bergtoep/errors.hpp"
#include "bergtoep/random.hpp"
#include "bergtoep/toeplitz.hpp"
#include "support.hpp"

using namespace bergtoep;
using test_support::check_close;

namespace {

const PowerSeries kZ = PowerSeries::monomial(1);

PolyMatrixSymbol upper_unipotent() {
  return PolyMatrixSymbol(2, {PowerSeries{1.0}, kZ, PowerSeries{0.0}, PowerSeries{1.0}});
}

}  // namespace

TEST_CASE("analytic_toeplitz") {
  SUBCASE("identity symbol") {
    const TruncatedOperator t = analytic_toeplitz(PolyMatrixSymbol::identity(1), 3);
    CHECK(t.k_out() == 3);
    check_close(t.matrix(), CMatrix::Identity(4, 4), 0.0);
  }
  SUBCASE("shift") {
    const TruncatedOperator t = analytic_toeplitz(PolyMatrixSymbol::scalar(kZ), 2);
    CHECK(t.k_out() == 3);
    CMatrix expect = CMatrix::Zero(4, 3);
    for (int k = 0; k <= 2; ++k) expect(k + 1, k) = std::sqrt((k + 1.0) / (k + 2.0));
    check_close(t.matrix(), expect, 1e-15);
  }
  SUBCASE("block upper unipotent") {
    const TruncatedOperator t = analytic_toeplitz(upper_unipotent(), 1);
    // basis order (s, i): (0,0),(0,1),(1,0),(1,1),(2,0),(2,1)
    CMatrix expect = CMatrix::Zero(6, 4);
    expect(0, 0) = 1.0;
    expect(1, 1) = 1.0;
    expect(2, 2) = 1.0;
    expect(3, 3) = 1.0;
    expect(2, 1) = std::sqrt(0.5);        // z e_0 in coordinate 0 from coordinate 1
    expect(4, 3) = std::sqrt(2.0 / 3.0);  // z e_1
    check_close(t.matrix(), expect, 1e-15);
  }
  SUBCASE("matches multiplication") {
    Rng rng(21);
    const PolyMatrixSymbol f = random_symbol(rng, 2, 3);
    const VectorPoly v = random_vector(rng, 2, 4);
    const VectorPoly fv = analytic_toeplitz(f, 4).apply(v);
    const Cx z(0.3, -0.4);
    check_close(fv(z), f(z) * v(z), 1e-12);
  }
}

TEST_CASE("coanalytic_toeplitz") {
  check_close(coanalytic_toeplitz(PolyMatrixSymbol::identity(1), 5).matrix(), CMatrix::Identity(6, 6), 0.0);

  const TruncatedOperator b = coanalytic_toeplitz(PolyMatrixSymbol::scalar(kZ), 2);
  CHECK(b.k_out() == 2);
  CMatrix expect = CMatrix::Zero(3, 3);
  for (int k = 1; k <= 2; ++k) expect(k - 1, k) = std::sqrt(k / (k + 1.0));
  check_close(b.matrix(), expect, 1e-15);

  const TruncatedOperator d = coanalytic_toeplitz(PolyMatrixSymbol::diagonal({kZ, PowerSeries{1.0}}), 2);
  CMatrix de = CMatrix::Zero(6, 6);
  for (int s = 0; s <= 2; ++s) de(2 * s + 1, 2 * s + 1) = 1.0;
  for (int s = 1; s <= 2; ++s) de(2 * (s - 1), 2 * s) = std::sqrt(s / (s + 1.0));
  check_close(d.matrix(), de, 1e-15);

  Rng rng(22);
  for (int t = 0; t < 10; ++t) {
    const PolyMatrixSymbol g = random_symbol(rng, random_index(rng, 1, 3), random_index(rng, 0, 4));
    const std::size_t k = random_index(rng, 0, 8);
    const CMatrix a = analytic_toeplitz(g, k).matrix();
    const auto rows = static_cast<Eigen::Index>(g.dim() * (k + 1));
    check_close(coanalytic_toeplitz(g, k).matrix(), CMatrix(a.topRows(rows).adjoint()), 1e-14);
  }
}

TEST_CASE("product_restricted") {
  check_close(product_restricted(PolyMatrixSymbol::identity(2), PolyMatrixSymbol::identity(2), 3).matrix(),
              CMatrix::Identity(8, 8), 0.0);

  const PolyMatrixSymbol z = PolyMatrixSymbol::scalar(kZ);
  const TruncatedOperator p = product_restricted(z, z, 1);
  CHECK(p.k_out() == 2);
  CHECK(std::abs(p.matrix()(0, 0)) == 0.0);
  CHECK(std::abs(p.matrix()(1, 1) - 0.5) <= 1e-15);
  CHECK(p.matrix().col(0).norm() == 0.0);

  const PolyMatrixSymbol f = PolyMatrixSymbol::scalar(PowerSeries{1.0, 1.0});
  check_close(product_restricted(f, PolyMatrixSymbol::identity(1), 2).matrix(), analytic_toeplitz(f, 2).matrix(), 1e-15);
}

TEST_CASE("operator_norm") {
  CHECK(operator_norm(TruncatedOperator::identity(2, 4)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(operator_norm(analytic_toeplitz(PolyMatrixSymbol::scalar(kZ), 3)) ==
        doctest::Approx(std::sqrt(4.0 / 5.0)).epsilon(1e-8));
  CHECK(operator_norm(TruncatedOperator(1, 3, 3)) == 0.0);

  // deterministic
  Rng rng(23);
  const TruncatedOperator t = product_restricted(random_symbol(rng, 2, 3), random_symbol(rng, 2, 2), 10);
  CHECK(operator_norm(t) == operator_norm(t));
  // against the SVD
  Eigen::JacobiSVD<CMatrix> svd(t.matrix());
  CHECK(operator_norm(t) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-9));
}

TEST_CASE("rank_one") {
  SUBCASE("1 (x) 1 is the projection onto constants") {
    const TruncatedOperator r = rank_one(PolyMatrixSymbol::identity(1), PolyMatrixSymbol::identity(1), 2);
    CMatrix e = CMatrix::Zero(3, 3);
    e(0, 0) = 1.0;
    check_close(r.matrix(), e, 1e-15);
  }
  SUBCASE("z (x) 1 sends e_0 to e_1 / sqrt 2") {
    const TruncatedOperator r = rank_one(PolyMatrixSymbol::scalar(kZ), PolyMatrixSymbol::identity(1), 2);
    CHECK(std::abs(r.matrix()(1, 0) - std::sqrt(0.5)) <= 1e-15);
    CHECK(r.matrix().cwiseAbs().sum() == doctest::Approx(std::sqrt(0.5)));
  }
  SUBCASE("agrees with the definition on basis vectors") {
    Rng rng(24);
    const PolyMatrixSymbol f = random_symbol(rng, 2, 2);
    const PolyMatrixSymbol g = random_symbol(rng, 2, 3);
    const std::size_t k = 4;
    const TruncatedOperator r = rank_one(f, g, k);
    for (std::size_t s = 0; s <= k; ++s)
      for (std::size_t j = 0; j < 2; ++j) {
        const VectorPoly h = VectorPoly::unit_monomial(2, j, s);
        // (F (x) G) h, coordinate i = sum_l <h_j, g_jl> f_il
        const VectorPoly out = r.apply(h);
        for (std::size_t i = 0; i < 2; ++i) {
          PowerSeries expect;
          for (std::size_t l = 0; l < 2; ++l)
            expect = expect + f.entry(i, l) * series_inner(h[j], g.entry(j, l));
          for (std::size_t d = 0; d <= 3; ++d) CHECK(std::abs(out[i].coeff(d) - expect.coeff(d)) <= 1e-14);
        }
      }
  }
}

TEST_CASE("rank_one_trace") {
  CHECK(rank_one_trace(PolyMatrixSymbol::identity(1), PolyMatrixSymbol::identity(1)) == doctest::Approx(1.0));
  const PolyMatrixSymbol z = PolyMatrixSymbol::scalar(kZ);
  CHECK(rank_one_trace(z, z) == doctest::Approx(0.25).epsilon(1e-15));
  // n = 2 identity: both the quadruple sum and the assembled trace give 2
  const PolyMatrixSymbol id2 = PolyMatrixSymbol::identity(2);
  const double assembled = rank_one(id2, id2, 2).compose(rank_one(id2, id2, 2)).matrix().trace().real();
  CHECK(assembled == doctest::Approx(2.0));
  CHECK(rank_one_trace(id2, id2) == doctest::Approx(assembled));

  Rng rng(25);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = random_index(rng, 1, 3);
    const PolyMatrixSymbol f = random_symbol(rng, n, random_index(rng, 0, 4));
    const PolyMatrixSymbol g = random_symbol(rng, n, random_index(rng, 0, 4));
    const std::size_t k = f.degree() + g.degree();
    const double tr = rank_one(f, g, k).compose(rank_one(g, f, k)).matrix().trace().real();
    const double q = rank_one_trace(f, g);
    CHECK(std::abs(tr - q) <= 1e-10 * std::abs(q));

    // norm <= Hilbert-Schmidt <= sqrt(rank) norm
    const double nr = operator_norm(rank_one(f, g, k));
    CHECK(nr * nr <= q + 1e-9);
    CHECK(nr * nr >= q / (static_cast<double>(n * n) * static_cast<double>(std::max(f.degree(), g.degree()) + 1)));
  }
}

TEST_CASE("park identity") {
  const PolyMatrixSymbol one = PolyMatrixSymbol::identity(1);
  const PolyMatrixSymbol z = PolyMatrixSymbol::scalar(kZ);
  CHECK(park_residual(one, one, 8) <= 1e-12);
  CHECK(park_residual(z, one, 8) <= 1e-12);
  CHECK(park_residual(PolyMatrixSymbol::zero(2), PolyMatrixSymbol::zero(2), 6) == 0.0);
  CHECK_THROWS_AS(park_residual(z, z, 5), BufferTooSmallError);

  Rng rng(26);
  for (int t = 0; t < 15; ++t) {
    const std::size_t n = random_index(rng, 1, 3);
    const PolyMatrixSymbol f = random_symbol(rng, n, random_index(rng, 0, 4));
    const PolyMatrixSymbol g = random_symbol(rng, n, random_index(rng, 0, 4));
    CHECK(park_residual(f, g, f.degree() + g.degree() + 6) <= 1e-10);
  }
}

TEST_CASE("truncated norms are nondecreasing in K with warm starts") {
  Rng rng(27);
  for (int t = 0; t < 5; ++t) {
    const PolyMatrixSymbol f = random_symbol(rng, 2, 2);
    const PolyMatrixSymbol g = random_symbol(rng, 2, 2);
    std::optional<CVector> start;
    double prev = 0.0;
    for (std::size_t k : {2, 4, 8, 16}) {
      const TruncatedOperator op = product_restricted(f, g, k);
      if (start) {
        CVector padded = CVector::Zero(op.matrix().cols());
        padded.head(start->size()) = *start;
        start = padded;
      }
      const NormResult r = operator_norm_detailed(op, start);
      CHECK(r.norm >= prev - 1e-12);
      prev = r.norm;
      start = r.right_vector;
    }
  }
}

TEST_CASE("shifts and operator algebra") {
  const TruncatedOperator fwd = shift_forward(1, 3);
  check_close(fwd.matrix(), analytic_toeplitz(PolyMatrixSymbol::scalar(kZ), 3).matrix(), 1e-15);
  const TruncatedOperator bwd = shift_backward(1, 3);
  check_close(bwd.matrix(), coanalytic_toeplitz(PolyMatrixSymbol::scalar(kZ), 3).matrix(), 1e-15);
  Rng rng(28);
  const VectorPoly v = random_vector(rng, 2, 3);
  check_close(to_basis(from_basis(to_basis(v, 5), 2, 5), 5), to_basis(v, 5), 1e-15);
}
