#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bergtoep/berezin.hpp"
#include "bergtoep/errors.hpp"
#include "bergtoep/random.hpp"
#include "bergtoep/toeplitz.hpp"
#include "support.hpp"

using namespace bergtoep;
using test_support::check_close;
using test_support::mat2;

namespace {

const PowerSeries kZ = PowerSeries::monomial(1);

}  // namespace

TEST_CASE("gauss_legendre") {
  const GaussLegendre gl = gauss_legendre(10, 0.0, 1.0);
  double s = 0.0;
  for (double w : gl.weights) s += w;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  // exact for degree 19
  double m = 0.0;
  for (std::size_t i = 0; i < 10; ++i) m += gl.weights[i] * std::pow(gl.nodes[i], 19);
  CHECK(m == doctest::Approx(1.0 / 20.0).epsilon(1e-14));
}

TEST_CASE("QuadratureRule") {
  const QuadratureRule rule(64, 128);
  double s = 0.0;
  for (const auto& nd : rule.nodes()) {
    s += nd.weight;
    CHECK(std::abs(nd.z) < 1.0);
  }
  CHECK(std::abs(s - 1.0) <= 1e-14);
  CHECK_THROWS_AS(QuadratureRule(0, 4), RangeError);
  const QuadratureRule d = QuadratureRule::for_degree(3);
  CHECK(d.n_r() == 64);
  CHECK(d.n_theta() == 88);
}

TEST_CASE("WGrid") {
  const WGrid g(3);
  CHECK(g.rings().size() == 4);
  CHECK(g.points()[0] == Cx(0.0));
  CHECK(g.rings()[1].count == 13);  // ceil(2 pi / 0.5)
  for (const Cx w : g.points()) CHECK(std::abs(w) < 1.0);
  const WGrid capped(10, 64);
  CHECK(capped.rings().back().count == 64);
  CHECK_THROWS_AS(WGrid::from_points({Cx(1.0)}), RangeError);
}

TEST_CASE("mobius and kernels") {
  check_close(mobius(Cx(0.3, 0.2), 0.0), Cx(0.3, 0.2), 1e-16);
  check_close(mobius(Cx(0.3, 0.2), Cx(0.3, 0.2)), 0.0, 1e-16);
  check_close(mobius(0.5, 0.25), 2.0 / 7.0, 1e-15);
  const Cx w(-0.4, 0.5);
  const Cx z(0.1, 0.6);
  check_close(mobius(w, mobius(w, z)), z, 1e-15);

  check_close(normalized_kernel(0.0, z), 1.0, 0.0);
  check_close(normalized_kernel(w, w), 1.0 / (1.0 - std::norm(w)), 1e-14);
  const QuadratureRule rule(64, 512);
  double mass = 0.0;
  for (const auto& nd : rule.nodes()) mass += nd.weight * kernel_weight(0.9, nd.z);
  CHECK(std::abs(mass - 1.0) <= 1e-10);
}

TEST_CASE("berezin_monomial") {
  for (const Cx w : {Cx(0.0), Cx(0.5, 0.1), Cx(-0.9, 0.2), Cx(0.0, 0.999)})
    CHECK(std::abs(berezin_monomial(0, 0, w) - 1.0) <= 1e-12);
  check_close(berezin_monomial(1, 1, 0.0), 0.5, 0.0);
  check_close(berezin_monomial(1, 2, 0.0), 0.0, 0.0);

  const QuadratureRule rule(64, 128);
  Cx q = 0.0;
  for (const auto& nd : rule.nodes()) q += nd.weight * std::norm(nd.z) * kernel_weight(0.6, nd.z);
  check_close(berezin_monomial(1, 1, 0.6), q, 1e-10);

  const Cx w(0.35, -0.5);
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b) {
      check_close(berezin_monomial(a, b, w), std::conj(berezin_monomial(b, a, w)), 1e-14);
      Cx quad = 0.0;
      for (const auto& nd : rule.nodes())
        quad += nd.weight * std::pow(nd.z, static_cast<int>(a)) * std::pow(std::conj(nd.z), static_cast<int>(b)) *
                kernel_weight(w, nd.z);
      check_close(berezin_monomial(a, b, w), quad, 1e-11);
    }
  CHECK_THROWS_AS(berezin_monomial(0, 0, 1.0), RangeError);
}

TEST_CASE("berezin_gram") {
  check_close(berezin_gram(PolyMatrixSymbol::identity(2), Cx(0.7, 0.1)).matrix(), CMatrix::Identity(2, 2), 1e-12);
  check_close(berezin_gram(PolyMatrixSymbol::scalar(kZ), 0.0).matrix()(0, 0), 0.5, 1e-15);
  const PolyMatrixSymbol f(2, {PowerSeries{1.0}, kZ, PowerSeries{0.0}, PowerSeries{1.0}});
  check_close(berezin_gram(f, 0.0).matrix(), mat2(1.0, 0.0, 0.0, 1.5), 1e-15);

  // at w = 0 the transform is the plain integral
  Rng rng(31);
  const PolyMatrixSymbol g = random_symbol(rng, 3, 4);
  const CMatrix b0 = berezin_gram(g, 0.0).matrix();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      Cx e = 0.0;
      for (std::size_t q = 0; q < 3; ++q)
        for (std::size_t s = 0; s <= 4; ++s)
          e += std::conj(g.entry(q, i).coeff(s)) * g.entry(q, j).coeff(s) / (s + 1.0);
      check_close(b0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), e, 1e-13);
    }
}

TEST_CASE("berezin_quadrature") {
  const QuadratureRule rule(64, 128);
  const HermitianMatrix a0(mat2(2.0, Cx(0.0, 1.0), Cx(0.0, -1.0), 3.0));
  check_close(berezin_quadrature(HermitianField::constant(a0), Cx(0.4, 0.3), rule).matrix(), a0.matrix(), 1e-13);
  check_close(berezin_quadrature(HermitianField::gram(PolyMatrixSymbol::scalar(kZ)), 0.0, rule).matrix()(0, 0), 0.5,
              1e-12);

  Rng rng(32);
  const PolyMatrixSymbol f = random_symbol(rng, 2, 3);
  const QuadratureRule fine = berezin_rule_for(3, 0.7);
  check_close(berezin_quadrature(HermitianField::gram(f), 0.7, fine).matrix(), berezin_gram(f, 0.7).matrix(), 1e-9);

  CHECK_THROWS_AS(berezin_quadrature(HermitianField::inverse_gram(PolyMatrixSymbol::scalar(PowerSeries{0.0})), 0.1, rule),
                  SingularSymbolError);
}

TEST_CASE("berezin_rule_for") {
  CHECK(berezin_rule_for(3, 0.5).n_theta() == 88);
  CHECK(berezin_rule_for(3, 0.9).n_theta() == 512);
  CHECK(berezin_rule_for(3, 1.0 - 1.0 / 64.0).n_theta() == 2048);
}

TEST_CASE("berezin_power_gram") {
  const QuadratureRule rule = berezin_rule_for(4, 0.6);
  Rng rng(33);
  const PolyMatrixSymbol f = random_symbol(rng, 2, 2);
  check_close(berezin_power_gram(f, 1.0, 0.6, rule).matrix(), berezin_gram(f, 0.6).matrix(), 1e-9);
  check_close(berezin_power_gram(PolyMatrixSymbol::identity(2), 2.7, Cx(0.1, 0.5), rule).matrix(),
              CMatrix::Identity(2, 2), 1e-12);
  const PolyMatrixSymbol d = PolyMatrixSymbol::diagonal({PowerSeries{1.0}, kZ});
  check_close(berezin_power_gram(d, 2.0, 0.0, rule).matrix(), HermitianMatrix::diagonal({1.0, 1.0 / 3.0}).matrix(),
              1e-12);
}

TEST_CASE("p0_transform") {
  const QuadratureRule rule(64, 256);
  CHECK(p0_transform([](Cx) { return 1.0; }, 0.0, rule) == doctest::Approx(1.0).epsilon(1e-14));
  const Cx w = std::polar(std::sqrt(0.5), 1.0);
  const double t = 0.5;
  CHECK(std::abs(p0_transform([](Cx) { return 1.0; }, w, rule) - std::log(1.0 / (1.0 - t)) / t) <= 1e-8);
  CHECK(p0_transform([](Cx) { return 0.0; }, w, rule) == 0.0);
}

TEST_CASE("mobius invariance") {
  const QuadratureRule rule(64, 128);
  CHECK(mobius_invariance_residual(PolyMatrixSymbol::identity(2), Cx(0.5, 0.5), rule) <= 1e-12);
  Rng rng(34);
  CHECK(mobius_invariance_residual(random_symbol(rng, 2, 3), 0.0, rule) <= 1e-10);
  CHECK(mobius_invariance_residual(PolyMatrixSymbol::scalar(PowerSeries{1.0, 1.0}), 0.8, QuadratureRule(96, 256)) <=
        1e-7);
}

TEST_CASE("subharmonic bound and its local version") {
  Rng rng(35);
  double worst = 0.0;
  double worst_local = 0.0;
  const double s = 0.5;
  const double eta_s = 1.0 / ((1.0 - s * s) * (1.0 - s * s));
  for (int t = 0; t < 200; ++t) {
    const PolyMatrixSymbol f = random_symbol(rng, random_index(rng, 1, 3), random_index(rng, 0, 4));
    const Cx w = random_disk_point(rng, 0.95);
    const HermitianMatrix b = berezin_gram(f, w);
    worst = std::min(worst, (b - gram_at(f, w)).min_eigenvalue());
    // a point z with |phi_w(z)| <= s
    const Cx z = mobius(w, random_disk_point(rng, s));
    const auto n = static_cast<Eigen::Index>(f.dim());
    const HermitianMatrix bound = b * eta_s + HermitianMatrix(CMatrix(1e-8 * CMatrix::Identity(n, n)));
    worst_local = std::min(worst_local, (bound - gram_at(f, z)).min_eigenvalue());
  }
  CHECK(worst >= -1e-9);
  CHECK(worst_local >= 0.0);
}

TEST_CASE("weighted rank-one trace equals the Berezin trace") {
  Rng rng(36);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = random_index(rng, 1, 3);
    const PolyMatrixSymbol f = random_symbol(rng, n, random_index(rng, 0, 3));
    const PolyMatrixSymbol g = random_symbol(rng, n, random_index(rng, 0, 3));
    const Cx w = random_disk_point(rng, 0.8);
    const QuadratureRule rule = berezin_rule_for(3, std::abs(w));
    const double lhs = trace_product(berezin_gram(g, w), berezin_gram(f, w));
    const double rhs = weighted_rank_one_trace(f, g, w, rule);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(lhs));
  }
}

TEST_CASE("point-evaluation identity for T_{F*} and T_{G*}") {
  Rng rng(37);
  const QuadratureRule rule(96, 256);
  for (int t = 0; t < 8; ++t) {
    const std::size_t n = random_index(rng, 1, 3);
    const PolyMatrixSymbol f = random_symbol(rng, n, random_index(rng, 0, 3));
    const PolyMatrixSymbol g = random_symbol(rng, n, random_index(rng, 0, 3));
    const VectorPoly u = random_vector(rng, n, random_index(rng, 0, 4));
    const VectorPoly v = random_vector(rng, n, random_index(rng, 0, 4));
    const KernelIdentity k = kernel_product_identity(f, g, u, v, random_disk_point(rng, 0.8), rule);
    CHECK(k.relative_error <= 1e-7);
  }
}
