#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "bergtoep/conditions.hpp"
#include "bergtoep/errors.hpp"
#include "bergtoep/random.hpp"
#include "bergtoep/toeplitz.hpp"
#include "support.hpp"

using namespace bergtoep;

namespace {

const PowerSeries kZ = PowerSeries::monomial(1);

ConditionParams small_params(std::size_t degree, double eps = 1.0, unsigned rings = 3) {
  WGrid grid(rings);
  return ConditionParams(eps, grid, berezin_rule_for(degree, grid.rings().back().radius));
}

ConditionParams point_params(std::vector<Cx> pts, double eps, QuadratureRule rule) {
  return ConditionParams(eps, WGrid::from_points(pts), std::move(rule));
}

}  // namespace

TEST_CASE("ConditionParams") {
  const ConditionParams p = small_params(2, 1.0);
  CHECK(p.delta() == doctest::Approx(1.5));
  CHECK(p.power() == doctest::Approx(1.5));
  CHECK_THROWS_AS(ConditionParams(0.0, WGrid(1), QuadratureRule(8, 16)), RangeError);
  CHECK_THROWS_AS(ConditionParams(1.0, WGrid(1), QuadratureRule(8, 16), -1.0), RangeError);
  const ConditionParams d = ConditionParams::defaults(3);
  CHECK(d.epsilon() == 1.0);
  CHECK(d.grid.j_max() == 6);
  CHECK(d.rule.n_theta() == 2048);
}

TEST_CASE("necessary_sup") {
  const WGrid grid(3);
  const GridExtremum id = necessary_sup(PolyMatrixSymbol::identity(2), PolyMatrixSymbol::identity(2), grid);
  CHECK(id.value == doctest::Approx(2.0).epsilon(1e-12));
  for (double v : id.values) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(id.profile.size() == 4);

  const PolyMatrixSymbol z = PolyMatrixSymbol::scalar(kZ);
  const GridExtremum zz = necessary_sup(z, z, grid);
  CHECK(zz.values[0] == doctest::Approx(0.25).epsilon(1e-15));

  const GridExtremum one = necessary_sup(PolyMatrixSymbol::scalar(PowerSeries{1.0, 1.0}), PolyMatrixSymbol::identity(1),
                                         WGrid::from_points({0.0}));
  CHECK(one.value == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("sufficient_eps") {
  SUBCASE("identity") {
    for (double eps : {0.5, 1.0, 3.0}) {
      const ConditionParams p = small_params(0, eps);
      const GridExtremum s = sufficient_eps(PolyMatrixSymbol::identity(3), PolyMatrixSymbol::identity(3), p);
      for (double v : s.values) CHECK(v == doctest::Approx(3.0).epsilon(1e-10));
    }
  }
  SUBCASE("small epsilon approaches the necessary functional for diagonal symbols") {
    const PolyMatrixSymbol d = PolyMatrixSymbol::diagonal({PowerSeries{1.0}, kZ});
    const ConditionParams p = point_params({Cx(0.3, 0.2)}, 1e-3, berezin_rule_for(1, 0.5));
    const double s = sufficient_eps(d, d, p).value;
    const double n = necessary_sup(d, d, p.grid).value;
    CHECK(std::abs(s - n) <= 1e-2);
  }
  SUBCASE("z, eps = 2, w = 0") {
    const PolyMatrixSymbol z = PolyMatrixSymbol::scalar(kZ);
    const ConditionParams p = point_params({0.0}, 2.0, QuadratureRule(64, 128));
    CHECK(sufficient_eps(z, z, p).value == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  }
}

TEST_CASE("sufficient_double_integral") {
  const QuadratureRule rule(16, 32);
  const ConditionParams p = point_params({0.0, Cx(0.3, -0.1)}, 2.0, rule);
  const GridExtremum one = sufficient_double_integral(PolyMatrixSymbol::identity(1), PolyMatrixSymbol::identity(1), p);
  for (double v : one.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  const PolyMatrixSymbol z = PolyMatrixSymbol::scalar(kZ);
  const GridExtremum zz = sufficient_double_integral(z, z, p);
  CHECK(zz.values[0] == doctest::Approx(std::pow(1.0 / 9.0, 0.25)).epsilon(1e-12));
  CHECK(sufficient_double_integral(PolyMatrixSymbol::zero(1), z, p).value == 0.0);

  ConditionParams tight = p;
  tight.budget = 10.0;
  CHECK_THROWS_AS(sufficient_double_integral(z, z, tight), ComputeBudgetError);
  ::setenv("BERGTOEP_BUDGET", "1e12", 1);
  CHECK_NOTHROW(sufficient_double_integral(z, z, tight));
  ::unsetenv("BERGTOEP_BUDGET");
}

TEST_CASE("invertibility_floor") {
  const WGrid grid(3);
  CHECK(invertibility_floor(PolyMatrixSymbol::identity(2), PolyMatrixSymbol::identity(2), grid).value ==
        doctest::Approx(1.0));
  const PolyMatrixSymbol d = PolyMatrixSymbol::diagonal({PowerSeries{1.0}, kZ});
  const GridExtremum fl = invertibility_floor(d, PolyMatrixSymbol::identity(2), grid);
  CHECK(std::abs(fl.value) <= 1e-15);
  CHECK(fl.at == Cx(0.0));
  const GridExtremum two =
      invertibility_floor(PolyMatrixSymbol::scalar(PowerSeries{2.0}), PolyMatrixSymbol::scalar(PowerSeries{1.0, 0.5}), grid);
  CHECK(two.value >= 1.0);
  double expect = 1e300;
  for (const Cx z : grid.points()) expect = std::min(expect, 4.0 * std::norm(1.0 + 0.5 * z));
  CHECK(two.value == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("classify") {
  const std::vector<std::size_t> ks{8, 16, 32};
  SUBCASE("identity") {
    const ConditionReport r =
        classify(PolyMatrixSymbol::identity(2), PolyMatrixSymbol::identity(2), small_params(0), ks);
    CHECK(r.errors.empty());
    CHECK(r.necessary_holds);
    CHECK(r.sufficient_holds);
    CHECK(r.floor_positive);
    CHECK(r.invertible);
    REQUIRE(r.truncated_norms.size() == 3);
    for (const auto& [k, v] : r.truncated_norms) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("diag(1, z) has no floor") {
    const ConditionReport r = classify(PolyMatrixSymbol::diagonal({PowerSeries{1.0}, kZ}), PolyMatrixSymbol::identity(2),
                                       small_params(1), ks);
    CHECK_FALSE(r.floor_positive);
    CHECK_FALSE(r.invertible);
    CHECK(r.necessary_holds);
  }
  SUBCASE("1 + z/2 is bounded and invertible") {
    const PolyMatrixSymbol f = PolyMatrixSymbol::scalar(PowerSeries{1.0, 0.5});
    const ConditionReport r = classify(f, f, small_params(1), ks);
    CHECK(r.necessary_holds);
    CHECK(r.sufficient_holds);
    CHECK(r.floor_positive);
    CHECK(r.invertible);
    for (std::size_t i = 1; i < r.truncated_norms.size(); ++i)
      CHECK(r.truncated_norms[i].second >= r.truncated_norms[i - 1].second - 1e-12);
    // regression value at K = 32
    CHECK(r.truncated_norms.back().second == doctest::Approx(2.2086632304967617).epsilon(1e-9));
  }
  SUBCASE("deterministic") {
    Rng rng(41);
    const PolyMatrixSymbol f = random_symbol(rng, 2, 2);
    const PolyMatrixSymbol g = random_symbol(rng, 2, 2);
    const ConditionParams p = small_params(2);
    const ConditionReport a = classify(f, g, p, ks);
    const ConditionReport b = classify(f, g, p, ks);
    CHECK(a.necessary->values == b.necessary->values);
    CHECK(a.sufficient->values == b.sufficient->values);
    CHECK(a.truncated_norms == b.truncated_norms);
  }
  SUBCASE("dimension mismatch is recorded per field") {
    const ConditionReport r =
        classify(PolyMatrixSymbol::identity(2), PolyMatrixSymbol::identity(3), small_params(0), ks);
    CHECK(r.errors.size() == 4);
    CHECK_FALSE(r.necessary_holds);
  }
}

TEST_CASE("condition ordering") {
  Rng rng(42);
  const ConditionParams p = small_params(3, 1.0, 4);
  const double q = 2.0 / (2.0 + p.epsilon());
  SUBCASE("scalar symbols satisfy the ordering with constant 1") {
    for (int t = 0; t < 6; ++t) {
      const PolyMatrixSymbol f = random_symbol(rng, 1, random_index(rng, 0, 3));
      const PolyMatrixSymbol g = random_symbol(rng, 1, random_index(rng, 0, 3));
      const GridExtremum nec = necessary_sup(f, g, p.grid);
      const GridExtremum suf = sufficient_eps(f, g, p);
      for (std::size_t i = 0; i < nec.values.size(); ++i)
        CHECK(nec.values[i] <= std::pow(suf.values[i], q) * (1.0 + 1e-6));
    }
  }
  SUBCASE("matrix symbols need the trace-power constant n^{p-1}") {
    // For F = G = I (n = 2) the ordering with constant 1 reads 2 <= 2^{2/3}.
    const PolyMatrixSymbol id = PolyMatrixSymbol::identity(2);
    const double nec = necessary_sup(id, id, p.grid).value;
    const double suf = sufficient_eps(id, id, p).value;
    CHECK(nec > std::pow(suf, q) * (1.0 + 1e-6));
    for (int t = 0; t < 6; ++t) {
      const std::size_t n = random_index(rng, 2, 3);
      const PolyMatrixSymbol f = random_symbol(rng, n, random_index(rng, 0, 3));
      const PolyMatrixSymbol g = random_symbol(rng, n, random_index(rng, 0, 3));
      const GridExtremum ne = necessary_sup(f, g, p.grid);
      const GridExtremum su = sufficient_eps(f, g, p);
      const double c = std::pow(static_cast<double>(n), p.power() - 1.0);
      for (std::size_t i = 0; i < ne.values.size(); ++i) CHECK(ne.values[i] <= std::pow(c * su.values[i], q) * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("key inequality") {
  const WGrid grid(4);
  const PolyMatrixSymbol f(2, {PowerSeries{2.0}, kZ, PowerSeries{0.0}, PowerSeries{1.0, 0.25}});
  const PolyMatrixSymbol g(2, {PowerSeries{1.0, 0.3}, PowerSeries{0.0}, PowerSeries{0.0, 0.2}, PowerSeries{1.5}});
  const KeyInequality k = key_inequality_slack(f, g, grid);
  CHECK(k.eta > 0.0);
  CHECK(k.min_slack >= -1e-8);
}

TEST_CASE("bounded truncations bound the necessary functional") {
  Rng rng(43);
  const WGrid grid(4);
  for (int t = 0; t < 5; ++t) {
    const std::size_t n = random_index(rng, 1, 2);
    const PolyMatrixSymbol f = random_symbol(rng, n, 2);
    const PolyMatrixSymbol g = random_symbol(rng, n, 2);
    const double nmax = operator_norm(product_restricted(f, g, 32));
    CHECK(necessary_sup(f, g, grid).value <= 16.0 * nmax * nmax);
  }
}

TEST_CASE("holder_bound_audit") {
  const ConditionParams p2 = point_params({0.0}, 2.0, QuadratureRule(64, 128));
  const AuditResult zero = holder_bound_audit([](Cx) { return 0.0; }, PowerSeries{1.0}, 0.0, p2);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  const AuditResult one = holder_bound_audit([](Cx) { return 1.0; }, PowerSeries{1.0}, 0.0, p2);
  // the integrand is not polynomial, so the rule limits accuracy
  CHECK(one.lhs == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  CHECK(one.rhs == doctest::Approx(2.0).epsilon(1e-12));

  const ConditionParams p = point_params({0.5}, 1.0, berezin_rule_for(4, 0.5));
  Rng rng(44);
  for (int t = 0; t < 30; ++t) {
    const PowerSeries hp = random_series(rng, random_index(rng, 0, 3));
    const PowerSeries v = random_series(rng, random_index(rng, 0, 4));
    const AuditResult r = holder_bound_audit([&hp](Cx z) { return std::abs(hp(z)); }, v, 0.5, p);
    CHECK(r.lhs <= r.rhs + 1e-9 * (1.0 + r.rhs));
  }
}

TEST_CASE("derivative_term_audit") {
  const ConditionParams p = point_params({0.0}, 1.0, berezin_rule_for(3, 0.7));
  const PolyMatrixSymbol id = PolyMatrixSymbol::identity(2);
  const VectorPoly c(std::vector<PowerSeries>{PowerSeries{1.0}, PowerSeries{2.0}});
  CHECK(derivative_term_audit(id, id, c, c, 0.0, p, 1.0).lhs == 0.0);

  const VectorPoly u = VectorPoly::unit_monomial(2, 0, 1);
  const AuditResult r = derivative_term_audit(id, id, u, u, 0.0, p, 1.0);
  CHECK(r.lhs == doctest::Approx(1.0));
  // with C = 1 the bound at w = 0 is 2^{1/3} (2/3.5)^{2/1.5} < 1
  CHECK(r.rhs == doctest::Approx(std::cbrt(2.0) * std::pow(2.0 / 3.5, 4.0 / 3.0)).epsilon(1e-6));

  const double cal = calibrate_derivative_constant(p);
  CHECK(cal >= 1.0);
  CHECK(cal == calibrate_derivative_constant(p));
  Rng rng(45);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = random_index(rng, 1, 2);
    const PolyMatrixSymbol f = random_symbol(rng, n, 3);
    const PolyMatrixSymbol g = random_symbol(rng, n, 3);
    const VectorPoly a = random_vector(rng, n, 3);
    const VectorPoly b = random_vector(rng, n, 3);
    const AuditResult q = derivative_term_audit(f, g, a, b, std::polar(0.5, 6.0 * t), p, cal);
    CHECK(q.lhs <= q.rhs);
  }
}
