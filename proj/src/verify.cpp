#include "bergtoep/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <sstream>

#include "bergtoep/berezin.hpp"
#include "bergtoep/conditions.hpp"
#include "bergtoep/dyadic.hpp"
#include "bergtoep/errors.hpp"
#include "bergtoep/parallel.hpp"
#include "bergtoep/random.hpp"
#include "bergtoep/toeplitz.hpp"

namespace bergtoep {

namespace {

const PowerSeries kZ = PowerSeries::monomial(1);

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Tally {
  double worst = 0.0;
  std::size_t failures = 0;
  std::size_t count = 0;

  void add(double v, bool ok) {
    worst = std::max(worst, v);
    failures += ok ? 0 : 1;
    ++count;
  }
};

PolyMatrixSymbol upper_unipotent() { return PolyMatrixSymbol(2, {PowerSeries{1.0}, kZ, PowerSeries{0.0}, PowerSeries{1.0}}); }

PolyMatrixSymbol upper_triangular() {
  return PolyMatrixSymbol(2, {PowerSeries{3.0}, kZ, PowerSeries{0.0}, PowerSeries{2.0, 0.5}});
}

// zero free on the closed disk
PolyMatrixSymbol shifted_diagonal() { return PolyMatrixSymbol::diagonal({PowerSeries{2.0, 1.0}, PowerSeries{2.0, -1.0}}); }

ScalarField trace_field(const PolyMatrixSymbol& f) {
  return [f](Cx z) { return gram_at(f, z).trace(); };
}

// Audits and calibration share one parameter set: eps = 1 and a rule that
// resolves the kernel up to |w| = 0.7.
ConditionParams audit_params() { return ConditionParams(1.0, WGrid::from_points({0.0}), berezin_rule_for(3, 0.7)); }

double derivative_constant() {
  static const double c = calibrate_derivative_constant(audit_params());
  return c;
}

using Check = std::function<CriterionResult(std::size_t)>;

CriterionResult inner_product_formula(std::size_t) {
  Tally mono;
  for (std::size_t a = 0; a <= 20; ++a) {
    const VectorPoly f = VectorPoly::unit_monomial(1, 0, a);
    const IpFormulaResult r = ip_via_derivative_formula(f, f);
    const double err = std::max(r.residual, std::abs(r.lhs - 1.0 / (a + 1.0)));
    mono.add(err, err <= 1e-12);
  }
  Rng rng(0x1b1);
  Tally rnd;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = random_index(rng, 1, 3);
    const VectorPoly f = random_vector(rng, n, random_index(rng, 0, 8));
    const VectorPoly g = random_vector(rng, n, random_index(rng, 0, 8));
    const double r = ip_via_derivative_formula(f, g).residual;
    rnd.add(r, r <= 1e-12);
  }
  return {1, "inner-product formula", mono.failures + rnd.failures == 0,
          "monomials a<=20 max err " + fmt(mono.worst) + "; 100 random pairs max residual " + fmt(rnd.worst)};
}

std::vector<std::pair<PolyMatrixSymbol, PolyMatrixSymbol>> trace_corpus() {
  Rng rng(0x7ace);
  std::vector<std::pair<PolyMatrixSymbol, PolyMatrixSymbol>> out;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = random_index(rng, 1, 3);
    PolyMatrixSymbol f = random_symbol(rng, n, random_index(rng, 0, 4));
    PolyMatrixSymbol g = random_symbol(rng, n, random_index(rng, 0, 4));
    out.emplace_back(std::move(f), std::move(g));
  }
  return out;
}

CriterionResult rank_one_trace_check(std::size_t jobs) {
  const auto corpus = trace_corpus();
  std::vector<double> errs(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    const auto& [f, g] = corpus[i];
    const std::size_t k = f.degree() + g.degree();
    const double tr = rank_one(f, g, k).compose(rank_one(g, f, k)).matrix().trace().real();
    errs[i] = rel_err(rank_one_trace(f, g), tr);
  });
  Tally t;
  for (double e : errs) t.add(e, e <= 1e-10);
  const PolyMatrixSymbol z = PolyMatrixSymbol::scalar(kZ);
  const double zz = rank_one_trace(z, z);
  return {2, "rank-one trace", t.failures == 0 && zz == 0.25,
          "50 symbols max rel err " + fmt(t.worst) + "; f=g=z gives " + fmt(zz)};
}

CriterionResult park_check(std::size_t jobs) {
  const auto corpus = trace_corpus();
  std::vector<double> res(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    const auto& [f, g] = corpus[i];
    res[i] = park_residual(f, g, f.degree() + g.degree() + 6);
  });
  Tally t;
  for (double r : res) t.add(r, r <= 1e-10);
  return {3, "Park identity", t.failures == 0, "50 symbols max residual " + fmt(t.worst)};
}

CriterionResult kernel_identity_check(std::size_t jobs) {
  Rng rng(0x1f57);
  struct Case {
    PolyMatrixSymbol f, g;
    VectorPoly u, v;
    Cx w;
  };
  std::vector<Case> cases;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = random_index(rng, 1, 3);
    PolyMatrixSymbol f = random_symbol(rng, n, random_index(rng, 0, 3));
    PolyMatrixSymbol g = random_symbol(rng, n, random_index(rng, 0, 3));
    VectorPoly u = random_vector(rng, n, random_index(rng, 0, 4));
    VectorPoly v = random_vector(rng, n, random_index(rng, 0, 4));
    cases.push_back({std::move(f), std::move(g), std::move(u), std::move(v), random_disk_point(rng, 0.8)});
  }
  const QuadratureRule rule(96, 256);
  std::vector<double> errs(cases.size());
  parallel_for(cases.size(), jobs, [&](std::size_t i) {
    const Case& c = cases[i];
    errs[i] = kernel_product_identity(c.f, c.g, c.u, c.v, c.w, rule).relative_error;
  });
  Tally t;
  for (double e : errs) t.add(e, e <= 1e-7);
  return {4, "point-evaluation identity", t.failures == 0, "20 cases max rel err " + fmt(t.worst)};
}

CriterionResult berezin_trace_check(std::size_t jobs) {
  Rng rng(0xbe2e);
  struct Case {
    PolyMatrixSymbol f, g;
    Cx w;
  };
  std::vector<Case> cases;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = random_index(rng, 1, 3);
    PolyMatrixSymbol f = random_symbol(rng, n, random_index(rng, 0, 3));
    PolyMatrixSymbol g = random_symbol(rng, n, random_index(rng, 0, 3));
    cases.push_back({std::move(f), std::move(g), random_disk_point(rng, 0.8)});
  }
  std::vector<double> errs(cases.size());
  parallel_for(cases.size(), jobs, [&](std::size_t i) {
    const Case& c = cases[i];
    const double lhs = trace_product(berezin_gram(c.g, c.w), berezin_gram(c.f, c.w));
    errs[i] = rel_err(weighted_rank_one_trace(c.f, c.g, c.w, berezin_rule_for(3, std::abs(c.w))), lhs);
  });
  Tally t;
  for (double e : errs) t.add(e, e <= 1e-8);
  return {5, "rank-one / Berezin trace", t.failures == 0, "20 cases max rel err " + fmt(t.worst)};
}

CriterionResult berezin_backends_check(std::size_t jobs) {
  Rng rng(0xb0c5);
  std::vector<std::pair<PolyMatrixSymbol, Cx>> cases;
  for (int t = 0; t < 20; ++t) {
    PolyMatrixSymbol f = random_symbol(rng, random_index(rng, 1, 3), random_index(rng, 0, 4));
    cases.emplace_back(std::move(f), random_disk_point(rng, 0.9));
  }
  std::vector<double> errs(cases.size());
  parallel_for(cases.size(), jobs, [&](std::size_t i) {
    const auto& [f, w] = cases[i];
    const CMatrix exact = berezin_gram(f, w).matrix();
    const CMatrix quad = berezin_quadrature(HermitianField::gram(f), w, berezin_rule_for(4, 0.9)).matrix();
    errs[i] = (exact - quad).cwiseAbs().maxCoeff() / std::max(1.0, exact.cwiseAbs().maxCoeff());
  });
  Tally backends;
  for (double e : errs) backends.add(e, e <= 1e-9);

  const WGrid grid(6);
  const QuadratureRule rule = berezin_rule_for(0, grid.rings().back().radius);
  const FieldSamples one(HermitianField::constant(HermitianMatrix::identity(1)), rule);
  const auto& pts = grid.points();
  std::vector<double> dev(pts.size());
  parallel_for(pts.size(), jobs, [&](std::size_t i) {
    dev[i] = std::abs(berezin_quadrature(one, pts[i]).matrix()(0, 0).real() - 1.0);
  });
  Tally unit;
  for (double d : dev) unit.add(d, d <= 1e-12);

  std::vector<std::pair<PolyMatrixSymbol, Cx>> mcases;
  for (int t = 0; t < 10; ++t) {
    PolyMatrixSymbol f = random_symbol(rng, random_index(rng, 1, 2), random_index(rng, 0, 3));
    mcases.emplace_back(std::move(f), random_disk_point(rng, 0.8));
  }
  std::vector<double> mres(mcases.size());
  parallel_for(mcases.size(), jobs, [&](std::size_t i) {
    const auto& [f, w] = mcases[i];
    mres[i] = mobius_invariance_residual(f, w, QuadratureRule(96, 512));
  });
  Tally mob;
  for (double r : mres) mob.add(r, r <= 1e-7);
  return {6, "Berezin backends", backends.failures + unit.failures + mob.failures == 0,
          "series vs quadrature max err " + fmt(backends.worst) + "; B(1)-1 on " + std::to_string(pts.size()) +
              " grid points max " + fmt(unit.worst) + "; Mobius residual max " + fmt(mob.worst)};
}

CriterionResult subharmonic_check(std::size_t) {
  Rng rng(0x50b);
  const double s = 0.5;
  const double eta_s = 1.0 / ((1.0 - s * s) * (1.0 - s * s));
  double worst = 0.0;
  double worst_local = 0.0;
  for (int t = 0; t < 200; ++t) {
    const PolyMatrixSymbol f = random_symbol(rng, random_index(rng, 1, 3), random_index(rng, 0, 4));
    const Cx w = random_disk_point(rng, 0.95);
    const HermitianMatrix b = berezin_gram(f, w);
    worst = std::min(worst, (b - gram_at(f, w)).min_eigenvalue());
    const Cx z = mobius(w, random_disk_point(rng, s));
    const auto n = static_cast<Eigen::Index>(f.dim());
    const HermitianMatrix bound = b * eta_s + HermitianMatrix(CMatrix(1e-8 * CMatrix::Identity(n, n)));
    worst_local = std::min(worst_local, (bound - gram_at(f, z)).min_eigenvalue());
  }
  return {7, "subharmonic bound", worst >= -1e-9 && worst_local >= 0.0,
          "200 cases min slack " + fmt(worst) + "; local (s=0.5) min slack " + fmt(worst_local)};
}

CriterionResult ordering_check(std::size_t jobs) {
  const std::vector<CorpusEntry> corpus = builtin_corpus();
  struct Outcome {
    std::size_t points = 0;
    std::size_t literal = 0;   // violations with constant 1
    std::size_t weighted = 0;  // violations with n^{p-1} inside the power
    double worst_ratio = 0.0;
  };
  std::vector<Outcome> out(corpus.size());
  std::vector<std::string> errors(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& c = corpus[i];
    try {
      ConditionParams p = ConditionParams::defaults(std::max(c.f.degree(), c.g.degree()));
      p.jobs = jobs;
      const double q = 2.0 / (2.0 + p.epsilon());
      const double cn = std::pow(static_cast<double>(c.f.dim()), p.power() - 1.0);
      const GridExtremum nec = necessary_sup(c.f, c.g, p.grid, jobs);
      const GridExtremum suf = sufficient_eps(c.f, c.g, p);
      Outcome& o = out[i];
      for (std::size_t k = 0; k < nec.values.size(); ++k) {
        const double bound = std::pow(suf.values[k], q);
        ++o.points;
        if (nec.values[k] > bound * (1.0 + 1e-6)) ++o.literal;
        if (nec.values[k] > std::pow(cn * suf.values[k], q) * (1.0 + 1e-6)) ++o.weighted;
        if (bound > 0.0) o.worst_ratio = std::max(o.worst_ratio, nec.values[k] / bound);
      }
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  }
  std::size_t points = 0, literal = 0, weighted = 0, scalar_literal = 0;
  double worst = 0.0;
  std::string failing;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!errors[i].empty()) {
      failing += " " + corpus[i].name + "(error)";
      continue;
    }
    points += out[i].points;
    literal += out[i].literal;
    weighted += out[i].weighted;
    worst = std::max(worst, out[i].worst_ratio);
    if (corpus[i].f.dim() == 1) scalar_literal += out[i].literal;
    if (out[i].literal > 0) failing += " " + corpus[i].name;
  }
  std::string detail = std::to_string(literal) + "/" + std::to_string(points) +
                       " grid points violate the bound with constant 1 (max ratio " + fmt(worst) + ")";
  if (!failing.empty()) detail += ", pairs:" + failing;
  detail += "; n=1 violations " + std::to_string(scalar_literal) + "; with trace constant n^(eps/2) violations " +
            std::to_string(weighted);
  bool ok = literal == 0;
  for (const auto& e : errors) ok = ok && e.empty();
  return {8, "condition ordering", ok, detail};
}

CriterionResult dyadic_geometry_check(std::size_t) {
  double area_err = 0.0;
  bool boundary_exact = true;
  for (unsigned j = 0; j <= 8; ++j) {
    const std::uint64_t side = std::uint64_t{1} << j;
    double s = 0.0;
    for (const auto& q : rectangles_at_level(j)) s += rect_geometry(q).area;
    area_err = std::max(area_err, std::abs(s - 1.0));
    if (j == 0) continue;
    // 8 c (1-c)^2 with c = (2k-1)/2^{j+1}, k = 2^j, against (2k-1)/2^{3j},
    // both as integers over the common denominator 2^{3j+3}
    const std::uint64_t num_c = 2 * side - 1;
    const std::uint64_t one_minus = (std::uint64_t{1} << (j + 1)) - num_c;
    const std::uint64_t formula = 8 * num_c * one_minus * one_minus;
    const std::uint64_t closed = (2 * side - 1) * 8;
    boundary_exact = boundary_exact && formula == closed;
    const RectGeometry g = rect_geometry({j, side, 1});
    // |z_Q| = (k - 1/2) 2^-j is a dyadic rational, so this holds bit for bit
    const double c = 0.5 * (g.r_lo + g.r_hi);
    boundary_exact = boundary_exact && g.area == 8.0 * c * (1.0 - c) * (1.0 - c);
  }

  const DyadicRule rule;
  const ScalarField f = trace_field(PolyMatrixSymbol::scalar(PowerSeries::monomial(3, 4.0)));
  CZDecomposition cz;
  std::string depth_note;
  try {
    cz = cz_decompose(f, 4.0, 6, rule);
  } catch (const DepthExhaustedError& e) {
    cz = e.partial();
    depth_note = " (depth exhausted, unresolved area " + fmt(cz.unresolved_area) + ")";
  }
  bool sandwich = !cz.selected.empty();
  double lo = 1e300, hi = 0.0;
  for (double a : cz.averages) {
    sandwich = sandwich && a > 4.0 && a < 32.0 + 1e-9;
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }

  bool notall = true;
  double worst_ratio = 0.0;
  for (const auto& c : builtin_corpus()) {
    const ScalarField tr = trace_field(c.f);
    const double integral = rect_integral(tr, {0, 1, 1}, rule);
    if (integral == 0.0) continue;
    double m = 0.0;
    for (unsigned j = 0; j <= 8; ++j)
      for (std::uint64_t l = 1; l <= (std::uint64_t{1} << j); ++l) m = std::max(m, rect_average(tr, {j, 1, l}, rule));
    notall = notall && integral <= m * (1.0 + 1e-12) && m <= 16.0 / 9.0 * integral * (1.0 + 1e-12);
    worst_ratio = std::max(worst_ratio, m / integral);
  }
  return {9, "dyadic geometry", area_err <= 1e-12 && boundary_exact && sandwich && notall,
          "level area err " + fmt(area_err) + "; boundary formula " + (boundary_exact ? "exact" : "mismatch") + "; CZ " +
              std::to_string(cz.selected.size()) + " rectangles, averages in [" + fmt(lo) + ", " + fmt(hi) + "]" +
              depth_note + "; max M(0)/integral " + fmt(worst_ratio) + " (bound 16/9)"};
}

CriterionResult a2_check(std::size_t) {
  const DyadicRule rule;
  const double id = a2_constant(PolyMatrixSymbol::identity(2), 6, rule).constant;
  bool diverges = false;
  try {
    a2_constant(PolyMatrixSymbol::scalar(kZ), 6, rule);
  } catch (const DivergenceSuspectedError&) {
    diverges = true;
  }

  const std::vector<CorpusEntry> zf = zero_free_corpus();
  Rng rng(0xa2a2);
  double worst_gap = -1e300;
  std::size_t over = 0;
  for (int t = 0; t < 200; ++t) {
    const CorpusEntry& c = zf[random_index(rng, 0, zf.size() - 1)];
    const auto j = static_cast<unsigned>(random_index(rng, 0, 4));
    const std::uint64_t side = std::uint64_t{1} << j;
    const DyadicRectangle q{j, random_index(rng, 1, side), random_index(rng, 1, side)};
    const VectorPoly v = random_vector(rng, c.f.dim(), random_index(rng, 0, 4));
    const double gap = weighted_projection_ratio(c.f, q, v, rule) - a2_expression(c.f, q, rule);
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-6) ++over;
  }

  double scalar_dev = 0.0;
  double diag_worst = 0.0;
  bool diag_ok = true;
  for (const auto& c : zf) {
    const auto n = static_cast<Eigen::Index>(c.f.dim());
    for (double s : {0.5, 2.0})
      scalar_dev = std::max(scalar_dev, std::abs(conjugation_a2_check(c.f, HermitianMatrix::identity(n) * s, 4, rule) - 1.0));
    if (n < 2) continue;
    std::vector<double> d(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = 1.0 + 2.0 * static_cast<double>(i);
    const double r = conjugation_a2_check(c.f, HermitianMatrix::diagonal(d), 4, rule);
    diag_worst = std::max(diag_worst, r);
    diag_ok = diag_ok && r <= static_cast<double>(n * n);
  }
  const bool ok = std::abs(id - 1.0) <= 1e-12 && diverges && over == 0 && scalar_dev <= 1e-10 && diag_ok;
  return {10, "A2 machinery", ok,
          "a2(I) = " + fmt(id) + "; [[z]] " + (diverges ? "diverges" : "did not diverge") +
              "; projection ratio minus A2 expression max " + fmt(worst_gap) + " over 200 trials; |ratio-1| for cI " +
              fmt(scalar_dev) + "; diagonal J max ratio " + fmt(diag_worst)};
}

CriterionResult reverse_holder_check(std::size_t) {
  const ReverseHolderCertificate z = reverse_holder(PolyMatrixSymbol::scalar(kZ), 1.0, QuadratureRule(64, 128));
  const PolyMatrixSymbol f = PolyMatrixSymbol::scalar(PowerSeries{2.0, 1.0});
  const double c1 = reverse_holder(f, 1.0, QuadratureRule(64, 128)).constant;
  const double c2 = reverse_holder(f, 1.0, QuadratureRule(128, 256)).constant;
  const double ez = std::abs(z.constant - 4.0 / 3.0);
  return {11, "reverse Holder", ez <= 1e-10 && std::abs(c1 - c2) <= 1e-8,
          "[[z]] C - 4/3 = " + fmt(ez) + "; [[2+z]] C = " + fmt(c1) + ", refinement change " + fmt(std::abs(c1 - c2))};
}

CriterionResult classify_check(std::size_t jobs) {
  const std::vector<std::size_t> ks{8, 16, 32};
  ConditionParams p0 = ConditionParams::defaults(0);
  p0.jobs = jobs;
  const ConditionReport id = classify(PolyMatrixSymbol::identity(2), PolyMatrixSymbol::identity(2), p0, ks);
  bool id_ok = id.errors.empty() && id.necessary_holds && id.sufficient_holds && id.floor_positive && id.invertible;
  for (const auto& [k, v] : id.truncated_norms) id_ok = id_ok && std::abs(v - 1.0) <= 1e-12;

  ConditionParams p1 = ConditionParams::defaults(1);
  p1.jobs = jobs;
  const ConditionReport d =
      classify(PolyMatrixSymbol::diagonal({PowerSeries{1.0}, kZ}), PolyMatrixSymbol::identity(2), p1, ks);

  const std::vector<CorpusEntry> corpus = builtin_corpus();
  std::vector<double> drops(corpus.size(), 0.0);
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    const auto& c = corpus[i];
    std::optional<CVector> start;
    double prev = 0.0;
    for (std::size_t k : {4, 8, 16, 32, 64}) {
      const TruncatedOperator op = product_restricted(c.f, c.g, k);
      if (start) {
        CVector padded = CVector::Zero(op.matrix().cols());
        padded.head(start->size()) = *start;
        start = padded;
      }
      const NormResult r = operator_norm_detailed(op, start);
      drops[i] = std::max(drops[i], prev - r.norm);
      prev = r.norm;
      start = r.right_vector;
    }
  });
  const double drop = *std::max_element(drops.begin(), drops.end());
  return {12, "classify end to end", id_ok && !d.floor_positive && drop <= 1e-12,
          std::string("identity flags/norms ") + (id_ok ? "ok" : "wrong") + "; diag(1,z) floor flag " +
              (d.floor_positive ? "true" : "false") + "; largest norm decrease in K " + fmt(std::max(drop, 0.0))};
}

CriterionResult audits_check(std::size_t jobs) {
  const ConditionParams p = audit_params();
  const double cal = derivative_constant();
  Rng rng(0xa0d1);
  struct HCase {
    PowerSeries hp, v;
    Cx w;
  };
  std::vector<HCase> hc;
  for (int t = 0; t < 100; ++t) {
    PowerSeries hp = random_series(rng, random_index(rng, 0, 3));
    PowerSeries v = random_series(rng, random_index(rng, 0, 3));
    hc.push_back({std::move(hp), std::move(v), random_disk_point(rng, 0.7)});
  }
  struct DCase {
    PolyMatrixSymbol f, g;
    VectorPoly u, v;
    Cx w;
  };
  std::vector<DCase> dc;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = random_index(rng, 1, 2);
    PolyMatrixSymbol f = random_symbol(rng, n, random_index(rng, 0, 3));
    PolyMatrixSymbol g = random_symbol(rng, n, random_index(rng, 0, 3));
    VectorPoly u = random_vector(rng, n, random_index(rng, 1, 3));
    VectorPoly v = random_vector(rng, n, random_index(rng, 1, 3));
    dc.push_back({std::move(f), std::move(g), std::move(u), std::move(v), random_disk_point(rng, 0.7)});
  }
  std::vector<double> hr(hc.size()), dr(dc.size());
  parallel_for(hc.size(), jobs, [&](std::size_t i) {
    const PowerSeries& hp = hc[i].hp;
    const AuditResult a = holder_bound_audit([&hp](Cx z) { return std::abs(hp(z)); }, hc[i].v, hc[i].w, p);
    hr[i] = a.lhs / a.rhs;
  });
  parallel_for(dc.size(), jobs, [&](std::size_t i) {
    const DCase& c = dc[i];
    const AuditResult a = derivative_term_audit(c.f, c.g, c.u, c.v, c.w, p, cal);
    dr[i] = a.lhs / a.rhs;
  });
  Tally h, d;
  for (double r : hr) h.add(r, r <= 1.0);
  for (double r : dr) d.add(r, r <= 1.0);
  return {13, "audits", h.failures + d.failures == 0,
          "Holder max lhs/rhs " + fmt(h.worst) + "; derivative max lhs/rhs " + fmt(d.worst) + " with calibrated C = " +
              fmt(cal)};
}

const std::vector<std::pair<std::string, Check>>& checks() {
  static const std::vector<std::pair<std::string, Check>> all{
      {"inner-product formula", inner_product_formula},
      {"rank-one trace", rank_one_trace_check},
      {"Park identity", park_check},
      {"point-evaluation identity", kernel_identity_check},
      {"rank-one / Berezin trace", berezin_trace_check},
      {"Berezin backends", berezin_backends_check},
      {"subharmonic bound", subharmonic_check},
      {"condition ordering", ordering_check},
      {"dyadic geometry", dyadic_geometry_check},
      {"A2 machinery", a2_check},
      {"reverse Holder", reverse_holder_check},
      {"classify end to end", classify_check},
      {"audits", audits_check},
  };
  return all;
}

}  // namespace

std::vector<CorpusEntry> builtin_corpus() {
  const PolyMatrixSymbol id1 = PolyMatrixSymbol::identity(1);
  const PolyMatrixSymbol id2 = PolyMatrixSymbol::identity(2);
  const PolyMatrixSymbol z = PolyMatrixSymbol::scalar(kZ);
  const PolyMatrixSymbol two_z = PolyMatrixSymbol::scalar(PowerSeries{2.0, 1.0});
  std::vector<CorpusEntry> out{
      {"I1", id1, id1},
      {"I2", id2, id2},
      {"z", z, z},
      {"1+z|1", PolyMatrixSymbol::scalar(PowerSeries{1.0, 1.0}), id1},
      {"2+z", two_z, two_z},
      {"4z^3|1", PolyMatrixSymbol::scalar(PowerSeries::monomial(3, 4.0)), id1},
      {"diag(1,z)|I", PolyMatrixSymbol::diagonal({PowerSeries{1.0}, kZ}), id2},
      {"diag(2+z,2-z)", shifted_diagonal(), shifted_diagonal()},
      {"unipotent|I", upper_unipotent(), id2},
      {"triangular", upper_triangular(), upper_triangular()},
  };
  Rng rng(0xc0ffee);
  for (int t = 0; t < 6; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
    PolyMatrixSymbol f = random_symbol(rng, n, random_index(rng, 0, 3));
    PolyMatrixSymbol g = random_symbol(rng, n, random_index(rng, 0, 3));
    out.push_back({"random" + std::to_string(t), std::move(f), std::move(g)});
  }
  return out;
}

std::vector<CorpusEntry> zero_free_corpus() {
  const PolyMatrixSymbol two_z = PolyMatrixSymbol::scalar(PowerSeries{2.0, 1.0});
  return {
      {"I2", PolyMatrixSymbol::identity(2), PolyMatrixSymbol::identity(2)},
      {"2+z", two_z, two_z},
      {"diag(2+z,2-z)", shifted_diagonal(), shifted_diagonal()},
      {"unipotent", upper_unipotent(), upper_unipotent()},
      {"triangular", upper_triangular(), upper_triangular()},
  };
}

CriterionResult run_criterion(int id, std::size_t jobs) {
  if (id < 1 || id > kCriterionCount) throw RangeError("criterion id " + std::to_string(id) + " out of range 1..13");
  const auto& [title, check] = checks()[static_cast<std::size_t>(id - 1)];
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r{id, title, false, ""};
  try {
    r = check(jobs);
  } catch (const std::exception& e) {
    r = {id, title, false, std::string("error: ") + e.what()};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

bool VerifyReport::all_pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass; });
}

VerifyReport run_verify_suite(const std::vector<int>& ids, std::size_t jobs) {
  std::vector<int> todo = ids;
  if (todo.empty())
    for (int i = 1; i <= kCriterionCount; ++i) todo.push_back(i);
  VerifyReport report;
  for (int id : todo) {
    report.criteria.push_back(run_criterion(id, jobs));
    if (id == 13) report.derivative_constant = derivative_constant();
  }
  return report;
}

}  // namespace bergtoep
