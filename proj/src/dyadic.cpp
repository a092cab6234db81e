#include "bergtoep/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bergtoep/parallel.hpp"

namespace bergtoep {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t side(unsigned j) { return std::uint64_t{1} << j; }

void validate(const DyadicRectangle& q) {
  if (q.j > kMaxDyadicLevel || q.k < 1 || q.l < 1 || q.k > side(q.j) || q.l > side(q.j)) {
    std::ostringstream os;
    os << "invalid dyadic rectangle (j=" << q.j << ", k=" << q.k << ", l=" << q.l << ")";
    throw BadIndexError(os.str());
  }
}

std::string describe(const DyadicRectangle& q) {
  std::ostringstream os;
  os << "Q(" << q.j << "," << q.k << "," << q.l << ")";
  return os.str();
}

double angle_of(Cx z) {
  double t = std::arg(z);
  if (t < 0.0) t += 2.0 * kPi;
  return t;
}

const DyadicRectangle kWholeDisk{0, 1, 1};

}  // namespace

RectGeometry rect_geometry(const DyadicRectangle& q) {
  validate(q);
  const int j = static_cast<int>(q.j);
  const double k = static_cast<double>(q.k);
  const double l = static_cast<double>(q.l);
  RectGeometry g;
  g.area = std::ldexp(2.0 * k - 1.0, -3 * j);
  g.r_lo = std::ldexp(k - 1.0, -j);
  g.r_hi = std::ldexp(k, -j);
  g.theta_lo = std::ldexp(l - 1.0, 1 - j) * kPi;
  g.theta_hi = std::ldexp(l, 1 - j) * kPi;
  g.center = std::polar(std::ldexp(k - 0.5, -j), std::ldexp(l - 0.5, 1 - j) * kPi);
  return g;
}

std::array<DyadicRectangle, 4> rect_children(const DyadicRectangle& q) {
  validate(q);
  if (q.j >= kMaxDyadicLevel) throw BadIndexError("children would exceed the maximum level");
  const unsigned j = q.j + 1;
  return {DyadicRectangle{j, 2 * q.k - 1, 2 * q.l - 1}, DyadicRectangle{j, 2 * q.k - 1, 2 * q.l},
          DyadicRectangle{j, 2 * q.k, 2 * q.l - 1}, DyadicRectangle{j, 2 * q.k, 2 * q.l}};
}

bool rect_contains(const DyadicRectangle& q, Cx z) {
  const RectGeometry g = rect_geometry(q);
  const double r = std::abs(z);
  if (r < g.r_lo || r > g.r_hi) return false;
  if (r == 0.0) return true;
  const double t = angle_of(z);
  if (t >= g.theta_lo && t <= g.theta_hi) return true;
  // theta = 0 is also theta = 2 pi
  return t == 0.0 && g.theta_hi == 2.0 * kPi;
}

bool rect_is_within(const DyadicRectangle& inner, const DyadicRectangle& q) {
  validate(inner);
  validate(q);
  if (inner.j < q.j) return false;
  const unsigned shift = inner.j - q.j;
  return ((inner.k - 1) >> shift) + 1 == q.k && ((inner.l - 1) >> shift) + 1 == q.l;
}

std::vector<DyadicRectangle> rectangles_at_level(unsigned j) {
  if (j > 12) throw BadIndexError("level too deep to enumerate");
  std::vector<DyadicRectangle> out;
  out.reserve(side(j) * side(j));
  for (std::uint64_t k = 1; k <= side(j); ++k)
    for (std::uint64_t l = 1; l <= side(j); ++l) out.push_back({j, k, l});
  return out;
}

double pseudo_disk_cover(const DyadicRectangle& q, double whole_disk_radius, std::size_t boundary_samples) {
  const RectGeometry g = rect_geometry(q);
  auto phi = [&g](Cx z) { return std::abs((g.center - z) / (1.0 - std::conj(g.center) * z)); };
  if (q.j == 0) {
    double m = 0.0;
    for (std::size_t i = 0; i < boundary_samples; ++i)
      m = std::max(m, phi(std::polar(whole_disk_radius, 2.0 * kPi * static_cast<double>(i) /
                                                            static_cast<double>(boundary_samples))));
    return m;
  }
  if (q.k == side(q.j)) throw TouchesBoundaryError(describe(q) + " touches the unit circle");
  double m = 0.0;
  for (double r : {g.r_lo, g.r_hi})
    for (double t : {g.theta_lo, g.theta_hi}) m = std::max(m, phi(std::polar(r, t)));
  return m;
}

DyadicRule::DyadicRule(std::size_t n_r, std::size_t n_theta)
    : radial_(gauss_legendre(n_r, 0.0, 1.0)), angular_(gauss_legendre(n_theta, 0.0, 1.0)) {
  if (n_r == 0 || n_theta == 0) throw RangeError("rectangle rule orders must be positive");
}

std::vector<QuadNode> DyadicRule::nodes(const DyadicRectangle& q) const {
  const RectGeometry g = rect_geometry(q);
  const double dr = g.r_hi - g.r_lo;
  const double dt = g.theta_hi - g.theta_lo;
  std::vector<QuadNode> out;
  out.reserve(n_r() * n_theta());
  for (std::size_t i = 0; i < n_r(); ++i) {
    const double r = g.r_lo + dr * radial_.nodes[i];
    // normalized area measure r dr dtheta / pi
    const double wr = dr * radial_.weights[i] * r / kPi;
    for (std::size_t m = 0; m < n_theta(); ++m) {
      const double t = g.theta_lo + dt * angular_.nodes[m];
      out.push_back({std::polar(r, t), wr * dt * angular_.weights[m]});
    }
  }
  return out;
}

HermitianMatrix rect_average(const HermitianField& field, const DyadicRectangle& q, const DyadicRule& rule) {
  const auto n = static_cast<Eigen::Index>(field.dim());
  CMatrix acc = CMatrix::Zero(n, n);
  double mass = 0.0;
  for (const auto& nd : rule.nodes(q)) {
    acc += field(nd.z).matrix() * nd.weight;
    mass += nd.weight;
  }
  return HermitianMatrix(CMatrix(acc / mass));
}

double rect_integral(const ScalarField& field, const DyadicRectangle& q, const DyadicRule& rule) {
  std::vector<double> terms;
  for (const auto& nd : rule.nodes(q)) terms.push_back(field(nd.z) * nd.weight);
  return pairwise_sum(std::span<const double>(terms));
}

double rect_average(const ScalarField& field, const DyadicRectangle& q, const DyadicRule& rule) {
  const auto nodes = rule.nodes(q);
  std::vector<double> terms;
  std::vector<double> mass;
  terms.reserve(nodes.size());
  mass.reserve(nodes.size());
  for (const auto& nd : nodes) {
    terms.push_back(field(nd.z) * nd.weight);
    mass.push_back(nd.weight);
  }
  return pairwise_sum(std::span<const double>(terms)) / pairwise_sum(std::span<const double>(mass));
}

A2Result a2_constant(const HermitianField& weight, const HermitianField& inverse_weight, unsigned max_level,
                     const DyadicRule& rule) {
  A2Result best{-1.0, kWholeDisk};
  std::vector<std::vector<double>> inv_top;  // per level, lambda_max(avg W^{-1}) by (k-1) 2^j + (l-1)
  for (unsigned j = 0; j <= max_level; ++j) {
    const auto rects = rectangles_at_level(j);
    std::vector<double> expr(rects.size());
    std::vector<double> top(rects.size());
    parallel_for(rects.size(), 0, [&](std::size_t i) {
      const HermitianMatrix aw = rect_average(weight, rects[i], rule);
      const HermitianMatrix ai = rect_average(inverse_weight, rects[i], rule);
      expr[i] = sqrt_product_norm(aw, ai);
      top[i] = ai.max_eigenvalue();
    });
    inv_top.push_back(std::move(top));

    if (j >= 3) {
      for (std::size_t i = 0; i < rects.size(); ++i) {
        double chain[4];
        for (unsigned up = 0; up < 4; ++up) {
          const unsigned jj = j - up;
          const std::uint64_t k = ((rects[i].k - 1) >> up);
          const std::uint64_t l = ((rects[i].l - 1) >> up);
          chain[up] = inv_top[jj][k * side(jj) + l];
        }
        if (chain[0] > chain[1] && chain[1] > chain[2] && chain[2] > chain[3] && chain[0] > 10.0 * chain[3]) {
          std::ostringstream os;
          os << "inverse-weight averages grow from " << chain[3] << " to " << chain[0] << " over three levels ending at "
             << describe(rects[i]);
          throw DivergenceSuspectedError(os.str());
        }
      }
    }
    for (std::size_t i = 0; i < rects.size(); ++i)
      if (expr[i] > best.constant) best = {expr[i], rects[i]};
  }
  return best;
}

A2Result a2_constant(const PolyMatrixSymbol& f, unsigned max_level, const DyadicRule& rule) {
  return a2_constant(HermitianField::gram(f), HermitianField::inverse_gram(f), max_level, rule);
}

double scalar_a2_constant(const ScalarField& w, const DyadicRectangle& q, const DyadicRule& rule) {
  const double a = rect_average(w, q, rule);
  const double b = rect_average([&w](Cx z) { return 1.0 / w(z); }, q, rule);
  return a * b;
}

A2Result scalar_a2_constant(const ScalarField& w, unsigned max_level, const DyadicRule& rule) {
  A2Result best{-1.0, kWholeDisk};
  for (unsigned j = 0; j <= max_level; ++j)
    for (const auto& q : rectangles_at_level(j)) {
      const double c = scalar_a2_constant(w, q, rule);
      if (c > best.constant) best = {c, q};
    }
  return best;
}

double a2_expression(const PolyMatrixSymbol& f, const DyadicRectangle& q, const DyadicRule& rule) {
  return sqrt_product_norm(rect_average(HermitianField::gram(f), q, rule),
                           rect_average(HermitianField::inverse_gram(f), q, rule));
}

double weighted_projection_ratio(const PolyMatrixSymbol& f, const DyadicRectangle& q, const VectorPoly& v,
                                 const DyadicRule& rule) {
  if (v.dim() != f.dim()) throw DimensionMismatchError("vector and symbol dimensions differ");
  const auto qn = rule.nodes(q);
  CVector avg = CVector::Zero(static_cast<Eigen::Index>(v.dim()));
  double mass = 0.0;
  for (const auto& nd : qn) {
    avg += v(nd.z) * nd.weight;
    mass += nd.weight;
  }
  avg /= mass;

  double num = 0.0;
  for (const auto& nd : qn) num += nd.weight * (f(nd.z) * avg).squaredNorm();
  double den = 0.0;
  for (const auto& nd : rule.nodes(kWholeDisk)) den += nd.weight * (f(nd.z) * v(nd.z)).squaredNorm();
  if (!(den > 0.0)) throw ZeroDenominatorError("||f||_{L^2(F*F)} vanishes");
  return std::sqrt(num / den);
}

double dyadic_maximal(const ScalarField& field, Cx z, unsigned max_level, const DyadicRule& rule) {
  if (!(std::abs(z) < 1.0)) throw RangeError("dyadic_maximal needs |z| < 1");
  double best = -std::numeric_limits<double>::infinity();
  for (unsigned j = 0; j <= max_level; ++j) {
    const std::uint64_t n = side(j);
    // candidate indices; both neighbours when z sits on a cell boundary
    auto candidates = [n](double x) {
      std::vector<std::uint64_t> c;
      const auto fl = static_cast<std::uint64_t>(std::floor(x));
      c.push_back(std::min<std::uint64_t>(fl + 1, n));
      if (static_cast<double>(fl) == x && fl >= 1 && fl <= n) c.push_back(fl);
      return c;
    };
    const double r = std::abs(z);
    const auto ks = candidates(r * static_cast<double>(n));
    std::vector<std::uint64_t> ls;
    if (r == 0.0) {
      for (std::uint64_t l = 1; l <= n; ++l) ls.push_back(l);
    } else {
      ls = candidates(angle_of(z) / (2.0 * kPi) * static_cast<double>(n));
    }
    for (auto k : ks)
      for (auto l : ls) {
        const DyadicRectangle q{j, k, l};
        if (!rect_contains(q, z)) continue;
        best = std::max(best, rect_average(field, q, rule));
      }
  }
  return best;
}

CZDecomposition cz_decompose(const ScalarField& field, double t, unsigned max_level, const DyadicRule& rule,
                             bool strict) {
  CZDecomposition out{t, {}, {}, 0.0};
  const double global = rect_average(field, kWholeDisk, rule);
  if (global > t) {
    std::ostringstream os;
    os << "disk average " << global << " exceeds threshold " << t;
    throw ThresholdTooLowError(os.str());
  }
  std::vector<DyadicRectangle> stack{kWholeDisk};
  while (!stack.empty()) {
    const DyadicRectangle q = stack.back();
    stack.pop_back();
    if (q.j > 0) {
      const double a = rect_average(field, q, rule);
      if (a > t) {
        out.selected.push_back(q);
        out.averages.push_back(a);
        continue;
      }
    }
    if (q.j < max_level) {
      const auto ch = rect_children(q);
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    } else {
      for (const auto& nd : rule.nodes(q))
        if (field(nd.z) > t) {
          out.unresolved_area += rect_geometry(q).area;
          break;
        }
    }
  }
  if (strict && out.unresolved_area > 0.0) {
    std::ostringstream os;
    os << "field exceeds " << t << " on unselected level-" << max_level << " rectangles of total area "
       << out.unresolved_area;
    throw DepthExhaustedError(out, os.str());
  }
  return out;
}

FairShare fairshare_check(const ScalarField& field, const DyadicRectangle& q, const std::vector<DyadicRectangle>& e,
                          double delta, const DyadicRule& rule) {
  if (!(delta > 0.0 && delta < 1.0)) throw RangeError("delta must lie in (0, 1)");
  const double q_area = rect_geometry(q).area;
  double e_area = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!rect_is_within(e[i], q)) throw NotSubsetError(describe(e[i]) + " is not inside " + describe(q));
    for (std::size_t m = 0; m < i; ++m)
      if (rect_is_within(e[i], e[m]) || rect_is_within(e[m], e[i]))
        throw RangeError(describe(e[i]) + " overlaps " + describe(e[m]));
    e_area += rect_geometry(e[i]).area;
  }
  const double leb = e_area / q_area;
  if (leb > delta * (1.0 + 1e-15)) throw RangeError("|E| exceeds delta |Q|");

  const double c = scalar_a2_constant(field, q, rule);
  const double bound = 1.0 - (1.0 - delta) * (1.0 - delta) / c;
  double mu_e = 0.0;
  for (const auto& r : e) mu_e += rect_integral(field, r, rule);
  const double mu_q = rect_integral(field, q, rule);
  if (!(mu_q > 0.0)) throw ZeroDenominatorError("mu(Q) vanishes");
  return {leb, mu_e / mu_q, bound};
}

ReverseHolderCertificate reverse_holder(const PolyMatrixSymbol& f, double epsilon, const QuadratureRule& rule) {
  if (!(epsilon > 0.0)) throw RangeError("epsilon must be positive");
  std::vector<double> hi;
  std::vector<double> lo;
  hi.reserve(rule.size());
  lo.reserve(rule.size());
  for (const auto& nd : rule.nodes()) {
    const double tr = f(nd.z).squaredNorm();
    hi.push_back(nd.weight * std::pow(tr, 1.0 + epsilon));
    lo.push_back(nd.weight * tr);
  }
  ReverseHolderCertificate c;
  c.epsilon = epsilon;
  c.lhs = pairwise_sum(std::span<const double>(hi));
  c.rhs_base = pairwise_sum(std::span<const double>(lo));
  if (!(c.rhs_base > 0.0)) throw ZeroDenominatorError("int tr(F*F) vanishes");
  c.constant = c.lhs / std::pow(c.rhs_base, 1.0 + epsilon);
  return c;
}

std::optional<ReverseHolderCertificate> reverse_holder_search(const PolyMatrixSymbol& f, const QuadratureRule& rule,
                                                              double c_max) {
  for (int m = 1; m <= 10; ++m) {
    const ReverseHolderCertificate c = reverse_holder(f, std::ldexp(1.0, -m), rule);
    if (c.constant <= c_max) return c;
  }
  return std::nullopt;
}

double conjugation_a2_check(const PolyMatrixSymbol& f, const HermitianMatrix& j_matrix, unsigned max_level,
                            const DyadicRule& rule) {
  if (static_cast<std::size_t>(j_matrix.dim()) != f.dim())
    throw DimensionMismatchError("conjugating matrix and symbol dimensions differ");
  if (!(j_matrix.min_eigenvalue() > 0.0)) throw RangeError("conjugating matrix must be positive definite");
  const CMatrix jm = j_matrix.matrix();
  const CMatrix jinv = jm.inverse();
  const HermitianField w = HermitianField::explicit_field(
      f.dim(), [f, jm](Cx z) { return HermitianMatrix(CMatrix(jm * gram_at(f, z).matrix() * jm)); });
  const HermitianField winv = HermitianField::explicit_field(
      f.dim(), [f, jinv](Cx z) { return HermitianMatrix(CMatrix(jinv * inverse_gram_at(f, z).matrix() * jinv)); });
  const double conj = a2_constant(w, winv, max_level, rule).constant;
  const double base = a2_constant(f, max_level, rule).constant;
  return conj / base;
}

}  // namespace bergtoep
