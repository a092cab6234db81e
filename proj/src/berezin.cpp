#include "bergtoep/berezin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bergtoep/errors.hpp"
#include "bergtoep/toeplitz.hpp"

namespace bergtoep {

namespace {

constexpr std::size_t kSeriesCap = 1'000'000;
constexpr double kSeriesRelTol = 1e-14;

// 1 - |w|^2 without cancellation near the boundary.
double one_minus_abs2(Cx w) {
  const double r = std::abs(w);
  return (1.0 - r) * (1.0 + r);
}

}  // namespace

Cx mobius(Cx w, Cx z) { return (w - z) / (1.0 - std::conj(w) * z); }

Cx normalized_kernel(Cx w, Cx z) {
  const Cx d = 1.0 - z * std::conj(w);
  return one_minus_abs2(w) / (d * d);
}

double kernel_weight(Cx w, Cx z) {
  const double s = one_minus_abs2(w);
  const double d = std::norm(1.0 - std::conj(w) * z);
  return s * s / (d * d);
}

Cx berezin_monomial(std::size_t a, std::size_t b, Cx w) {
  if (std::abs(w) == 0.0) return a == b ? Cx(1.0 / static_cast<double>(a + 1)) : Cx(0.0);
  if (!(std::abs(w) < 1.0)) throw RangeError("berezin_monomial needs |w| < 1");

  // With e = |a-b| and c = max(a,b) the series is
  //   (1-|w|^2)^2 * phase * sum_j (j+1)(j+e+1)/(c+j+1) rho^j,  rho = |w|^2,
  // where phase = w^e if a >= b and conj(w)^e otherwise. All terms are
  // positive, so the partial sums increase monotonically.
  const std::size_t e = a >= b ? a - b : b - a;
  const double c = static_cast<double>(std::max(a, b));
  const double ed = static_cast<double>(e);
  const double rho = std::norm(w);

  double sum = 0.0;
  double term = (ed + 1.0) / (c + 1.0);
  std::size_t j = 0;
  for (;; ++j) {
    sum += term;
    const double jd = static_cast<double>(j);
    // Upper bound on every later term ratio, decreasing in j.
    const double ratio_bound = rho * (jd + 2.0) * (jd + ed + 2.0) / ((jd + 1.0) * (jd + ed + 1.0));
    if (ratio_bound < 1.0) {
      const double tail = term * ratio_bound / (1.0 - ratio_bound);
      if (tail < kSeriesRelTol * sum) break;
    }
    if (j + 1 >= kSeriesCap) {
      std::ostringstream os;
      os << "Berezin series for (" << a << "," << b << ") at |w| = " << std::abs(w) << " exceeded " << kSeriesCap
         << " terms";
      throw SeriesSlowConvergenceError(os.str());
    }
    term *= rho * (jd + 2.0) * (jd + ed + 2.0) * (c + jd + 1.0) / ((jd + 1.0) * (jd + ed + 1.0) * (c + jd + 2.0));
  }
  const double s = one_minus_abs2(w);
  const Cx phase = a >= b ? std::pow(w, static_cast<int>(e)) : std::pow(std::conj(w), static_cast<int>(e));
  return s * s * sum * phase;
}

HermitianMatrix berezin_gram(const PolyMatrixSymbol& f, Cx w) {
  const std::size_t n = f.dim();
  const std::size_t d = f.degree();
  // table(t, s) = B(z^t conj(z)^s)(w)
  std::vector<Cx> table((d + 1) * (d + 1));
  for (std::size_t t = 0; t <= d; ++t)
    for (std::size_t s = 0; s <= t; ++s) {
      table[t * (d + 1) + s] = berezin_monomial(t, s, w);
      table[s * (d + 1) + t] = std::conj(table[t * (d + 1) + s]);
    }

  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Cx acc = 0.0;
      for (std::size_t q = 0; q < n; ++q) {
        const PowerSeries& fqi = f.entry(q, i);
        const PowerSeries& fqj = f.entry(q, j);
        for (std::size_t s = 0; s <= fqi.degree(); ++s) {
          const Cx as = std::conj(fqi.coeff(s));
          if (as == Cx(0.0)) continue;
          for (std::size_t t = 0; t <= fqj.degree(); ++t) acc += as * fqj.coeff(t) * table[t * (d + 1) + s];
        }
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return HermitianMatrix(m);
}

FieldSamples::FieldSamples(const HermitianField& field, const QuadratureRule& rule)
    : n_(field.dim()), nodes_(rule.nodes()) {
  values_.reserve(nodes_.size());
  for (const auto& nd : nodes_) values_.push_back(field(nd.z));
  flat_.reserve(values_.size() * n_ * n_);
  for (const auto& v : values_)
    for (Eigen::Index k = 0; k < v.matrix().size(); ++k) flat_.push_back(v.matrix().data()[k]);
}

QuadratureRule berezin_rule_for(std::size_t max_degree, double max_radius) {
  if (!(max_radius < 1.0)) throw RangeError("berezin_rule_for needs max_radius < 1");
  std::size_t n_theta = 8 * max_degree + 64;
  const double want = 32.0 / (1.0 - std::max(0.0, max_radius));
  if (static_cast<double>(n_theta) < want) {
    n_theta = 1;
    while (static_cast<double>(n_theta) < want) n_theta *= 2;
  }
  return QuadratureRule(64, n_theta);
}

HermitianMatrix berezin_quadrature(const FieldSamples& samples, Cx w) {
  if (!(std::abs(w) < 1.0)) throw RangeError("Berezin transform needs |w| < 1");
  const std::size_t nn = samples.dim() * samples.dim();
  std::vector<Cx> acc(nn, Cx(0.0));
  const auto& nodes = samples.nodes();
  const Cx* v = samples.flat().data();
  for (std::size_t i = 0; i < nodes.size(); ++i, v += nn) {
    const double kw = nodes[i].weight * kernel_weight(w, nodes[i].z);
    for (std::size_t k = 0; k < nn; ++k) acc[k] += v[k] * kw;
  }
  const auto n = static_cast<Eigen::Index>(samples.dim());
  return HermitianMatrix(CMatrix(Eigen::Map<const CMatrix>(acc.data(), n, n)));
}

HermitianMatrix berezin_quadrature(const HermitianField& field, Cx w, const QuadratureRule& rule) {
  return berezin_quadrature(FieldSamples(field, rule), w);
}

HermitianMatrix berezin_power_gram(const PolyMatrixSymbol& f, double p, Cx w, const QuadratureRule& rule) {
  return berezin_quadrature(HermitianField::gram_power(f, p), w, rule);
}

double p0_transform(const ScalarField& f, Cx w, const QuadratureRule& rule) {
  std::vector<double> terms;
  terms.reserve(rule.size());
  for (const auto& nd : rule.nodes()) terms.push_back(nd.weight * f(nd.z) / std::norm(1.0 - std::conj(w) * nd.z));
  return pairwise_sum(std::span<const double>(terms));
}

double mobius_invariance_residual(const PolyMatrixSymbol& f, Cx w, const QuadratureRule& rule) {
  const auto n = static_cast<Eigen::Index>(f.dim());
  CMatrix avg = CMatrix::Zero(n, n);
  for (const auto& nd : rule.nodes()) avg += gram_at(f, mobius(w, nd.z)).matrix() * nd.weight;
  const CMatrix diff = berezin_gram(f, w).matrix() - avg;
  return diff.cwiseAbs().maxCoeff();
}

double weighted_rank_one_trace(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, Cx w,
                               const QuadratureRule& rule) {
  if (f.dim() != g.dim()) throw DimensionMismatchError("symbols F and G must have the same dimension");
  const std::size_t n = f.dim();
  // fip[q][r][l] = <f_qr, f_ql |k_w|^2>, gip[m][l][r] = <g_ml, g_mr |k_w|^2>
  std::vector<Cx> fip(n * n * n, Cx(0.0));
  std::vector<Cx> gip(n * n * n, Cx(0.0));
  for (const auto& nd : rule.nodes()) {
    const double kw = nd.weight * kernel_weight(w, nd.z);
    const CMatrix fz = f(nd.z);
    const CMatrix gz = g(nd.z);
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t l = 0; l < n; ++l) {
          const auto qi = static_cast<Eigen::Index>(q);
          const auto ri = static_cast<Eigen::Index>(r);
          const auto li = static_cast<Eigen::Index>(l);
          fip[(q * n + r) * n + l] += fz(qi, ri) * std::conj(fz(qi, li)) * kw;
          gip[(q * n + r) * n + l] += gz(qi, ri) * std::conj(gz(qi, li)) * kw;
        }
  }
  Cx tr = 0.0;
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t l = 0; l < n; ++l) tr += fip[(q * n + r) * n + l] * gip[(m * n + l) * n + r];
  return tr.real();
}

KernelIdentity kernel_product_identity(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, const VectorPoly& u,
                                       const VectorPoly& v, Cx w, const QuadratureRule& rule) {
  const std::size_t n = f.dim();
  if (g.dim() != n || u.dim() != n || v.dim() != n)
    throw DimensionMismatchError("kernel_product_identity: F, G, u, v must share the dimension");

  const std::size_t k = std::max(u.degree(), v.degree());
  const CVector fu = coanalytic_toeplitz(f, k).apply(u)(w);
  const CVector gv = coanalytic_toeplitz(g, k).apply(v)(w);
  const Cx lhs = gv.dot(fu);

  // a[j][l] = <u_j, f_jl k_w>, b[i][l] = <g_il k_w, v_i>
  std::vector<Cx> a(n * n, Cx(0.0));
  std::vector<Cx> b(n * n, Cx(0.0));
  for (const auto& nd : rule.nodes()) {
    const Cx kw = normalized_kernel(w, nd.z);
    const CMatrix fz = f(nd.z);
    const CMatrix gz = g(nd.z);
    const CVector uz = u(nd.z);
    const CVector vz = v(nd.z);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) {
        const auto ji = static_cast<Eigen::Index>(j);
        const auto li = static_cast<Eigen::Index>(l);
        a[j * n + l] += nd.weight * uz(ji) * std::conj(fz(ji, li) * kw);
        b[j * n + l] += nd.weight * gz(ji, li) * kw * std::conj(vz(ji));
      }
  }
  Cx sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) sum += a[j * n + l] * b[i * n + l];
  const double s = one_minus_abs2(w);
  const Cx rhs = sum / (s * s);
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return {lhs, rhs, std::abs(lhs - rhs) / scale};
}

}  // namespace bergtoep
