#include "bergtoep/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bergtoep/errors.hpp"

namespace bergtoep {

PowerSeries::PowerSeries(std::vector<Cx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

PowerSeries PowerSeries::monomial(std::size_t degree, Cx coeff) {
  std::vector<Cx> c(degree + 1, Cx(0.0));
  c[degree] = coeff;
  return PowerSeries(std::move(c));
}

Cx PowerSeries::operator()(Cx z) const {
  Cx acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

PowerSeries PowerSeries::derivative() const {
  if (coeffs_.size() <= 1) return PowerSeries();
  std::vector<Cx> d(coeffs_.size() - 1);
  for (std::size_t s = 1; s < coeffs_.size(); ++s) d[s - 1] = coeffs_[s] * static_cast<double>(s);
  return PowerSeries(std::move(d));
}

bool PowerSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Cx c) { return c == Cx(0.0); });
}

PowerSeries PowerSeries::operator+(const PowerSeries& o) const {
  std::vector<Cx> c(std::max(coeffs_.size(), o.coeffs_.size()), Cx(0.0));
  for (std::size_t s = 0; s < c.size(); ++s) c[s] = coeff(s) + o.coeff(s);
  return PowerSeries(std::move(c));
}

PowerSeries PowerSeries::operator*(Cx s) const {
  std::vector<Cx> c = coeffs_;
  for (auto& x : c) x *= s;
  return PowerSeries(std::move(c));
}

PolyMatrixSymbol::PolyMatrixSymbol(std::size_t n, std::vector<PowerSeries> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) throw DimensionMismatchError("PolyMatrixSymbol: entry count must be n*n");
}

PolyMatrixSymbol PolyMatrixSymbol::identity(std::size_t n) {
  std::vector<PowerSeries> e(n * n);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = PowerSeries::constant(1.0);
  return PolyMatrixSymbol(n, std::move(e));
}

PolyMatrixSymbol PolyMatrixSymbol::zero(std::size_t n) { return PolyMatrixSymbol(n, std::vector<PowerSeries>(n * n)); }

PolyMatrixSymbol PolyMatrixSymbol::diagonal(std::vector<PowerSeries> diag) {
  const std::size_t n = diag.size();
  std::vector<PowerSeries> e(n * n);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = std::move(diag[i]);
  return PolyMatrixSymbol(n, std::move(e));
}

std::size_t PolyMatrixSymbol::degree() const {
  std::size_t d = 0;
  for (const auto& e : entries_) d = std::max(d, e.degree());
  return d;
}

CMatrix PolyMatrixSymbol::operator()(Cx z) const {
  const auto n = static_cast<Eigen::Index>(n_);
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = entries_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)](z);
  return m;
}

PolyMatrixSymbol PolyMatrixSymbol::operator+(const PolyMatrixSymbol& o) const {
  if (o.n_ != n_) throw DimensionMismatchError("PolyMatrixSymbol: dimension mismatch in +");
  std::vector<PowerSeries> e(entries_.size());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = entries_[k] + o.entries_[k];
  return PolyMatrixSymbol(n_, std::move(e));
}

PolyMatrixSymbol PolyMatrixSymbol::operator*(Cx s) const {
  std::vector<PowerSeries> e(entries_.size());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = entries_[k] * s;
  return PolyMatrixSymbol(n_, std::move(e));
}

VectorPoly VectorPoly::unit_monomial(std::size_t n, std::size_t i, std::size_t a) {
  std::vector<PowerSeries> c(n);
  c[i] = PowerSeries::monomial(a);
  return VectorPoly(std::move(c));
}

std::size_t VectorPoly::degree() const {
  std::size_t d = 0;
  for (const auto& c : components_) d = std::max(d, c.degree());
  return d;
}

CVector VectorPoly::operator()(Cx z) const {
  CVector v(static_cast<Eigen::Index>(components_.size()));
  for (std::size_t i = 0; i < components_.size(); ++i) v(static_cast<Eigen::Index>(i)) = components_[i](z);
  return v;
}

VectorPoly VectorPoly::derivative() const {
  std::vector<PowerSeries> d;
  d.reserve(components_.size());
  for (const auto& c : components_) d.push_back(c.derivative());
  return VectorPoly(std::move(d));
}

HermitianField HermitianField::gram(PolyMatrixSymbol f) {
  const std::size_t n = f.dim();
  return HermitianField(n, Role::Gram, 1.0, [f = std::move(f)](Cx z) { return gram_at(f, z); });
}

HermitianField HermitianField::inverse_gram(PolyMatrixSymbol f) {
  const std::size_t n = f.dim();
  return HermitianField(n, Role::InverseGram, -1.0, [f = std::move(f)](Cx z) { return inverse_gram_at(f, z); });
}

HermitianField HermitianField::gram_power(PolyMatrixSymbol f, double p) {
  const std::size_t n = f.dim();
  return HermitianField(n, Role::GramPower, p,
                        [f = std::move(f), p](Cx z) { return hermitian_power(gram_at(f, z), p); });
}

HermitianField HermitianField::scalar_trace(PolyMatrixSymbol f) {
  return HermitianField(1, Role::ScalarTrace, 1.0, [f = std::move(f)](Cx z) {
    CMatrix m(1, 1);
    m(0, 0) = gram_at(f, z).trace();
    return HermitianMatrix(m);
  });
}

HermitianField HermitianField::explicit_field(std::size_t n, Evaluator fn) {
  return HermitianField(n, Role::Explicit, 1.0, std::move(fn));
}

HermitianField HermitianField::constant(const HermitianMatrix& a) {
  return HermitianField(static_cast<std::size_t>(a.dim()), Role::Explicit, 1.0, [a](Cx) { return a; });
}

namespace {

template <typename T>
T pairwise_sum_impl(std::span<const T> xs) {
  if (xs.size() <= 8) {
    T s{};
    for (const T& x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum_impl(xs.first(half)) + pairwise_sum_impl(xs.subspan(half));
}

}  // namespace

Cx pairwise_sum(std::span<const Cx> xs) { return pairwise_sum_impl(xs); }
double pairwise_sum(std::span<const double> xs) { return pairwise_sum_impl(xs); }

Cx monomial_inner(std::size_t a, std::size_t b, std::size_t k) {
  if (a != b) return 0.0;
  // a! k! / (a+k+1)! = prod_{i=1..k} i/(a+i) / (a+k+1)
  double v = 1.0;
  for (std::size_t i = 1; i <= k; ++i) v *= static_cast<double>(i) / static_cast<double>(a + i);
  return v / static_cast<double>(a + k + 1);
}

Cx series_inner_weighted(const PowerSeries& f, const PowerSeries& g, std::size_t k) {
  const std::size_t m = std::min(f.degree(), g.degree()) + 1;
  std::vector<Cx> terms(m);
  for (std::size_t s = 0; s < m; ++s) terms[s] = f.coeff(s) * std::conj(g.coeff(s)) * monomial_inner(s, s, k);
  return pairwise_sum(std::span<const Cx>(terms));
}

Cx series_inner(const PowerSeries& f, const PowerSeries& g) { return series_inner_weighted(f, g, 0); }

Cx vector_inner(const VectorPoly& f, const VectorPoly& g) {
  if (f.dim() != g.dim()) throw DimensionMismatchError("vector_inner: dimension mismatch");
  Cx s = 0.0;
  for (std::size_t i = 0; i < f.dim(); ++i) s += series_inner(f[i], g[i]);
  return s;
}

IpFormulaResult ip_via_derivative_formula(const VectorPoly& f, const VectorPoly& g) {
  if (f.dim() != g.dim()) throw DimensionMismatchError("ip_via_derivative_formula: dimension mismatch");
  const VectorPoly df = f.derivative();
  const VectorPoly dg = g.derivative();
  Cx lhs = 0.0;
  Cx rhs = 0.0;
  for (std::size_t i = 0; i < f.dim(); ++i) {
    lhs += series_inner(f[i], g[i]);
    rhs += 3.0 * series_inner_weighted(f[i], g[i], 2) + 0.5 * series_inner_weighted(df[i], dg[i], 2) +
           series_inner_weighted(df[i], dg[i], 3) / 3.0;
  }
  return {lhs, rhs, std::abs(lhs - rhs)};
}

HermitianMatrix gram_at(const PolyMatrixSymbol& f, Cx z) {
  const CMatrix m = f(z);
  return HermitianMatrix(CMatrix(m.adjoint() * m));
}

HermitianMatrix inverse_gram_at(const PolyMatrixSymbol& f, Cx z) {
  const CMatrix m = f(z);
  const Eigen::PartialPivLU<CMatrix> lu(m);
  const double det = std::abs(lu.determinant());
  if (!(det >= kTolDet)) {
    std::ostringstream os;
    os << "|det F(z)| = " << det << " at z = (" << z.real() << ", " << z.imag() << ")";
    throw SingularSymbolError(z, os.str());
  }
  const CMatrix inv = lu.inverse();
  return HermitianMatrix(CMatrix(inv * inv.adjoint()));
}

}  // namespace bergtoep
