#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

#include "bergtoep/hermitian.hpp"

namespace bergtoep {

// f(z) = sum_s a_s z^s, coefficients stored unnormalized.
class PowerSeries {
 public:
  PowerSeries() : coeffs_{Cx(0.0)} {}
  explicit PowerSeries(std::vector<Cx> coeffs);
  PowerSeries(std::initializer_list<Cx> coeffs) : PowerSeries(std::vector<Cx>(coeffs)) {}

  static PowerSeries monomial(std::size_t degree, Cx coeff = 1.0);
  static PowerSeries constant(Cx c) { return PowerSeries({c}); }

  // Structural degree (length - 1); trailing zeros are kept.
  std::size_t degree() const { return coeffs_.size() - 1; }
  std::span<const Cx> coeffs() const { return coeffs_; }
  Cx coeff(std::size_t s) const { return s < coeffs_.size() ? coeffs_[s] : Cx(0.0); }

  Cx operator()(Cx z) const;
  PowerSeries derivative() const;
  bool is_zero() const;

  PowerSeries operator+(const PowerSeries& o) const;
  PowerSeries operator*(Cx s) const;

 private:
  std::vector<Cx> coeffs_;
};

// n x n matrix of analytic polynomials, row-major.
class PolyMatrixSymbol {
 public:
  PolyMatrixSymbol() = default;
  PolyMatrixSymbol(std::size_t n, std::vector<PowerSeries> entries);

  static PolyMatrixSymbol identity(std::size_t n);
  static PolyMatrixSymbol zero(std::size_t n);
  static PolyMatrixSymbol scalar(PowerSeries f) { return PolyMatrixSymbol(1, {std::move(f)}); }
  static PolyMatrixSymbol diagonal(std::vector<PowerSeries> diag);

  std::size_t dim() const { return n_; }
  std::size_t degree() const;
  const PowerSeries& entry(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  PowerSeries& entry(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }

  CMatrix operator()(Cx z) const;

  PolyMatrixSymbol operator+(const PolyMatrixSymbol& o) const;
  PolyMatrixSymbol operator*(Cx s) const;

 private:
  std::size_t n_ = 0;
  std::vector<PowerSeries> entries_;
};

class VectorPoly {
 public:
  VectorPoly() = default;
  explicit VectorPoly(std::vector<PowerSeries> components) : components_(std::move(components)) {}

  static VectorPoly zero(std::size_t n) { return VectorPoly(std::vector<PowerSeries>(n)); }
  // (z^a at coordinate i, 0 elsewhere)
  static VectorPoly unit_monomial(std::size_t n, std::size_t i, std::size_t a);

  std::size_t dim() const { return components_.size(); }
  std::size_t degree() const;
  const PowerSeries& operator[](std::size_t i) const { return components_[i]; }
  const std::vector<PowerSeries>& components() const { return components_; }

  CVector operator()(Cx z) const;
  VectorPoly derivative() const;

 private:
  std::vector<PowerSeries> components_;
};

// Pointwise Hermitian-valued function on the disk.
class HermitianField {
 public:
  enum class Role { Gram, InverseGram, GramPower, ScalarTrace, Explicit };
  using Evaluator = std::function<HermitianMatrix(Cx)>;

  static HermitianField gram(PolyMatrixSymbol f);
  static HermitianField inverse_gram(PolyMatrixSymbol f);
  static HermitianField gram_power(PolyMatrixSymbol f, double p);
  // 1 x 1 field tr(F*F)
  static HermitianField scalar_trace(PolyMatrixSymbol f);
  static HermitianField explicit_field(std::size_t n, Evaluator fn);
  static HermitianField constant(const HermitianMatrix& a);

  std::size_t dim() const { return n_; }
  Role role() const { return role_; }
  double exponent() const { return exponent_; }
  HermitianMatrix operator()(Cx z) const { return eval_(z); }

 private:
  HermitianField(std::size_t n, Role role, double exponent, Evaluator eval)
      : n_(n), role_(role), exponent_(exponent), eval_(std::move(eval)) {}

  std::size_t n_ = 0;
  Role role_ = Role::Explicit;
  double exponent_ = 1.0;
  Evaluator eval_;
};

// Nonnegative scalar field on the disk.
using ScalarField = std::function<double(Cx)>;

// Sum with pairwise (cascade) summation.
Cx pairwise_sum(std::span<const Cx> xs);
double pairwise_sum(std::span<const double> xs);

// Closed form of the integral of z^a conj(z)^b (1-|z|^2)^k over the normalized
// disk: delta_ab * a! k! / (a+k+1)!.
Cx monomial_inner(std::size_t a, std::size_t b, std::size_t k);

// <f, g> in the scalar Bergman space: sum_s a_s conj(b_s) / (s+1).
Cx series_inner(const PowerSeries& f, const PowerSeries& g);

// Weighted inner product int (1-|z|^2)^k f conj(g) dA.
Cx series_inner_weighted(const PowerSeries& f, const PowerSeries& g, std::size_t k);

Cx vector_inner(const VectorPoly& f, const VectorPoly& g);

struct IpFormulaResult {
  Cx lhs;
  Cx rhs;
  double residual;
};

// Compares <f,g> against the three-term representation
//   3 int (1-|z|^2)^2 <f,g> + 1/2 int (1-|z|^2)^2 <f',g'> + 1/3 int (1-|z|^2)^3 <f',g'>.
IpFormulaResult ip_via_derivative_formula(const VectorPoly& f, const VectorPoly& g);

// F(z)* F(z)
HermitianMatrix gram_at(const PolyMatrixSymbol& f, Cx z);

inline constexpr double kTolDet = 1e-12;

// F(z)^{-1} F(z)^{-*}; throws SingularSymbolError when |det F(z)| < kTolDet.
HermitianMatrix inverse_gram_at(const PolyMatrixSymbol& f, Cx z);

}  // namespace bergtoep
