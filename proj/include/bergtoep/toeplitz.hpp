#pragma once

#include <cstddef>
#include <optional>

#include "bergtoep/bergman.hpp"

namespace bergtoep {

// Dense matrix of an operator from polynomials of degree <= k_in to
// polynomials of degree <= k_out in L^2_a(C^n), expressed in the orthonormal
// basis e_{s,i} = sqrt(s+1) z^s (coordinate i). Rows and columns are indexed
// degree-major: index(s, i) = s*n + i.
class TruncatedOperator {
 public:
  TruncatedOperator(std::size_t n, std::size_t k_in, std::size_t k_out);
  TruncatedOperator(std::size_t n, std::size_t k_in, std::size_t k_out, CMatrix matrix);

  static TruncatedOperator identity(std::size_t n, std::size_t k);

  std::size_t dim() const { return n_; }
  std::size_t k_in() const { return k_in_; }
  std::size_t k_out() const { return k_out_; }
  const CMatrix& matrix() const { return matrix_; }
  CMatrix& matrix() { return matrix_; }

  Eigen::Index index(std::size_t degree, std::size_t coord) const {
    return static_cast<Eigen::Index>(degree * n_ + coord);
  }

  // Zero-pads or truncates the input/output degree ranges. Truncating the
  // output discards components, so it is only exact when those rows vanish.
  TruncatedOperator resized(std::size_t k_in, std::size_t k_out) const;

  // this * rhs; the inner degree ranges are reconciled by zero-padding.
  TruncatedOperator compose(const TruncatedOperator& rhs) const;
  TruncatedOperator adjoint() const;

  TruncatedOperator operator+(const TruncatedOperator& o) const;
  TruncatedOperator operator-(const TruncatedOperator& o) const;
  TruncatedOperator operator*(Cx s) const;

  // Applies the operator to a vector polynomial of degree <= k_in.
  VectorPoly apply(const VectorPoly& v) const;

 private:
  std::size_t n_;
  std::size_t k_in_;
  std::size_t k_out_;
  CMatrix matrix_;
};

// Coordinates of v in the orthonormal basis, length n*(k+1).
CVector to_basis(const VectorPoly& v, std::size_t k);
VectorPoly from_basis(const CVector& x, std::size_t n, std::size_t k);

// T_F on degree <= K; exact, k_out = K + deg F.
TruncatedOperator analytic_toeplitz(const PolyMatrixSymbol& f, std::size_t k);

// T_{G*} on degree <= K; degree preserving, k_out = K.
TruncatedOperator coanalytic_toeplitz(const PolyMatrixSymbol& g, std::size_t k);

// T_F T_{G*} P_K, k_out = K + deg F.
TruncatedOperator product_restricted(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, std::size_t k);

// Forward and backward scalar shifts T_z, T_zbar for dimension n. T_z raises
// k_out by one; T_zbar keeps the degree range.
TruncatedOperator shift_forward(std::size_t n, std::size_t k);
TruncatedOperator shift_backward(std::size_t n, std::size_t k);

struct NormOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  double fail_tol = 1e-8;
};

struct NormResult {
  double norm;
  CVector right_vector;  // approximate top right singular vector, unit length
  int iterations;
};

// Largest singular value by power iteration on T*T. The default start vector
// is deterministic (fixed seed). A warm start whose Rayleigh quotient is
// already high keeps sequences of nested truncations monotone.
NormResult operator_norm_detailed(const TruncatedOperator& t, const std::optional<CVector>& start = std::nullopt,
                                  const NormOptions& opts = {});
double operator_norm(const TruncatedOperator& t, const NormOptions& opts = {});

// F (x) G with block (i,j) = sum_l f_il (x) g_jl, on inputs of degree <= K;
// k_out = max(K, deg F).
TruncatedOperator rank_one(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, std::size_t k);

// trace{(F (x) G)(G (x) F)} = sum_{q,m,r,l} <f_qr, f_ql> <g_ml, g_mr>.
double rank_one_trace(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g);

// Operator-norm difference between F (x) G and
//   T_F T_{G*} - 2 T_z T_F T_{G*} T_zbar + T_z^2 T_F T_{G*} T_zbar^2
// on inputs of degree <= K - deg F - 2, all operators truncated to degree K.
// Requires K >= deg F + deg G + 4 (BufferTooSmallError otherwise).
double park_residual(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, std::size_t k);

}  // namespace bergtoep
