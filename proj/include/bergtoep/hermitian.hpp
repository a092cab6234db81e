#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace bergtoep {

using Cx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kTolHerm = 1e-12;
inline constexpr double kTolPsd = 1e-10;

// Eigenpairs of a Hermitian matrix, eigenvalues ascending, eigenvectors as
// columns of `vectors`.
struct EigenDecomposition {
  std::vector<double> values;
  CMatrix vectors;
};

// Cyclic Jacobi rotations; stops once the off-diagonal Frobenius norm drops
// below `off_tol` (absolute, scaled by the matrix norm when that exceeds 1).
EigenDecomposition jacobi_eigen(const CMatrix& a, double off_tol = 1e-13);

// n x n complex matrix equal to its conjugate transpose. The input is
// symmetrized as (A + A*)/2 on construction.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(Eigen::Index n) : data_(CMatrix::Zero(n, n)) {}
  explicit HermitianMatrix(const CMatrix& m);

  static HermitianMatrix identity(Eigen::Index n);
  static HermitianMatrix diagonal(const std::vector<double>& d);

  Eigen::Index dim() const { return data_.rows(); }
  const CMatrix& matrix() const { return data_; }
  Cx operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

  double trace() const { return data_.trace().real(); }
  EigenDecomposition eigen() const { return jacobi_eigen(data_); }
  double min_eigenvalue() const;
  double max_eigenvalue() const;

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;

 private:
  CMatrix data_;
};

// A^p through the eigendecomposition. Eigenvalues in [-kTolPsd, 0) are
// clamped to zero; anything more negative throws NotPsdError.
HermitianMatrix hermitian_power(const HermitianMatrix& a, double p);

// Loewner order test: true iff lambda_min(B - A) >= -tol.
bool hermitian_order(const HermitianMatrix& a, const HermitianMatrix& b, double tol);

// tr(A B) for Hermitian A, B; real by construction.
double trace_product(const HermitianMatrix& a, const HermitianMatrix& b);

// ||A^{1/2} B^{1/2}||, the per-rectangle matrix A2 expression. Computed as
// sqrt(lambda_max(A^{1/2} B A^{1/2})).
double sqrt_product_norm(const HermitianMatrix& a, const HermitianMatrix& b);

}  // namespace bergtoep
