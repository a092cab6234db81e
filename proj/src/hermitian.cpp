#include "bergtoep/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bergtoep/errors.hpp"

namespace bergtoep {

namespace {

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition jacobi_eigen(const CMatrix& input, double off_tol) {
  const Eigen::Index n = input.rows();
  CMatrix a = 0.5 * (input + input.adjoint());
  CMatrix v = CMatrix::Identity(n, n);

  const double scale = std::max(1.0, a.norm());
  const double threshold = off_tol * scale;

  for (int sweep = 0; sweep < 100 && off_diagonal_norm(a) >= threshold; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Cx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        // Phase-rotate so the (p,q) entry is real, then a real Jacobi rotation.
        const Cx phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * mag, aqq - app);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        // Unitary acting on coordinates (p,q):
        //   col p <- c*col p - s*conj(phase)*col q
        //   col q <- s*phase*col p + c*col q
        for (Eigen::Index k = 0; k < n; ++k) {
          const Cx akp = a(k, p);
          const Cx akq = a(k, q);
          a(k, p) = c * akp - s * std::conj(phase) * akq;
          a(k, q) = s * phase * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Cx apk = a(p, k);
          const Cx aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * std::conj(phase) * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const Cx vkp = v(k, p);
          const Cx vkq = v(k, q);
          v(k, p) = c * vkp - s * std::conj(phase) * vkq;
          v(k, q) = s * phase * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() < a(y, y).real(); });

  EigenDecomposition out;
  out.values.reserve(static_cast<std::size_t>(n));
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values.push_back(a(order[i], order[i]).real());
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

HermitianMatrix::HermitianMatrix(const CMatrix& m) : data_(0.5 * (m + m.adjoint())) {}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n) {
  return HermitianMatrix(CMatrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  return HermitianMatrix(m);
}

double HermitianMatrix::min_eigenvalue() const {
  if (dim() == 0) return 0.0;
  if (dim() == 1) return data_(0, 0).real();
  return eigen().values.front();
}

double HermitianMatrix::max_eigenvalue() const {
  if (dim() == 0) return 0.0;
  if (dim() == 1) return data_(0, 0).real();
  return eigen().values.back();
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  return HermitianMatrix(CMatrix(data_ + o.data_));
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  return HermitianMatrix(CMatrix(data_ - o.data_));
}

HermitianMatrix HermitianMatrix::operator*(double s) const { return HermitianMatrix(CMatrix(data_ * s)); }

HermitianMatrix hermitian_power(const HermitianMatrix& a, double p) {
  const Eigen::Index n = a.dim();
  if (n == 1) {
    const double x = a(0, 0).real();
    if (x < -kTolPsd) {
      std::ostringstream os;
      os << "eigenvalue " << x << " below -" << kTolPsd;
      throw NotPsdError(os.str());
    }
    CMatrix m(1, 1);
    m(0, 0) = std::pow(std::max(x, 0.0), p);
    return HermitianMatrix(m);
  }
  const EigenDecomposition eig = a.eigen();
  CMatrix scaled = eig.vectors;
  for (Eigen::Index i = 0; i < n; ++i) {
    double lambda = eig.values[static_cast<std::size_t>(i)];
    if (lambda < -kTolPsd) {
      std::ostringstream os;
      os << "eigenvalue " << lambda << " below -" << kTolPsd;
      throw NotPsdError(os.str());
    }
    lambda = std::max(lambda, 0.0);
    scaled.col(i) *= std::pow(lambda, p);
  }
  return HermitianMatrix(CMatrix(scaled * eig.vectors.adjoint()));
}

bool hermitian_order(const HermitianMatrix& a, const HermitianMatrix& b, double tol) {
  return (b - a).min_eigenvalue() >= -tol;
}

double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  // tr(AB) = sum_ij A_ij B_ji
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.dim(); ++i)
    for (Eigen::Index j = 0; j < a.dim(); ++j) s += (a(i, j) * b(j, i)).real();
  return s;
}

double sqrt_product_norm(const HermitianMatrix& a, const HermitianMatrix& b) {
  const HermitianMatrix root = hermitian_power(a, 0.5);
  const HermitianMatrix sandwich(CMatrix(root.matrix() * b.matrix() * root.matrix()));
  return std::sqrt(std::max(0.0, sandwich.max_eigenvalue()));
}

}  // namespace bergtoep
