#include "bergtoep/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "bergtoep/errors.hpp"

namespace bergtoep {

namespace {

Eigen::Index basis_size(std::size_t n, std::size_t k) { return static_cast<Eigen::Index>(n * (k + 1)); }

void require_same_dim(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g) {
  if (f.dim() != g.dim()) throw DimensionMismatchError("symbols F and G must have the same dimension");
}

}  // namespace

TruncatedOperator::TruncatedOperator(std::size_t n, std::size_t k_in, std::size_t k_out)
    : n_(n), k_in_(k_in), k_out_(k_out), matrix_(CMatrix::Zero(basis_size(n, k_out), basis_size(n, k_in))) {}

TruncatedOperator::TruncatedOperator(std::size_t n, std::size_t k_in, std::size_t k_out, CMatrix matrix)
    : n_(n), k_in_(k_in), k_out_(k_out), matrix_(std::move(matrix)) {
  if (matrix_.rows() != basis_size(n, k_out) || matrix_.cols() != basis_size(n, k_in))
    throw DimensionMismatchError("TruncatedOperator: matrix shape inconsistent with (n, k_in, k_out)");
}

TruncatedOperator TruncatedOperator::identity(std::size_t n, std::size_t k) {
  return TruncatedOperator(n, k, k, CMatrix::Identity(basis_size(n, k), basis_size(n, k)));
}

TruncatedOperator TruncatedOperator::resized(std::size_t k_in, std::size_t k_out) const {
  TruncatedOperator out(n_, k_in, k_out);
  const Eigen::Index rows = std::min(out.matrix_.rows(), matrix_.rows());
  const Eigen::Index cols = std::min(out.matrix_.cols(), matrix_.cols());
  out.matrix_.topLeftCorner(rows, cols) = matrix_.topLeftCorner(rows, cols);
  return out;
}

TruncatedOperator TruncatedOperator::compose(const TruncatedOperator& rhs) const {
  if (rhs.n_ != n_) throw DimensionMismatchError("compose: operators act on different C^n");
  const std::size_t inner = std::max(k_in_, rhs.k_out_);
  const TruncatedOperator left = k_in_ == inner ? *this : resized(inner, k_out_);
  const TruncatedOperator right = rhs.k_out_ == inner ? rhs : rhs.resized(rhs.k_in_, inner);
  return TruncatedOperator(n_, rhs.k_in_, k_out_, left.matrix_ * right.matrix_);
}

TruncatedOperator TruncatedOperator::adjoint() const {
  return TruncatedOperator(n_, k_out_, k_in_, matrix_.adjoint());
}

TruncatedOperator TruncatedOperator::operator+(const TruncatedOperator& o) const {
  if (o.n_ != n_) throw DimensionMismatchError("operator +: different C^n");
  const std::size_t ki = std::max(k_in_, o.k_in_);
  const std::size_t ko = std::max(k_out_, o.k_out_);
  TruncatedOperator a = resized(ki, ko);
  a.matrix_ += o.resized(ki, ko).matrix_;
  return a;
}

TruncatedOperator TruncatedOperator::operator-(const TruncatedOperator& o) const { return *this + o * Cx(-1.0); }

TruncatedOperator TruncatedOperator::operator*(Cx s) const {
  return TruncatedOperator(n_, k_in_, k_out_, matrix_ * s);
}

VectorPoly TruncatedOperator::apply(const VectorPoly& v) const {
  if (v.dim() != n_) throw DimensionMismatchError("apply: vector dimension differs from operator");
  if (v.degree() > k_in_) throw RangeError("apply: input degree exceeds the truncation");
  return from_basis(matrix_ * to_basis(v, k_in_), n_, k_out_);
}

CVector to_basis(const VectorPoly& v, std::size_t k) {
  const std::size_t n = v.dim();
  CVector x = CVector::Zero(basis_size(n, k));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s <= std::min(k, v[i].degree()); ++s)
      x(static_cast<Eigen::Index>(s * n + i)) = v[i].coeff(s) / std::sqrt(static_cast<double>(s + 1));
  return x;
}

VectorPoly from_basis(const CVector& x, std::size_t n, std::size_t k) {
  std::vector<PowerSeries> comps;
  comps.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Cx> c(k + 1);
    for (std::size_t s = 0; s <= k; ++s)
      c[s] = x(static_cast<Eigen::Index>(s * n + i)) * std::sqrt(static_cast<double>(s + 1));
    comps.emplace_back(std::move(c));
  }
  return VectorPoly(std::move(comps));
}

TruncatedOperator analytic_toeplitz(const PolyMatrixSymbol& f, std::size_t k) {
  const std::size_t n = f.dim();
  const std::size_t d = f.degree();
  TruncatedOperator t(n, k, k + d);
  // T_F e_{t,j} = sum_i sum_s a^{ij}_s sqrt(t+1) z^{s+t} at coordinate i
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const PowerSeries& fij = f.entry(i, j);
      for (std::size_t s = 0; s <= fij.degree(); ++s) {
        const Cx a = fij.coeff(s);
        if (a == Cx(0.0)) continue;
        for (std::size_t col = 0; col <= k; ++col) {
          const double w = std::sqrt(static_cast<double>(col + 1) / static_cast<double>(s + col + 1));
          t.matrix()(t.index(s + col, i), t.index(col, j)) += a * w;
        }
      }
    }
  }
  return t;
}

TruncatedOperator coanalytic_toeplitz(const PolyMatrixSymbol& g, std::size_t k) {
  // T_{G*} never raises degree, so its matrix on degree <= K is the adjoint of
  // T_G with the output compressed back to degree <= K.
  return analytic_toeplitz(g, k).resized(k, k).adjoint();
}

TruncatedOperator product_restricted(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, std::size_t k) {
  require_same_dim(f, g);
  return analytic_toeplitz(f, k).compose(coanalytic_toeplitz(g, k));
}

TruncatedOperator shift_forward(std::size_t n, std::size_t k) {
  TruncatedOperator t(n, k, k + 1);
  for (std::size_t s = 0; s <= k; ++s)
    for (std::size_t i = 0; i < n; ++i)
      t.matrix()(t.index(s + 1, i), t.index(s, i)) =
          std::sqrt(static_cast<double>(s + 1) / static_cast<double>(s + 2));
  return t;
}

TruncatedOperator shift_backward(std::size_t n, std::size_t k) { return shift_forward(n, k).resized(k, k).adjoint(); }

NormResult operator_norm_detailed(const TruncatedOperator& t, const std::optional<CVector>& start,
                                  const NormOptions& opts) {
  const CMatrix& m = t.matrix();
  const Eigen::Index cols = m.cols();
  if (cols == 0 || m.rows() == 0) return {0.0, CVector::Zero(cols), 0};

  CVector x(cols);
  if (start && start->size() == cols && start->norm() > 0.0) {
    x = *start;
  } else {
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (Eigen::Index i = 0; i < cols; ++i) x(i) = Cx(nd(rng), nd(rng));
  }
  x.normalize();

  double lambda = (m * x).squaredNorm();
  double best = lambda;
  CVector best_x = x;
  double rel_change = 1.0;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    CVector y = m.adjoint() * (m * x);
    const double ny = y.norm();
    if (ny == 0.0) return {0.0, x, it};
    x = y / ny;
    const double next = (m * x).squaredNorm();
    rel_change = std::abs(next - lambda) / std::max(next, 1e-300);
    lambda = next;
    if (lambda >= best) {
      best = lambda;
      best_x = x;
    }
    if (rel_change < opts.tol) break;
  }
  if (it >= opts.max_iter && rel_change > opts.fail_tol) {
    std::ostringstream os;
    os << "power iteration hit " << opts.max_iter << " iterations with relative change " << rel_change;
    throw NoConvergenceError(os.str());
  }
  return {std::sqrt(best), best_x, it};
}

double operator_norm(const TruncatedOperator& t, const NormOptions& opts) {
  return operator_norm_detailed(t, std::nullopt, opts).norm;
}

TruncatedOperator rank_one(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, std::size_t k) {
  require_same_dim(f, g);
  const std::size_t n = f.dim();
  TruncatedOperator t(n, k, std::max(k, f.degree()));
  // (f (x) g) e_t = <e_t, g> f,  <e_t, g> = conj(b_t)/sqrt(t+1),  f = sum_s a_s/sqrt(s+1) e_s
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t l = 0; l < n; ++l) {
        const PowerSeries& fil = f.entry(i, l);
        const PowerSeries& gjl = g.entry(j, l);
        for (std::size_t col = 0; col <= std::min(k, gjl.degree()); ++col) {
          const Cx gb = std::conj(gjl.coeff(col)) / std::sqrt(static_cast<double>(col + 1));
          if (gb == Cx(0.0)) continue;
          for (std::size_t row = 0; row <= fil.degree(); ++row) {
            const Cx fa = fil.coeff(row) / std::sqrt(static_cast<double>(row + 1));
            t.matrix()(t.index(row, i), t.index(col, j)) += fa * gb;
          }
        }
      }
    }
  }
  return t;
}

double rank_one_trace(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g) {
  require_same_dim(f, g);
  const std::size_t n = f.dim();
  // inner-product tables <f_qr, f_ql> and <g_ml, g_mr>
  std::vector<Cx> terms;
  terms.reserve(n * n * n * n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t l = 0; l < n; ++l)
          terms.push_back(series_inner(f.entry(q, r), f.entry(q, l)) * series_inner(g.entry(m, l), g.entry(m, r)));
  const Cx tr = pairwise_sum(std::span<const Cx>(terms));
  if (std::abs(tr.imag()) > 1e-9 * std::max(1.0, std::abs(tr.real()))) {
    std::ostringstream os;
    os << "trace has imaginary part " << tr.imag();
    throw NonRealTraceError(os.str());
  }
  return tr.real();
}

double park_residual(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, std::size_t k) {
  require_same_dim(f, g);
  const std::size_t df = f.degree();
  const std::size_t dg = g.degree();
  if (k < df + dg + 4) {
    std::ostringstream os;
    os << "K = " << k << " but park_residual needs K >= deg F + deg G + 4 = " << df + dg + 4;
    throw BufferTooSmallError(os.str());
  }
  const std::size_t n = f.dim();
  const std::size_t inner = k - df - 2;

  // Every factor is truncated to the degree <= K space.
  const TruncatedOperator a = product_restricted(f, g, k).resized(k, k);
  const TruncatedOperator up = shift_forward(n, k).resized(k, k);
  const TruncatedOperator down = shift_backward(n, k);
  const TruncatedOperator up2 = up.compose(up);
  const TruncatedOperator down2 = down.compose(down);

  const TruncatedOperator rhs = a - up.compose(a).compose(down) * Cx(2.0) + up2.compose(a).compose(down2);
  const TruncatedOperator lhs = rank_one(f, g, k).resized(k, k);

  // Inputs are restricted to degree <= K - deg F - 2, where every factor above
  // is exact; all output rows are compared.
  const TruncatedOperator diff = (lhs - rhs).resized(inner, k);
  if (diff.matrix().norm() == 0.0) return 0.0;
  return operator_norm(diff);
}

}  // namespace bergtoep
