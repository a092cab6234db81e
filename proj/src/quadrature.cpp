#include "bergtoep/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bergtoep/bergman.hpp"
#include "bergtoep/errors.hpp"

namespace bergtoep {

GaussLegendre gauss_legendre(std::size_t order, double a, double b) {
  GaussLegendre gl;
  gl.nodes.resize(order);
  gl.weights.resize(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const std::size_t m = (order + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_order.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(order) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 - (static_cast<double>(k) - 1.0) * p0) /
                          static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(order) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[i] = mid - half * x;
    gl.weights[i] = half * w;
    gl.nodes[order - 1 - i] = mid + half * x;
    gl.weights[order - 1 - i] = half * w;
  }
  return gl;
}

QuadratureRule::QuadratureRule(std::size_t n_r, std::size_t n_theta)
    : n_r_(n_r), n_theta_(n_theta), radial_(gauss_legendre(n_r, 0.0, 1.0)) {
  if (n_r == 0 || n_theta == 0) throw RangeError("quadrature orders must be positive");
  nodes_.reserve(n_r * n_theta);
  const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(n_theta);
  for (std::size_t i = 0; i < n_r; ++i) {
    const double r = std::sqrt(radial_.nodes[i]);
    for (std::size_t j = 0; j < n_theta; ++j) {
      const double theta = dtheta * static_cast<double>(j);
      nodes_.push_back({std::polar(r, theta), radial_.weights[i] / static_cast<double>(n_theta)});
    }
  }

  // Exactness guard on moments z^a conj(z)^b, summed pairwise so that large
  // rules are not rejected for accumulated roundoff.
  const std::size_t limit = std::min<std::size_t>({n_theta / 2 > 0 ? n_theta / 2 - 1 : 0, 2 * n_r - 1, 12});
  std::vector<Cx> terms(nodes_.size());
  for (std::size_t a = 0; a <= limit; ++a) {
    for (std::size_t b = 0; a + b <= limit; ++b) {
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Cx z = nodes_[i].z;
        terms[i] = nodes_[i].weight * std::pow(z, static_cast<int>(a)) * std::pow(std::conj(z), static_cast<int>(b));
      }
      const Cx acc = pairwise_sum(std::span<const Cx>(terms));
      const Cx exact = monomial_inner(a, b, 0);
      if (std::abs(acc - exact) > 1e-13) {
        std::ostringstream os;
        os << "rule (N_r=" << n_r << ", N_theta=" << n_theta << ") misses moment (" << a << "," << b
           << ") by " << std::abs(acc - exact);
        throw QuadratureUnderResolvedError(os.str());
      }
    }
  }
}

QuadratureRule QuadratureRule::for_degree(std::size_t max_degree) {
  return QuadratureRule(64, 2 * max_degree * 4 + 64);
}

WGrid::WGrid(std::size_t j_max, std::size_t max_angles) : j_max_(j_max), max_angles_(max_angles) {
  for (std::size_t j = 0; j <= j_max; ++j) {
    const double r = 1.0 - std::ldexp(1.0, -static_cast<int>(j));
    Ring ring{r, points_.size(), 0};
    if (j == 0) {
      points_.emplace_back(0.0, 0.0);
      ring.count = 1;
    } else {
      const double want = std::ceil(2.0 * std::numbers::pi / (1.0 - r));
      const std::size_t m = std::min<std::size_t>(std::max<std::size_t>(8, static_cast<std::size_t>(want)), max_angles);
      for (std::size_t k = 0; k < m; ++k)
        points_.push_back(std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m)));
      ring.count = m;
    }
    rings_.push_back(ring);
  }
}

WGrid WGrid::from_points(const std::vector<Cx>& points) {
  WGrid g;
  for (const Cx& w : points) {
    if (!(std::abs(w) < 1.0)) throw RangeError("grid points must lie in the open unit disk");
    const double r = std::abs(w);
    if (g.rings_.empty() || g.rings_.back().radius != r) g.rings_.push_back({r, g.points_.size(), 0});
    g.points_.push_back(w);
    ++g.rings_.back().count;
  }
  return g;
}

}  // namespace bergtoep
