#pragma once

#include <cstddef>
#include <vector>

#include "bergtoep/hermitian.hpp"

namespace bergtoep {

// Gauss-Legendre nodes and weights on [a, b]; weights sum to b - a.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(std::size_t order, double a = 0.0, double b = 1.0);

struct QuadNode {
  Cx z;
  double weight;
};

// Product rule for the normalized area measure on the disk: Gauss-Legendre in
// t = r^2 on [0,1] and the uniform trapezoidal rule in theta. Weights sum to 1
// and nodes never touch |z| = 1.
class QuadratureRule {
 public:
  // Validates exactness on z^a conj(z)^b against the closed-form moments and
  // throws QuadratureUnderResolvedError on failure.
  QuadratureRule(std::size_t n_r, std::size_t n_theta);

  // N_r = 64, N_theta = 8 * max_degree + 64.
  static QuadratureRule for_degree(std::size_t max_degree);

  std::size_t n_r() const { return n_r_; }
  std::size_t n_theta() const { return n_theta_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<QuadNode>& nodes() const { return nodes_; }
  const GaussLegendre& radial() const { return radial_; }

 private:
  std::size_t n_r_;
  std::size_t n_theta_;
  GaussLegendre radial_;
  std::vector<QuadNode> nodes_;
};

// Evaluation points for suprema over the disk: rings r_j = 1 - 2^{-j},
// j = 0..j_max, with max(8, ceil(2 pi / (1 - r_j))) angles capped at
// max_angles. Ring 0 is the single point w = 0.
class WGrid {
 public:
  struct Ring {
    double radius;
    std::size_t first;  // index into points()
    std::size_t count;
  };

  WGrid(std::size_t j_max, std::size_t max_angles = 512);
  // A grid from explicit points, one ring per distinct radius in input order.
  static WGrid from_points(const std::vector<Cx>& points);

  std::size_t j_max() const { return j_max_; }
  std::size_t max_angles() const { return max_angles_; }
  const std::vector<Cx>& points() const { return points_; }
  const std::vector<Ring>& rings() const { return rings_; }
  std::size_t size() const { return points_.size(); }

 private:
  WGrid() = default;
  std::size_t j_max_ = 0;
  std::size_t max_angles_ = 0;
  std::vector<Cx> points_;
  std::vector<Ring> rings_;
};

}  // namespace bergtoep
