#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bergtoep/bergman.hpp"
#include "bergtoep/errors.hpp"
#include "bergtoep/quadrature.hpp"

namespace bergtoep {

// Q_{j,k,l} = {r e^{i theta}: (k-1) 2^-j <= r <= k 2^-j,
//              (l-1) 2^{1-j} pi <= theta <= l 2^{1-j} pi},  1 <= k, l <= 2^j.
struct DyadicRectangle {
  unsigned j = 0;
  std::uint64_t k = 1;
  std::uint64_t l = 1;

  bool operator==(const DyadicRectangle&) const = default;
};

inline constexpr unsigned kMaxDyadicLevel = 30;

struct RectGeometry {
  double area;  // normalized, (2k-1) 2^{-3j}
  Cx center;    // (k - 1/2) 2^-j e^{i (l - 1/2) 2^{1-j} pi}
  double r_lo, r_hi;
  double theta_lo, theta_hi;
};

// All of these throw BadIndexError on out-of-range indices.
RectGeometry rect_geometry(const DyadicRectangle& q);
std::array<DyadicRectangle, 4> rect_children(const DyadicRectangle& q);
bool rect_contains(const DyadicRectangle& q, Cx z);
// True when `inner` is q itself or one of its descendants.
bool rect_is_within(const DyadicRectangle& inner, const DyadicRectangle& q);
// Every rectangle of level j, radial index outermost.
std::vector<DyadicRectangle> rectangles_at_level(unsigned j);

// Max of |phi_{z_Q}(c)| over the four corners c of Q. Throws
// TouchesBoundaryError for k = 2^j, j > 0. For the whole disk it returns
// the max over `boundary_samples` points on the circle |z| = whole_disk_radius.
double pseudo_disk_cover(const DyadicRectangle& q, double whole_disk_radius = 0.99,
                         std::size_t boundary_samples = 64);

// Tensor Gauss-Legendre rule mapped onto a rectangle: order n_r in r (with
// the Jacobian r folded into the weights) and order n_theta in theta.
class DyadicRule {
 public:
  explicit DyadicRule(std::size_t n_r = 16, std::size_t n_theta = 16);

  // Nodes on Q; weights sum to the normalized area of Q.
  std::vector<QuadNode> nodes(const DyadicRectangle& q) const;

  std::size_t n_r() const { return radial_.nodes.size(); }
  std::size_t n_theta() const { return angular_.nodes.size(); }

 private:
  GaussLegendre radial_;
  GaussLegendre angular_;
};

// (1/|Q|) int_Q field dA, as the weighted mean over the rule's nodes.
HermitianMatrix rect_average(const HermitianField& field, const DyadicRectangle& q, const DyadicRule& rule);
double rect_average(const ScalarField& field, const DyadicRectangle& q, const DyadicRule& rule);
// int_Q field dA
double rect_integral(const ScalarField& field, const DyadicRectangle& q, const DyadicRule& rule);

struct A2Result {
  double constant;
  DyadicRectangle worst;
};

// sup over rectangles with level <= max_level of
// ||(avg_Q W)^{1/2} (avg_Q W^{-1})^{1/2}||, W given with its inverse field.
// Throws DivergenceSuspectedError when lambda_max(avg W^{-1}) grows by more
// than 10x, monotonically, along three nested levels.
A2Result a2_constant(const HermitianField& weight, const HermitianField& inverse_weight, unsigned max_level,
                     const DyadicRule& rule);
// W = F*F, W^{-1} = F^{-1} F^{-*}
A2Result a2_constant(const PolyMatrixSymbol& f, unsigned max_level, const DyadicRule& rule);

// avg_Q w * avg_Q (1/w) for a positive scalar weight.
double scalar_a2_constant(const ScalarField& w, const DyadicRectangle& q, const DyadicRule& rule);
// sup over rectangles with level <= max_level
A2Result scalar_a2_constant(const ScalarField& w, unsigned max_level, const DyadicRule& rule);

// The A2 expression of W = F*F on a single rectangle.
double a2_expression(const PolyMatrixSymbol& f, const DyadicRectangle& q, const DyadicRule& rule);

// ||P_Q f||_{L^2(F*F)} / ||f||_{L^2(F*F)} with P_Q f = chi_Q avg_Q f; the
// denominator is integrated over the whole disk. ZeroDenominatorError when
// ||f||_{L^2(F*F)} vanishes.
double weighted_projection_ratio(const PolyMatrixSymbol& f, const DyadicRectangle& q, const VectorPoly& v,
                                 const DyadicRule& rule);

// max over dyadic Q containing z with level <= max_level of avg_Q field.
double dyadic_maximal(const ScalarField& field, Cx z, unsigned max_level, const DyadicRule& rule);

struct CZDecomposition {
  double threshold;
  std::vector<DyadicRectangle> selected;
  std::vector<double> averages;
  // Area of unselected level-max_level rectangles where the field still
  // exceeds the threshold at some node.
  double unresolved_area = 0.0;
};

class DepthExhaustedError : public Error {
 public:
  DepthExhaustedError(CZDecomposition partial, const std::string& what)
      : Error(ErrorCode::DepthExhausted, what), partial_(std::move(partial)) {}
  const CZDecomposition& partial() const noexcept { return partial_; }

 private:
  CZDecomposition partial_;
};

// Stopping-time selection of maximal rectangles with average > t. Throws
// ThresholdTooLowError when the disk average exceeds t, and in strict mode
// DepthExhaustedError (carrying the partial result) when unresolved_area > 0.
CZDecomposition cz_decompose(const ScalarField& field, double t, unsigned max_level, const DyadicRule& rule,
                             bool strict = true);

struct FairShare {
  double lebesgue_ratio;  // |E| / |Q|
  double mu_ratio;        // mu(E) / mu(Q), d mu = field dA
  double lambda_bound;    // 1 - (1 - delta)^2 / C, C = scalar A2 constant on Q
};

// E is a union of pairwise disjoint dyadic rectangles inside Q with
// |E| <= delta |Q|. NotSubsetError if a member leaves Q.
FairShare fairshare_check(const ScalarField& field, const DyadicRectangle& q, const std::vector<DyadicRectangle>& e,
                          double delta, const DyadicRule& rule);

struct ReverseHolderCertificate {
  double epsilon;
  double lhs;       // int tr(F*F)^{1+eps} dA
  double rhs_base;  // int tr(F*F) dA
  double constant;  // lhs / rhs_base^{1+eps}
};

ReverseHolderCertificate reverse_holder(const PolyMatrixSymbol& f, double epsilon, const QuadratureRule& rule);

// Largest eps in {2^-1, ..., 2^-10} whose certificate constant is <= c_max.
std::optional<ReverseHolderCertificate> reverse_holder_search(const PolyMatrixSymbol& f, const QuadratureRule& rule,
                                                              double c_max = 100.0);

// a2 constant of J F*F J divided by that of F*F.
double conjugation_a2_check(const PolyMatrixSymbol& f, const HermitianMatrix& j_matrix, unsigned max_level,
                            const DyadicRule& rule);

}  // namespace bergtoep
