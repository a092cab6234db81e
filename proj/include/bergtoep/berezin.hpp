#pragma once

#include <cstddef>
#include <vector>

#include "bergtoep/bergman.hpp"
#include "bergtoep/quadrature.hpp"

namespace bergtoep {

// Disk automorphism phi_w(z) = (w - z) / (1 - conj(w) z).
Cx mobius(Cx w, Cx z);

// k_w(z) = (1 - |w|^2) / (1 - z conj(w))^2
Cx normalized_kernel(Cx w, Cx z);

// |k_w(z)|^2 = (1 - |w|^2)^2 / |1 - conj(w) z|^4
double kernel_weight(Cx w, Cx z);

// B(z^a conj(z)^b)(w) by the exact power series in w; throws
// SeriesSlowConvergenceError past one million terms.
Cx berezin_monomial(std::size_t a, std::size_t b, Cx w);

// B(F*F)(w) from the exact series.
HermitianMatrix berezin_gram(const PolyMatrixSymbol& f, Cx w);

// Rule for Berezin transforms at points with |w| <= max_radius. The angular
// trapezoid error decays like |w|^{N_theta}, so N_theta is raised to the next
// power of two above 32 / (1 - max_radius) when that exceeds the default
// 8 * max_degree + 64.
QuadratureRule berezin_rule_for(std::size_t max_degree, double max_radius);

// A field sampled once on the nodes of a rule; Berezin transforms at many w
// then only re-weight the samples.
class FieldSamples {
 public:
  FieldSamples(const HermitianField& field, const QuadratureRule& rule);

  std::size_t dim() const { return n_; }
  const std::vector<HermitianMatrix>& values() const { return values_; }
  const std::vector<QuadNode>& nodes() const { return nodes_; }
  // values()[i] flattened column-major, n*n entries per node
  const std::vector<Cx>& flat() const { return flat_; }

 private:
  std::size_t n_;
  std::vector<QuadNode> nodes_;
  std::vector<HermitianMatrix> values_;
  std::vector<Cx> flat_;
};

HermitianMatrix berezin_quadrature(const FieldSamples& samples, Cx w);
HermitianMatrix berezin_quadrature(const HermitianField& field, Cx w, const QuadratureRule& rule);

// B((F*F)^p)(w) by quadrature.
HermitianMatrix berezin_power_gram(const PolyMatrixSymbol& f, double p, Cx w, const QuadratureRule& rule);

// (P_0 f)(w) = int f(z) / |1 - conj(w) z|^2 dA(z)
double p0_transform(const ScalarField& f, Cx w, const QuadratureRule& rule);

// max |B(F*F)(w) - int F*F(phi_w(z)) dA(z)| entrywise, series against
// quadrature of the composed symbol.
double mobius_invariance_residual(const PolyMatrixSymbol& f, Cx w, const QuadratureRule& rule);

// sum_{q,m,r,l} <f_qr, f_ql |k_w|^2> <g_ml, g_mr |k_w|^2> with the weighted
// inner products evaluated by quadrature; equals tr(B(G*G)(w) B(F*F)(w)).
double weighted_rank_one_trace(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, Cx w,
                               const QuadratureRule& rule);

struct KernelIdentity {
  Cx lhs;  // <T_{F*}u(w), T_{G*}v(w)>
  Cx rhs;  // (1-|w|^2)^{-2} int <(G k_w (x) F k_w) u, v> dA
  double relative_error;
};

// Both sides of the point-evaluation identity for T_{F*} and T_{G*}: the left
// from exact truncated operators evaluated at w, the right by quadrature.
KernelIdentity kernel_product_identity(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, const VectorPoly& u,
                                       const VectorPoly& v, Cx w, const QuadratureRule& rule);

}  // namespace bergtoep
