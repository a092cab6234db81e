#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bergtoep/berezin.hpp"
#include "bergtoep/bergman.hpp"
#include "bergtoep/quadrature.hpp"

namespace bergtoep {

inline constexpr double kDefaultBudget = 1e9;

// BERGTOEP_BUDGET when set to a positive number, otherwise `configured`.
double effective_budget(double configured);

class ConditionParams {
 public:
  ConditionParams(double epsilon, WGrid grid, QuadratureRule rule, double eta = 1e-8);

  // epsilon = 1, rings up to j = 6, rule from berezin_rule_for.
  static ConditionParams defaults(std::size_t max_degree);

  double epsilon() const { return epsilon_; }
  double delta() const { return (2.0 + epsilon_) / (1.0 + epsilon_); }
  // (2 + epsilon) / 2, the matrix power in the sufficient functional
  double power() const { return 0.5 * (2.0 + epsilon_); }
  double eta() const { return eta_; }

  WGrid grid;
  QuadratureRule rule;
  // Largest grid supremum still reported as "holds".
  double bound_cap = 1e8;
  // Node-pair evaluations allowed in the double integral; the environment
  // variable BERGTOEP_BUDGET overrides it.
  double budget = kDefaultBudget;
  std::size_t jobs = 0;

 private:
  double epsilon_;
  double eta_;
};

struct RingValue {
  double radius;
  double value;
};

// Extremum of a functional over a WGrid together with the per-point values
// (in grid order) and the per-ring extremum.
struct GridExtremum {
  double value;
  Cx at;
  std::vector<double> values;
  std::vector<RingValue> profile;
};

// w -> tr(B(F*F)(w) B(G*G)(w)) with exact-series transforms; max over grid.
GridExtremum necessary_sup(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, const WGrid& grid,
                           std::size_t jobs = 0);

// w -> tr(B((F*F)^p)(w) B((G*G)^p)(w)), p = (2+eps)/2, by quadrature.
// Throws ComputeBudgetError when rule nodes x grid points exceed the budget.
GridExtremum sufficient_eps(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, const ConditionParams& params);

// w -> (int int tr(F*F(x) G*G(z))^p |k_w(z)|^2 |k_w(x)|^2)^{1/(2+eps)} with
// constant 1. Throws ComputeBudgetError when N^2 |grid| exceeds the budget.
GridExtremum sufficient_double_integral(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g,
                                        const ConditionParams& params);

// min over grid of lambda_min(F G* G F*); `value` is the minimum.
GridExtremum invertibility_floor(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, const WGrid& grid,
                                 std::size_t jobs = 0);

struct ConditionReport {
  double epsilon;
  double eta;
  std::optional<GridExtremum> necessary;
  std::optional<GridExtremum> sufficient;
  std::optional<GridExtremum> floor;
  std::vector<std::pair<std::size_t, double>> truncated_norms;  // (K, ||T_F T_{G*} P_K||)
  std::map<std::string, std::string> errors;                      // field -> message

  bool necessary_holds = false;
  bool sufficient_holds = false;
  bool floor_positive = false;
  bool invertible = false;
};

// Runs every functional and the truncated norms. Failures are recorded per
// field in `errors` and leave the field empty.
ConditionReport classify(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, const ConditionParams& params,
                         const std::vector<std::size_t>& k_list);

struct AuditResult {
  double lhs;
  double rhs;
};

// lhs = int |conj(x) h(x)| |v(x)| / |1 - conj(x) w|^3 dA
// rhs = 2 {int h^{2+eps} |k_w|^2 / (1-|w|^2) dA}^{1/(2+eps)} {P_0 |v|^delta (w)}^{1/delta}
AuditResult holder_bound_audit(const ScalarField& h, const PowerSeries& v, Cx w, const ConditionParams& params);

// lhs = |<(T_{F*}u)'(w), (T_{G*}v)'(w)>|
// rhs = C {tr B((F*F)^p)(w) B((G*G)^p)(w)}^{1/(2+eps)} (1-|w|^2)^{-2}
//       {P_0 |u|^delta (w)}^{1/delta} {P_0 |v|^delta (w)}^{1/delta}
AuditResult derivative_term_audit(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, const VectorPoly& u,
                                  const VectorPoly& v, Cx w, const ConditionParams& params, double constant);

// Twice the largest lhs / rhs(C = 1) over a fixed seeded corpus of random
// symbols, vectors and points.
double calibrate_derivative_constant(const ConditionParams& params);

struct KeyInequality {
  double eta;         // the grid floor used as eta
  double min_slack;   // min over grid of lambda_min(B(G*G)(w) - eta (F*F(w))^{-1})
};

// Only meaningful when the floor is positive; min_slack is +inf otherwise.
KeyInequality key_inequality_slack(const PolyMatrixSymbol& f, const PolyMatrixSymbol& g, const WGrid& grid);

}  // namespace bergtoep
