#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bergtoep/bergman.hpp"
#include "bergtoep/conditions.hpp"
#include "bergtoep/dyadic.hpp"

namespace bergtoep {

using Json = nlohmann::ordered_json;

struct JobParams {
  double epsilon = 1.0;
  double eta = 1e-8;
  std::size_t grid_levels = 6;
  std::size_t grid_max_angles = 512;
  std::size_t n_r = 64;
  // Filled from the symbol degrees and the outermost ring when absent.
  std::optional<std::size_t> n_theta;
  std::vector<std::size_t> k_list{8, 16, 32};
  unsigned dyadic_depth = 6;
  std::size_t dyadic_order = 16;
  double budget = kDefaultBudget;
  double bound_cap = 1e8;
  // cz threshold; the disk average of tr(F*F) when absent
  std::optional<double> cz_threshold;
  // fixed exponent for revholder; the dyadic search runs when absent
  std::optional<double> revholder_epsilon;
  double revholder_c_max = 100.0;
  // criterion ids for verify, empty = all
  std::vector<int> criteria;
};

// F(s) = F + s dF for each s
struct SweepSpec {
  PolyMatrixSymbol delta_f;
  std::vector<double> s;
};

struct JobConfig {
  std::optional<PolyMatrixSymbol> f;
  std::optional<PolyMatrixSymbol> g;  // identity of F's size when absent
  JobParams params;
  std::optional<SweepSpec> sweep;
  std::optional<std::size_t> jobs;
};

// ParseError names the offending field (and line/column for malformed
// JSON); DimensionMismatch when F, G or dF disagree in size; RangeError for
// out-of-range parameters.
JobConfig parse_config(const std::string& path);
JobConfig parse_config_text(const std::string& text);

Json symbol_to_json(const PolyMatrixSymbol& f);
// The resolved config, every default filled in.
Json config_to_json(const JobConfig& cfg);

std::size_t symbol_degree(const JobConfig& cfg);
QuadratureRule quadrature_rule(const JobConfig& cfg);
ConditionParams condition_params(const JobConfig& cfg);
DyadicRule dyadic_rule(const JobConfig& cfg);

}  // namespace bergtoep
