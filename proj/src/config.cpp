#include "bergtoep/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "bergtoep/errors.hpp"

namespace bergtoep {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) { throw ParseError(field + ": " + what); }

void check_keys(const Json& obj, const std::string& field, const std::set<std::string>& allowed) {
  if (!obj.is_object()) bad(field, "expected an object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) bad(field == "config" ? k : field + "." + k, "unknown key");
}

double get_real(const Json& v, const std::string& field) {
  if (!v.is_number()) bad(field, "expected a number");
  return v.get<double>();
}

std::size_t get_count(const Json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) bad(field, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

Cx get_complex(const Json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) bad(field, "expected a complex number [re, im]");
  return {get_real(v[0], field + "[0]"), get_real(v[1], field + "[1]")};
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw RangeError(field + ": " + what);
}

std::pair<std::size_t, std::size_t> parse_key(const std::string& key, std::size_t n, const std::string& field) {
  std::istringstream is(key);
  long long i = -1, j = -1;
  char comma = 0;
  if (!(is >> i >> comma >> j) || comma != ',' || !is.eof()) bad(field, "entry keys look like \"i,j\"");
  if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n)
    throw DimensionMismatchError(field + ": index outside a " + std::to_string(n) + "x" + std::to_string(n) + " symbol");
  return {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
}

PolyMatrixSymbol parse_symbol(const Json& v, const std::string& field) {
  check_keys(v, field, {"n", "entries"});
  if (!v.contains("n")) bad(field + ".n", "missing");
  const std::size_t n = get_count(v["n"], field + ".n");
  require(n >= 1 && n <= 16, field + ".n", "must be in 1..16");
  std::vector<PowerSeries> entries(n * n);
  if (v.contains("entries")) {
    const Json& e = v["entries"];
    if (!e.is_object()) bad(field + ".entries", "expected an object keyed \"i,j\"");
    for (const auto& [key, coeffs] : e.items()) {
      const std::string ef = field + ".entries[\"" + key + "\"]";
      const auto [i, j] = parse_key(key, n, ef);
      if (!coeffs.is_array() || coeffs.empty()) bad(ef, "expected a nonempty list of [re, im] coefficients");
      std::vector<Cx> c;
      for (std::size_t s = 0; s < coeffs.size(); ++s) c.push_back(get_complex(coeffs[s], ef + "[" + std::to_string(s) + "]"));
      entries[i * n + j] = PowerSeries(std::move(c));
    }
  }
  return PolyMatrixSymbol(n, std::move(entries));
}

void parse_params(const Json& p, JobParams& out) {
  check_keys(p, "params",
             {"epsilon", "eta", "grid_levels", "grid_max_angles", "n_r", "n_theta", "k_list", "dyadic_depth",
              "dyadic_order", "budget", "bound_cap", "cz_threshold", "revholder_epsilon", "revholder_c_max",
              "criteria"});
  if (p.contains("epsilon")) out.epsilon = get_real(p["epsilon"], "params.epsilon");
  if (p.contains("eta")) out.eta = get_real(p["eta"], "params.eta");
  if (p.contains("grid_levels")) out.grid_levels = get_count(p["grid_levels"], "params.grid_levels");
  if (p.contains("grid_max_angles")) out.grid_max_angles = get_count(p["grid_max_angles"], "params.grid_max_angles");
  if (p.contains("n_r")) out.n_r = get_count(p["n_r"], "params.n_r");
  if (p.contains("n_theta")) out.n_theta = get_count(p["n_theta"], "params.n_theta");
  if (p.contains("k_list")) {
    const Json& k = p["k_list"];
    if (!k.is_array() || k.empty()) bad("params.k_list", "expected a nonempty list of integers");
    out.k_list.clear();
    for (std::size_t i = 0; i < k.size(); ++i) out.k_list.push_back(get_count(k[i], "params.k_list[" + std::to_string(i) + "]"));
  }
  if (p.contains("dyadic_depth"))
    out.dyadic_depth = static_cast<unsigned>(get_count(p["dyadic_depth"], "params.dyadic_depth"));
  if (p.contains("dyadic_order")) out.dyadic_order = get_count(p["dyadic_order"], "params.dyadic_order");
  if (p.contains("budget")) out.budget = get_real(p["budget"], "params.budget");
  if (p.contains("bound_cap")) out.bound_cap = get_real(p["bound_cap"], "params.bound_cap");
  if (p.contains("cz_threshold")) out.cz_threshold = get_real(p["cz_threshold"], "params.cz_threshold");
  if (p.contains("revholder_epsilon")) out.revholder_epsilon = get_real(p["revholder_epsilon"], "params.revholder_epsilon");
  if (p.contains("revholder_c_max")) out.revholder_c_max = get_real(p["revholder_c_max"], "params.revholder_c_max");
  if (p.contains("criteria")) {
    const Json& c = p["criteria"];
    if (!c.is_array()) bad("params.criteria", "expected a list of criterion ids");
    for (std::size_t i = 0; i < c.size(); ++i)
      out.criteria.push_back(static_cast<int>(get_count(c[i], "params.criteria[" + std::to_string(i) + "]")));
  }

  require(out.epsilon > 0.0, "params.epsilon", "must be > 0");
  require(out.eta > 0.0, "params.eta", "must be > 0");
  require(out.grid_levels <= 20, "params.grid_levels", "must be <= 20");
  require(out.grid_max_angles >= 8 && out.grid_max_angles <= 1 << 16, "params.grid_max_angles", "must be in 8..65536");
  require(out.n_r >= 1 && out.n_r <= 4096, "params.n_r", "must be in 1..4096");
  require(!out.n_theta || (*out.n_theta >= 1 && *out.n_theta <= 1 << 16), "params.n_theta", "must be in 1..65536");
  for (std::size_t k : out.k_list) require(k >= 1 && k <= 4096, "params.k_list", "entries must be in 1..4096");
  require(out.dyadic_depth <= 12, "params.dyadic_depth", "must be <= 12");
  require(out.dyadic_order >= 1 && out.dyadic_order <= 256, "params.dyadic_order", "must be in 1..256");
  require(out.budget > 0.0, "params.budget", "must be > 0");
  require(out.bound_cap > 0.0, "params.bound_cap", "must be > 0");
  require(!out.cz_threshold || *out.cz_threshold > 0.0, "params.cz_threshold", "must be > 0");
  require(!out.revholder_epsilon || *out.revholder_epsilon > 0.0, "params.revholder_epsilon", "must be > 0");
  require(out.revholder_c_max > 0.0, "params.revholder_c_max", "must be > 0");
  for (int c : out.criteria) require(c >= 1 && c <= 13, "params.criteria", "ids must be in 1..13");
}

Json complex_json(Cx c) { return Json::array({c.real(), c.imag()}); }

}  // namespace

JobConfig parse_config_text(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  check_keys(root, "config", {"F", "G", "params", "sweep", "jobs"});
  JobConfig cfg;
  if (root.contains("F")) cfg.f = parse_symbol(root["F"], "F");
  if (root.contains("G")) {
    if (!cfg.f) bad("G", "given without F");
    cfg.g = parse_symbol(root["G"], "G");
    if (cfg.g->dim() != cfg.f->dim())
      throw DimensionMismatchError("G is " + std::to_string(cfg.g->dim()) + "x" + std::to_string(cfg.g->dim()) +
                                   " but F is " + std::to_string(cfg.f->dim()) + "x" + std::to_string(cfg.f->dim()));
  } else if (cfg.f) {
    cfg.g = PolyMatrixSymbol::identity(cfg.f->dim());
  }
  if (root.contains("params")) parse_params(root["params"], cfg.params);
  if (root.contains("sweep")) {
    if (!cfg.f) bad("sweep", "needs F");
    const Json& s = root["sweep"];
    check_keys(s, "sweep", {"dF", "s"});
    if (!s.contains("dF")) bad("sweep.dF", "missing");
    if (!s.contains("s") || !s["s"].is_array() || s["s"].empty()) bad("sweep.s", "expected a nonempty list of numbers");
    SweepSpec spec{parse_symbol(s["dF"], "sweep.dF"), {}};
    if (spec.delta_f.dim() != cfg.f->dim()) throw DimensionMismatchError("sweep.dF does not match the size of F");
    for (std::size_t i = 0; i < s["s"].size(); ++i) spec.s.push_back(get_real(s["s"][i], "sweep.s[" + std::to_string(i) + "]"));
    cfg.sweep = std::move(spec);
  }
  if (root.contains("jobs")) {
    cfg.jobs = get_count(root["jobs"], "jobs");
    require(*cfg.jobs >= 1, "jobs", "must be >= 1");
  }
  if (cfg.f && !cfg.params.n_theta) {
    const WGrid grid(cfg.params.grid_levels, cfg.params.grid_max_angles);
    cfg.params.n_theta = berezin_rule_for(symbol_degree(cfg), grid.rings().back().radius).n_theta();
  }
  return cfg;
}

JobConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open config");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

Json symbol_to_json(const PolyMatrixSymbol& f) {
  Json entries = Json::object();
  for (std::size_t i = 0; i < f.dim(); ++i)
    for (std::size_t j = 0; j < f.dim(); ++j) {
      Json c = Json::array();
      for (const Cx a : f.entry(i, j).coeffs()) c.push_back(complex_json(a));
      entries[std::to_string(i) + "," + std::to_string(j)] = std::move(c);
    }
  return Json{{"n", f.dim()}, {"entries", std::move(entries)}};
}

Json config_to_json(const JobConfig& cfg) {
  const JobParams& p = cfg.params;
  Json params{{"epsilon", p.epsilon},
              {"eta", p.eta},
              {"grid_levels", p.grid_levels},
              {"grid_max_angles", p.grid_max_angles},
              {"n_r", p.n_r},
              {"n_theta", p.n_theta ? Json(*p.n_theta) : Json(nullptr)},
              {"k_list", p.k_list},
              {"dyadic_depth", p.dyadic_depth},
              {"dyadic_order", p.dyadic_order},
              {"budget", p.budget},
              {"bound_cap", p.bound_cap},
              {"cz_threshold", p.cz_threshold ? Json(*p.cz_threshold) : Json(nullptr)},
              {"revholder_epsilon", p.revholder_epsilon ? Json(*p.revholder_epsilon) : Json(nullptr)},
              {"revholder_c_max", p.revholder_c_max},
              {"criteria", p.criteria}};
  Json out = Json::object();
  if (cfg.f) out["F"] = symbol_to_json(*cfg.f);
  if (cfg.g) out["G"] = symbol_to_json(*cfg.g);
  out["params"] = std::move(params);
  if (cfg.sweep) out["sweep"] = Json{{"dF", symbol_to_json(cfg.sweep->delta_f)}, {"s", cfg.sweep->s}};
  out["jobs"] = cfg.jobs ? Json(*cfg.jobs) : Json(nullptr);
  return out;
}

std::size_t symbol_degree(const JobConfig& cfg) {
  std::size_t d = 0;
  if (cfg.f) d = std::max(d, cfg.f->degree());
  if (cfg.g) d = std::max(d, cfg.g->degree());
  if (cfg.sweep) d = std::max(d, cfg.sweep->delta_f.degree());
  return d;
}

QuadratureRule quadrature_rule(const JobConfig& cfg) {
  const WGrid grid(cfg.params.grid_levels, cfg.params.grid_max_angles);
  const std::size_t n_theta =
      cfg.params.n_theta.value_or(berezin_rule_for(symbol_degree(cfg), grid.rings().back().radius).n_theta());
  return QuadratureRule(cfg.params.n_r, n_theta);
}

ConditionParams condition_params(const JobConfig& cfg) {
  ConditionParams p(cfg.params.epsilon, WGrid(cfg.params.grid_levels, cfg.params.grid_max_angles), quadrature_rule(cfg),
                    cfg.params.eta);
  p.budget = cfg.params.budget;
  p.bound_cap = cfg.params.bound_cap;
  p.jobs = cfg.jobs.value_or(0);
  return p;
}

DyadicRule dyadic_rule(const JobConfig& cfg) { return DyadicRule(cfg.params.dyadic_order, cfg.params.dyadic_order); }

}  // namespace bergtoep
