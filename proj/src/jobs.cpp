#include "bergtoep/jobs.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bergtoep/berezin.hpp"
#include "bergtoep/conditions.hpp"
#include "bergtoep/dyadic.hpp"
#include "bergtoep/errors.hpp"
#include "bergtoep/parallel.hpp"
#include "bergtoep/verify.hpp"

namespace bergtoep {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json error_json(const Error& e) { return Json{{"code", to_string(e.code())}, {"message", e.what()}}; }

Json extremum_json(const std::optional<GridExtremum>& g) {
  if (!g) return nullptr;
  Json profile = Json::array();
  for (const auto& r : g->profile) profile.push_back(Json{{"radius", r.radius}, {"value", r.value}});
  return Json{{"value", g->value}, {"at", Json::array({g->at.real(), g->at.imag()})}, {"profile", std::move(profile)}};
}

Json rect_json(const DyadicRectangle& q) { return Json{{"j", q.j}, {"k", q.k}, {"l", q.l}}; }

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RangeError(path.string() + ": cannot write report");
  out << text;
}

void write_json(const fs::path& out, const std::string& command, const Json& body) {
  write_file(out / (command + ".json"), body.dump(2) + "\n");
}

// CSV reports carry the resolved config (and any error) in leading comment lines.
class CsvReport {
 public:
  CsvReport(const JobConfig& cfg) { os_ << "# config " << config_to_json(cfg).dump() << "\n"; }

  void comment(const std::string& key, const std::string& value) { os_ << "# " << key << " " << value << "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << "\n";
  }
  void save(const fs::path& out, const std::string& command) const { write_file(out / (command + ".csv"), os_.str()); }

 private:
  std::ostringstream os_;
};

// Rectangles up to the dyadic depth times nodes per rectangle.
void check_dyadic_budget(const JobConfig& cfg) {
  const double rects = (std::pow(4.0, cfg.params.dyadic_depth + 1) - 1.0) / 3.0;
  const double order = static_cast<double>(cfg.params.dyadic_order);
  const double cost = rects * order * order;
  const double budget = effective_budget(cfg.params.budget);
  if (cost > budget)
    throw ComputeBudgetError("dyadic depth " + std::to_string(cfg.params.dyadic_depth) + " needs " + num(cost) +
                             " node evaluations, budget is " + num(budget));
}

const PolyMatrixSymbol& need_f(const JobConfig& cfg) {
  if (!cfg.f) throw ParseError("F: required by this command");
  return *cfg.f;
}

Json report_json(const ConditionReport& r) {
  Json errors = Json::object();
  for (const auto& [k, v] : r.errors) errors[k] = v;
  Json norms = Json::array();
  for (const auto& [k, v] : r.truncated_norms) norms.push_back(Json{{"K", k}, {"norm", v}});
  return Json{{"epsilon", r.epsilon},
              {"eta", r.eta},
              {"necessary_sup", extremum_json(r.necessary)},
              {"sufficient_sup", extremum_json(r.sufficient)},
              {"invertibility_floor", extremum_json(r.floor)},
              {"truncated_norms", std::move(norms)},
              {"flags",
               {{"necessary_holds", r.necessary_holds},
                {"sufficient_holds", r.sufficient_holds},
                {"floor_positive", r.floor_positive},
                {"invertible", r.invertible}}},
              {"errors", std::move(errors)}};
}

int report_exit(const ConditionReport& r) {
  int code = kExitOk;
  for (const auto& [k, v] : r.errors)
    code = std::max(code, v.rfind(to_string(ErrorCode::ComputeBudget), 0) == 0 ? int{kExitBudget} : int{kExitValidation});
  return code;
}

int run_classify(const JobConfig& cfg, const fs::path& out, std::ostream& log) {
  const ConditionReport r = classify(need_f(cfg), *cfg.g, condition_params(cfg), cfg.params.k_list);
  write_json(out, "classify", Json{{"command", "classify"}, {"config", config_to_json(cfg)}, {"report", report_json(r)}});
  log << "classify: necessary " << (r.necessary_holds ? "holds" : "fails") << ", sufficient "
      << (r.sufficient_holds ? "holds" : "fails") << ", floor " << (r.floor_positive ? "positive" : "not positive") << "\n";
  return report_exit(r);
}

int run_berezin(const JobConfig& cfg, const fs::path& out, std::ostream& log) {
  const PolyMatrixSymbol& f = need_f(cfg);
  const WGrid grid(cfg.params.grid_levels, cfg.params.grid_max_angles);
  const auto& pts = grid.points();
  std::vector<HermitianMatrix> b(pts.size());
  parallel_for(pts.size(), cfg.jobs.value_or(0), [&](std::size_t i) { b[i] = berezin_gram(f, pts[i]); });

  CsvReport csv(cfg);
  std::vector<std::string> header{"w_re", "w_im"};
  const auto n = static_cast<Eigen::Index>(f.dim());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::string e = "b_" + std::to_string(i) + "_" + std::to_string(j);
      header.push_back(e + "_re");
      header.push_back(e + "_im");
    }
  csv.row(header);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    std::vector<std::string> row{num(pts[p].real()), num(pts[p].imag())};
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        row.push_back(num(b[p].matrix()(i, j).real()));
        row.push_back(num(b[p].matrix()(i, j).imag()));
      }
    csv.row(row);
  }
  csv.save(out, "berezin");
  log << "berezin: " << pts.size() << " grid points\n";
  return kExitOk;
}

int run_a2(const JobConfig& cfg, const fs::path& out, std::ostream& log) {
  Json body{{"command", "a2"}, {"config", config_to_json(cfg)}};
  try {
    check_dyadic_budget(cfg);
    const A2Result r = a2_constant(need_f(cfg), cfg.params.dyadic_depth, dyadic_rule(cfg));
    body["result"] = Json{{"constant", r.constant}, {"worst", rect_json(r.worst)}, {"max_level", cfg.params.dyadic_depth}};
    write_json(out, "a2", body);
    log << "a2: constant " << num(r.constant) << "\n";
    return kExitOk;
  } catch (const Error& e) {
    body["error"] = error_json(e);
    write_json(out, "a2", body);
    log << "a2: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int run_cz(const JobConfig& cfg, const fs::path& out, std::ostream& log) {
  const PolyMatrixSymbol f = need_f(cfg);
  const DyadicRule rule = dyadic_rule(cfg);
  const ScalarField field = [f](Cx z) { return gram_at(f, z).trace(); };
  const double t = cfg.params.cz_threshold.value_or(rect_average(field, DyadicRectangle{0, 1, 1}, rule));
  CsvReport csv(cfg);
  csv.comment("threshold", num(t));
  CZDecomposition cz;
  int code = kExitOk;
  try {
    check_dyadic_budget(cfg);
    cz = cz_decompose(field, t, cfg.params.dyadic_depth, rule);
  } catch (const DepthExhaustedError& e) {
    cz = e.partial();
    csv.comment("error", e.what());
    code = exit_code_for(e);
  } catch (const Error& e) {
    csv.comment("error", e.what());
    csv.save(out, "cz");
    log << "cz: " << e.what() << "\n";
    return exit_code_for(e);
  }
  csv.comment("unresolved_area", num(cz.unresolved_area));
  csv.row({"j", "k", "l", "area", "average"});
  for (std::size_t i = 0; i < cz.selected.size(); ++i) {
    const DyadicRectangle& q = cz.selected[i];
    csv.row({std::to_string(q.j), std::to_string(q.k), std::to_string(q.l), num(rect_geometry(q).area),
             num(cz.averages[i])});
  }
  csv.save(out, "cz");
  log << "cz: " << cz.selected.size() << " rectangles above " << num(t) << "\n";
  return code;
}

Json certificate_json(const ReverseHolderCertificate& c) {
  return Json{{"epsilon", c.epsilon}, {"lhs", c.lhs}, {"rhs_base", c.rhs_base}, {"constant", c.constant}};
}

int run_revholder(const JobConfig& cfg, const fs::path& out, std::ostream& log) {
  const PolyMatrixSymbol& f = need_f(cfg);
  const QuadratureRule rule = quadrature_rule(cfg);
  Json body{{"command", "revholder"}, {"config", config_to_json(cfg)}};
  std::optional<ReverseHolderCertificate> c;
  if (cfg.params.revholder_epsilon)
    c = reverse_holder(f, *cfg.params.revholder_epsilon, rule);
  else
    c = reverse_holder_search(f, rule, cfg.params.revholder_c_max);
  body["certificate"] = c ? certificate_json(*c) : Json(nullptr);
  write_json(out, "revholder", body);
  if (c)
    log << "revholder: eps " << num(c->epsilon) << ", C " << num(c->constant) << "\n";
  else
    log << "revholder: no eps in the search grid keeps C below " << num(cfg.params.revholder_c_max) << "\n";
  return kExitOk;
}

int run_verify(const JobConfig& cfg, const fs::path& out, std::ostream& log) {
  const VerifyReport r = run_verify_suite(cfg.params.criteria, cfg.jobs.value_or(0));
  Json criteria = Json::array();
  for (const auto& c : r.criteria) {
    criteria.push_back(Json{{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"detail", c.detail}});
    log << (c.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << "): " << c.detail << "\n";
  }
  write_json(out, "verify",
             Json{{"command", "verify"},
                  {"config", config_to_json(cfg)},
                  {"derivative_constant", r.derivative_constant ? Json(*r.derivative_constant) : Json(nullptr)},
                  {"all_pass", r.all_pass()},
                  {"criteria", std::move(criteria)}});
  return r.all_pass() ? kExitOk : kExitVerifyFailed;
}

int run_sweep(const JobConfig& cfg, const fs::path& out, std::ostream& log) {
  const PolyMatrixSymbol& f = need_f(cfg);
  if (!cfg.sweep) throw ParseError("sweep: required by the sweep command");
  const SweepSpec& sw = *cfg.sweep;
  ConditionParams params = condition_params(cfg);
  params.jobs = 1;
  std::vector<ConditionReport> reports(sw.s.size());
  parallel_for(sw.s.size(), cfg.jobs.value_or(0), [&](std::size_t i) {
    reports[i] = classify(f + sw.delta_f * Cx(sw.s[i]), *cfg.g, params, cfg.params.k_list);
  });

  CsvReport csv(cfg);
  std::vector<std::string> header{"s", "necessary_sup", "sufficient_sup", "invertibility_floor"};
  for (std::size_t k : cfg.params.k_list) header.push_back("norm_K" + std::to_string(k));
  for (const char* h : {"necessary_holds", "sufficient_holds", "floor_positive", "invertible", "errors"}) header.push_back(h);
  csv.row(header);
  const auto value = [](const std::optional<GridExtremum>& g) { return g ? num(g->value) : std::string("nan"); };
  int code = kExitOk;
  for (std::size_t i = 0; i < sw.s.size(); ++i) {
    const ConditionReport& r = reports[i];
    std::vector<std::string> row{num(sw.s[i]), value(r.necessary), value(r.sufficient), value(r.floor)};
    for (std::size_t k = 0; k < cfg.params.k_list.size(); ++k)
      row.push_back(k < r.truncated_norms.size() ? num(r.truncated_norms[k].second) : "nan");
    for (bool b : {r.necessary_holds, r.sufficient_holds, r.floor_positive, r.invertible}) row.push_back(b ? "1" : "0");
    std::string errs;
    for (const auto& [field, msg] : r.errors) errs += (errs.empty() ? "" : ";") + field;
    row.push_back(errs);
    csv.row(row);
    code = std::max(code, report_exit(r));
  }
  csv.save(out, "sweep");
  log << "sweep: " << sw.s.size() << " members\n";
  return code;
}

}  // namespace

const std::vector<std::string>& job_commands() {
  static const std::vector<std::string> all{"classify", "berezin", "a2", "cz", "revholder", "verify", "sweep"};
  return all;
}

int exit_code_for(const Error& e) { return e.code() == ErrorCode::ComputeBudget ? kExitBudget : kExitValidation; }

int run_job(const std::string& command, const JobConfig& cfg, const fs::path& out, std::ostream& log) {
  if (cfg.jobs) set_default_jobs(*cfg.jobs);
  if (command == "classify") return run_classify(cfg, out, log);
  if (command == "berezin") return run_berezin(cfg, out, log);
  if (command == "a2") return run_a2(cfg, out, log);
  if (command == "cz") return run_cz(cfg, out, log);
  if (command == "revholder") return run_revholder(cfg, out, log);
  if (command == "verify") return run_verify(cfg, out, log);
  if (command == "sweep") return run_sweep(cfg, out, log);
  throw ParseError("command: unknown command " + command);
}

}  // namespace bergtoep
