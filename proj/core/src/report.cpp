#include "mcflab/report.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mcflab {

namespace {

using Json = nlohmann::ordered_json;

double num(double x) { return round_sig(x); }

Json summary_json(const FieldSummary& s) {
  return Json{{"linf", num(s.linf)},
              {"l2", num(s.l2)},
              {"count", s.count},
              {"excluded", s.excluded},
              {"argmax", s.argmax}};
}

Json vec3_json(const Eigen::Vector3d& v) {
  return Json::array({num(v.x()), num(v.y()), num(v.z())});
}

Json vecx_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string to_json(const FieldSummary& s) { return dump(summary_json(s)); }

std::string residual_report_json(const ResidualField& r,
                                 const std::string& kind, double mesh_h) {
  Json j{{"report", "residual"},
         {"kind", kind},
         {"summary", summary_json(r.summary)}};
  if (mesh_h > 0) j["mesh_h"] = num(mesh_h);
  j["summary_linf"] = num(r.summary.linf);
  return dump(j);
}

std::string identity_report_json(const IdentityReport& r, double mesh_h) {
  Json j{{"report", "identity"},
         {"identity", r.name},
         {"summary", summary_json(r.residual.summary)},
         {"excluded", r.excluded}};
  if (mesh_h > 0) j["mesh_h"] = num(mesh_h);
  j["summary_linf"] = num(r.residual.summary.linf);
  if (!r.candidates.empty()) {
    Json cands = Json::array();
    for (const auto& c : r.candidates)
      cands.push_back(Json{{"rhs", c.rhs}, {"summary", summary_json(c.summary)}});
    j["candidates"] = cands;
    j["verdict"] = r.verdict;
  }
  return dump(j);
}

std::string tau_report_json(const TauField& t) {
  Json j{{"report", "tau"},
         {"grad_summary", summary_json(t.grad_summary)},
         {"excluded_below_floor", t.excluded_below_floor}};
  double tr_min = 0, tr_max = 0;
  bool first = true;
  for (int i = 0; i < t.trace.size(); ++i) {
    if (!t.defined[i]) continue;
    if (first || t.trace[i] < tr_min) tr_min = t.trace[i];
    if (first || t.trace[i] > tr_max) tr_max = t.trace[i];
    first = false;
  }
  j["trace_min"] = num(tr_min);
  j["trace_max"] = num(tr_max);
  if (t.equation_residual_linf)
    j["equation_residual_linf"] = num(*t.equation_residual_linf);
  return dump(j);
}

std::string analytic_tau_report_json(const AnalyticTauReport& t) {
  return dump(Json{{"report", "tau_analytic"},
                   {"eigenvalues", vecx_json(t.eigenvalues)},
                   {"trace", num(t.trace)},
                   {"grad_norm", num(t.grad_norm)},
                   {"equation_residual", num(t.equation_residual)}});
}

std::string cylinder_fit_json(const CylinderFit& f) {
  Json j{{"report", "cylinder_fit"},
         {"k", f.k},
         {"indeterminate", f.indeterminate},
         {"spectrum", vec3_json(f.spectrum)}};
  if (!f.indeterminate) {
    j["center"] = vec3_json(f.center);
    Json axis = Json::array();
    for (int r = 0; r < f.axis.rows(); ++r)
      axis.push_back(vec3_json(f.axis.row(r)));
    j["axis"] = axis;
    j["radius"] = num(f.radius);
    j["deviation"] = num(f.deviation);
    j["h_deviation"] = num(f.h_deviation);
  }
  return dump(j);
}

std::string entropy_report_json(const EntropyResult& e) {
  Json j{{"report", "entropy"},
         {"lambda", num(e.lambda)},
         {"argmax_x0", vecx_json(e.argmax.x0)},
         {"argmax_t0", num(e.argmax.t0)},
         {"evaluations", e.evaluations},
         {"starts", e.starts},
         {"t0_degenerate", e.t0_degenerate},
         {"truncation_tail", num(e.truncation_tail)},
         {"entropy_threshold_2", e.lambda < 2.0}};
  return dump(j);
}

std::string audit_report_json(const AuditReport& a) {
  Json j{{"report", "audit"},
         {"theorem", a.theorem},
         {"R", num(a.R)},
         {"delta", num(a.delta)},
         {"x0", vec3_json(a.x0)},
         {"V", vec3_json(a.V)},
         {"region_count", a.region_count},
         {"hypothesis_ok", a.hypothesis_ok},
         {"hypothesis_fraction", num(a.hypothesis_fraction)},
         {"hypothesis_violations", a.hypothesis_violations},
         {"empirical_C", num(a.empirical_C)},
         {"argmax", a.argmax},
         {"excluded", a.excluded}};
  if (a.precheck_residual_linf)
    j["precheck_residual_linf"] = num(*a.precheck_residual_linf);
  if (a.user_C) {
    j["user_C"] = num(*a.user_C);
    j["pass"] = *a.pass;
  }
  return dump(j);
}

std::string audit_sweep_json(const std::vector<AuditReport>& sweep) {
  Json arr = Json::array();
  for (const auto& a : sweep)
    arr.push_back(Json{{"R", num(a.R)},
                       {"empirical_C", num(a.empirical_C)},
                       {"hypothesis_ok", a.hypothesis_ok},
                       {"hypothesis_fraction", num(a.hypothesis_fraction)}});
  return dump(Json{{"report", "audit_sweep"}, {"points", arr}});
}

std::string cutoff_identity_json(const CutoffIdentityReport& c) {
  Json j{{"report", "cutoff_identity"},
         {"precheck_residual_linf", num(c.precheck_residual_linf)},
         {"precheck_ok", c.precheck_ok},
         {"empty_region", c.empty_region}};
  if (!c.empty_region) {
    j["residual"] = summary_json(c.residual);
    j["bound_margin_min"] = num(c.bound_margin_min);
    j["bound_holds"] = c.bound_holds;
  }
  return dump(j);
}

std::string cutoff_scan_json(const CutoffScan& s) {
  Json j{{"report", "cutoff_scan"},
         {"x0", vecx_json(s.x0_full)},
         {"rho", num(s.rho)},
         {"delta", num(s.delta)},
         {"v0", num(s.v0)},
         {"k", num(s.k)},
         {"hypothesis_violations", s.hypothesis_violations},
         {"y0", s.y0},
         {"y0_point", vecx_json(s.y0_point)},
         {"F_y0", num(s.F_y0)},
         {"R", num(s.R)},
         {"bound_ratio", num(s.bound_ratio)}};
  if (s.y0 >= 0) {
    j["h_at_y0"] = num(s.h[s.y0]);
    j["f_at_y0"] = num(s.f[s.y0]);
    j["v_at_y0"] = num(s.v[s.y0]);
  }
  if (s.v_equation_linf) j["v_equation_linf"] = num(*s.v_equation_linf);
  return dump(j);
}

std::string flow_summary_json(const FlowTrajectory& t) {
  Json j{{"report", "flow"},
         {"stop_reason", stop_reason_name(t.stop)},
         {"message", t.message},
         {"steps", t.series.empty() ? 0 : t.series.back().step},
         {"snapshots", static_cast<int>(t.snapshots.size())}};
  if (!t.series.empty()) {
    const auto& first = t.series.front();
    const auto& last = t.series.back();
    std::vector<double> f01;
    f01.reserve(t.series.size());
    for (const auto& row : t.series) f01.push_back(row.f01);
    j["initial"] = Json{{"residual_linf", num(first.residual_linf)},
                        {"f01", num(first.f01)}};
    j["final"] = Json{{"time", num(last.time)},
                      {"residual_linf", num(last.residual_linf)},
                      {"f01", num(last.f01)},
                      {"min_H", num(last.min_H)},
                      {"max_A", num(last.max_A)},
                      {"min_quality", num(last.min_quality)}};
    j["f01_upward_violation"] = num(monitor_entropy_violation(f01));
  }
  return dump(j);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

std::string csv_num(double x) { return format_sig(x, 12); }

}  // namespace

std::string field_csv(const Eigen::VectorXd& values,
                      const std::vector<char>& mask,
                      const std::string& value_header) {
  std::ostringstream os;
  os << "index," << value_header << ",interior\n";
  for (int i = 0; i < values.size(); ++i)
    os << i << "," << csv_num(values[i]) << ","
       << (mask.empty() ? 1 : static_cast<int>(mask[i] != 0)) << "\n";
  return os.str();
}

std::string monitor_csv(const std::vector<FlowMonitorRow>& rows) {
  std::ostringstream os;
  os << "step,time,residual_linf,residual_l2,f01,min_H,max_A,min_quality,"
        "displacement\n";
  for (const auto& r : rows)
    os << r.step << "," << csv_num(r.time) << "," << csv_num(r.residual_linf)
       << "," << csv_num(r.residual_l2) << "," << csv_num(r.f01) << ","
       << csv_num(r.min_H) << "," << csv_num(r.max_A) << ","
       << csv_num(r.min_quality) << "," << csv_num(r.displacement) << "\n";
  return os.str();
}

std::string profile_csv(const std::vector<std::pair<double, double>>& rows,
                        const std::string& xh, const std::string& yh) {
  std::ostringstream os;
  os << xh << "," << yh << "\n";
  for (const auto& [x, y] : rows)
    os << csv_num(x) << "," << csv_num(y) << "\n";
  return os.str();
}

std::string sweep_csv(const std::vector<AuditReport>& sweep) {
  std::ostringstream os;
  os << "R,empirical_C,hypothesis_ok,hypothesis_fraction\n";
  for (const auto& a : sweep)
    os << csv_num(a.R) << "," << csv_num(a.empirical_C) << ","
       << static_cast<int>(a.hypothesis_ok) << ","
       << csv_num(a.hypothesis_fraction) << "\n";
  return os.str();
}

std::string scan_csv(const CutoffScan& s) {
  std::ostringstream os;
  os << "index,mu,phi,v,h,f,F,admitted\n";
  for (int i = 0; i < s.F.size(); ++i)
    os << i << "," << csv_num(s.mu[i]) << "," << csv_num(s.phi[i]) << ","
       << csv_num(s.v[i]) << "," << csv_num(s.h[i]) << "," << csv_num(s.f[i])
       << "," << csv_num(s.F[i]) << "," << static_cast<int>(s.admitted[i] != 0)
       << "\n";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace mcflab
