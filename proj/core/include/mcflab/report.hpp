#pragma once

#include <string>
#include <vector>

#include "mcflab/audit.hpp"
#include "mcflab/entropy.hpp"
#include "mcflab/flow.hpp"
#include "mcflab/soliton.hpp"

namespace mcflab {

// JSON reports (ordered keys, numbers rounded to 12 significant digits) and
// CSV dumps. Same inputs give byte-identical strings; timestamps live only in
// the run manifest.

std::string to_json(const FieldSummary& s);
std::string residual_report_json(const ResidualField& r, const std::string& kind,
                                 double mesh_h = 0);
std::string identity_report_json(const IdentityReport& r, double mesh_h = 0);
std::string tau_report_json(const TauField& t);
std::string analytic_tau_report_json(const AnalyticTauReport& t);
std::string cylinder_fit_json(const CylinderFit& f);
std::string entropy_report_json(const EntropyResult& e);
std::string audit_report_json(const AuditReport& a);
std::string audit_sweep_json(const std::vector<AuditReport>& sweep);
std::string cutoff_identity_json(const CutoffIdentityReport& c);
std::string cutoff_scan_json(const CutoffScan& s);
std::string flow_summary_json(const FlowTrajectory& t);

// CSV
std::string field_csv(const Eigen::VectorXd& values,
                      const std::vector<char>& mask,
                      const std::string& value_header);
std::string monitor_csv(const std::vector<FlowMonitorRow>& rows);
std::string profile_csv(const std::vector<std::pair<double, double>>& rows,
                        const std::string& xh, const std::string& yh);
std::string sweep_csv(const std::vector<AuditReport>& sweep);
std::string scan_csv(const CutoffScan& s);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace mcflab
