#include "mcflab/config.hpp"

#include <json.hpp>

#include "mcflab/numeric.hpp"
#include "mcflab/version.hpp"

namespace mcflab {

namespace {

using Json = nlohmann::ordered_json;

Json arr3(const std::array<double, 3>& a) {
  return Json::array({a[0], a[1], a[2]});
}

std::array<double, 3> to_arr3(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 3)
    throw Error(std::string("config: ") + what + " must be a 3-array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::string flow_mode_name(FlowMode m) {
  return m == FlowMode::Mcf ? "mcf" : "rescaled";
}
FlowMode flow_mode_from(const std::string& s) {
  if (s == "mcf") return FlowMode::Mcf;
  if (s == "rescaled") return FlowMode::Rescaled;
  throw Error("config: unknown flow mode '" + s + "'");
}
std::string stepper_name(Stepper s) {
  return s == Stepper::Explicit ? "explicit" : "semi_implicit";
}
Stepper stepper_from(const std::string& s) {
  if (s == "explicit") return Stepper::Explicit;
  if (s == "semi_implicit") return Stepper::SemiImplicit;
  throw Error("config: unknown stepper '" + s + "'");
}
std::string rule_name(QuadratureRule r) {
  return r == QuadratureRule::Gauss3 ? "gauss3" : "centroid1";
}
QuadratureRule rule_from(const std::string& s) {
  if (s == "gauss3") return QuadratureRule::Gauss3;
  if (s == "centroid1") return QuadratureRule::Centroid1;
  throw Error("config: unknown quadrature rule '" + s + "'");
}

template <typename T>
void get_if(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string ExperimentConfig::to_json_string() const {
  Json j;
  j["command"] = command;
  j["surface"] = Json{{"kind", gen.kind},
                      {"radius", gen.radius},
                      {"length", gen.length},
                      {"subdiv", gen.subdiv},
                      {"relax_iters", gen.relax_iters},
                      {"res", gen.res},
                      {"u_max", gen.u_max},
                      {"width", gen.width},
                      {"r_max", gen.r_max},
                      {"bowl_step", gen.bowl_step},
                      {"perturbation", gen.perturbation},
                      {"seed", gen.seed},
                      {"wavelength_min", gen.wavelength_min},
                      {"wavelength_max", gen.wavelength_max}};
  j["input"] = input;
  j["analytic"] = analytic;
  j["plane_normal"] = arr3(plane_normal);
  j["plane_offset"] = plane_offset;
  j["grid"] = grid;
  j["identity"] = identity;
  j["residual"] = residual;
  j["audit_kind"] = audit_kind;
  j["R"] = R;
  j["delta"] = delta;
  j["rho"] = rho;
  j["V"] = arr3(V);
  j["x0"] = arr3(x0);
  j["R_sweep"] = R_sweep;
  j["user_C"] = user_C;
  j["collar"] = collar;
  j["h_floor"] = h_floor;
  j["experimental"] = experimental;
  j["flow"] = Json{{"mode", flow_mode_name(flow.mode)},
                   {"stepper", stepper_name(flow.stepper)},
                   {"dt", flow.dt},
                   {"dt_courant", flow.dt_courant},
                   {"max_steps", flow.max_steps},
                   {"stop_residual_linf", flow.stop_residual_linf},
                   {"stop_displacement", flow.stop_displacement},
                   {"monitor_every", flow.monitor_every},
                   {"snapshot_every", flow.snapshot_every},
                   {"quality_floor", flow.quality_floor},
                   {"collar", flow.collar}};
  j["search"] = Json{{"t0_min", search.t0_min},
                     {"t0_max", search.t0_max},
                     {"t0_grid", search.t0_grid},
                     {"starts", search.starts},
                     {"max_iterations", search.max_iterations},
                     {"simplex_tol", search.simplex_tol},
                     {"rule", rule_name(search.rule)}};
  j["plot_kind"] = plot_kind;
  j["plot_inputs"] = plot_inputs;
  j["output"] = output;
  j["outdir"] = outdir;
  j["formats"] = formats;
  j["mesh_precision"] = mesh_precision;
  j["strict"] = strict;
  return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("config: JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw Error("config: top level must be an object");
  ExperimentConfig c;
  get_if(j, "command", c.command);
  if (j.contains("surface")) {
    const Json& s = j.at("surface");
    get_if(s, "kind", c.gen.kind);
    get_if(s, "radius", c.gen.radius);
    get_if(s, "length", c.gen.length);
    get_if(s, "subdiv", c.gen.subdiv);
    get_if(s, "relax_iters", c.gen.relax_iters);
    get_if(s, "res", c.gen.res);
    get_if(s, "u_max", c.gen.u_max);
    get_if(s, "width", c.gen.width);
    get_if(s, "r_max", c.gen.r_max);
    get_if(s, "bowl_step", c.gen.bowl_step);
    get_if(s, "perturbation", c.gen.perturbation);
    get_if(s, "seed", c.gen.seed);
    get_if(s, "wavelength_min", c.gen.wavelength_min);
    get_if(s, "wavelength_max", c.gen.wavelength_max);
  }
  get_if(j, "input", c.input);
  get_if(j, "analytic", c.analytic);
  if (j.contains("plane_normal"))
    c.plane_normal = to_arr3(j.at("plane_normal"), "plane_normal");
  get_if(j, "plane_offset", c.plane_offset);
  get_if(j, "grid", c.grid);
  get_if(j, "identity", c.identity);
  get_if(j, "residual", c.residual);
  get_if(j, "audit_kind", c.audit_kind);
  get_if(j, "R", c.R);
  get_if(j, "delta", c.delta);
  get_if(j, "rho", c.rho);
  if (j.contains("V")) c.V = to_arr3(j.at("V"), "V");
  if (j.contains("x0")) c.x0 = to_arr3(j.at("x0"), "x0");
  get_if(j, "R_sweep", c.R_sweep);
  get_if(j, "user_C", c.user_C);
  get_if(j, "collar", c.collar);
  get_if(j, "h_floor", c.h_floor);
  get_if(j, "experimental", c.experimental);
  if (j.contains("flow")) {
    const Json& f = j.at("flow");
    std::string mode = flow_mode_name(c.flow.mode),
                stepper = stepper_name(c.flow.stepper);
    get_if(f, "mode", mode);
    get_if(f, "stepper", stepper);
    c.flow.mode = flow_mode_from(mode);
    c.flow.stepper = stepper_from(stepper);
    get_if(f, "dt", c.flow.dt);
    get_if(f, "dt_courant", c.flow.dt_courant);
    get_if(f, "max_steps", c.flow.max_steps);
    get_if(f, "stop_residual_linf", c.flow.stop_residual_linf);
    get_if(f, "stop_displacement", c.flow.stop_displacement);
    get_if(f, "monitor_every", c.flow.monitor_every);
    get_if(f, "snapshot_every", c.flow.snapshot_every);
    get_if(f, "quality_floor", c.flow.quality_floor);
    get_if(f, "collar", c.flow.collar);
  }
  if (j.contains("search")) {
    const Json& s = j.at("search");
    get_if(s, "t0_min", c.search.t0_min);
    get_if(s, "t0_max", c.search.t0_max);
    get_if(s, "t0_grid", c.search.t0_grid);
    get_if(s, "starts", c.search.starts);
    get_if(s, "max_iterations", c.search.max_iterations);
    get_if(s, "simplex_tol", c.search.simplex_tol);
    std::string rule = rule_name(c.search.rule);
    get_if(s, "rule", rule);
    c.search.rule = rule_from(rule);
  }
  get_if(j, "plot_kind", c.plot_kind);
  get_if(j, "plot_inputs", c.plot_inputs);
  get_if(j, "output", c.output);
  get_if(j, "outdir", c.outdir);
  get_if(j, "formats", c.formats);
  get_if(j, "mesh_precision", c.mesh_precision);
  get_if(j, "strict", c.strict);
  return c;
}

std::string manifest_json(const ExperimentConfig& config,
                          const std::vector<std::string>& outputs,
                          const std::string& timestamp) {
  Json j;
  j["tool"] = "mcflab";
  j["version"] = kVersion;
  j["command"] = config.command;
  j["config"] = Json::parse(config.to_json_string());
  j["outputs"] = outputs;
  j["timestamp"] = timestamp;
  return j.dump(2) + "\n";
}

}  // namespace mcflab
