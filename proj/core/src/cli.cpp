#include "mcflab/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "mcflab/audit.hpp"
#include "mcflab/entropy.hpp"
#include "mcflab/flow.hpp"
#include "mcflab/mesh_io.hpp"
#include "mcflab/meshgen.hpp"
#include "mcflab/report.hpp"
#include "mcflab/svg.hpp"

namespace mcflab {

namespace fs = std::filesystem;

namespace {

std::string timestamp_utc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Eigen::Vector3d to_vec3(const std::array<double, 3>& a) {
  return {a[0], a[1], a[2]};
}

struct SurfaceInput {
  std::optional<TriangleMesh> mesh;
  std::optional<AnalyticSurface> analytic;
};

AnalyticSurface parse_analytic(const ExperimentConfig& c) {
  const std::string& s = c.analytic;
  if (s.rfind("cylinder", 0) == 0) {
    const auto colon = s.find(':');
    int n = 2, k = 1;
    if (colon != std::string::npos) {
      const std::string rest = s.substr(colon + 1);
      const auto comma = rest.find(',');
      if (comma == std::string::npos)
        throw Error("analytic: expected cylinder:n,k");
      n = std::stoi(rest.substr(0, comma));
      k = std::stoi(rest.substr(comma + 1));
    }
    return AnalyticSurface::generalized_cylinder(n, k);
  }
  if (s == "plane") {
    Eigen::VectorXd normal(3);
    normal << c.plane_normal[0], c.plane_normal[1], c.plane_normal[2];
    return AnalyticSurface::hyperplane(normal, c.plane_offset);
  }
  if (s == "grim_reaper") return AnalyticSurface::grim_reaper_plane();
  if (s == "bowl")
    return AnalyticSurface::bowl_soliton(
        bowl_profile(c.gen.r_max, c.gen.bowl_step));
  throw Error("analytic: unknown selector '" + s +
              "' (cylinder:n,k | plane | grim_reaper | bowl)");
}

SurfaceInput load_surface(const ExperimentConfig& c) {
  SurfaceInput in;
  if (!c.input.empty())
    in.mesh = read_mesh(c.input);
  else if (!c.analytic.empty())
    in.analytic = parse_analytic(c);
  else
    in.mesh = gen_mesh(c.gen);
  return in;
}

bool wants(const ExperimentConfig& c, const std::string& fmt) {
  return c.formats.find(fmt) != std::string::npos;
}

Identity identity_from(const std::string& s) {
  if (s == "LH") return Identity::LH_eq_H;
  if (s == "LVn") return Identity::Lw_eq_halfw;
  if (s == "simons") return Identity::Simons_shrinker;
  if (s == "lfrak_w") return Identity::Lfrak_w_zero;
  if (s == "lfrak_A2") return Identity::Lfrak_A2;
  throw Error("verify: unknown identity '" + s +
              "' (LH | LVn | simons | lfrak_w | lfrak_A2)");
}

// -------------------------------------------------------------------------
// subcommand implementations; each returns the exit status and appends the
// files it wrote
// -------------------------------------------------------------------------

int cmd_gen(const ExperimentConfig& c, const fs::path& outdir,
            std::vector<std::string>& outputs) {
  const TriangleMesh mesh = gen_mesh(c.gen);
  const fs::path out =
      c.output.empty() ? outdir / "mesh.off" : fs::path(c.output);
  write_mesh(mesh, out.string(), c.mesh_precision);
  outputs.push_back(out.string());
  return 0;
}

int cmd_verify(const ExperimentConfig& c, const fs::path& outdir,
               std::vector<std::string>& outputs) {
  const SurfaceInput in = load_surface(c);
  std::string report, csv;
  int status = 0;

  if (!c.residual.empty()) {
    if (c.residual != "shrinker" && c.residual != "translator")
      throw Error("verify: residual must be shrinker or translator");
    ResidualField r;
    double mesh_h = 0;
    if (in.mesh) {
      const VertexGeometry geom = compute_vertex_geometry(*in.mesh);
      r = c.residual == "shrinker"
              ? shrinker_residual(*in.mesh, geom, c.collar)
              : translator_residual(*in.mesh, geom, to_vec3(c.V), c.collar);
      mesh_h = in.mesh->min_edge_length();
    } else {
      r = c.residual == "shrinker" ? shrinker_residual(*in.analytic, c.grid)
                                   : translator_residual(*in.analytic, c.grid);
    }
    report = residual_report_json(r, c.residual, mesh_h);
    if (wants(c, "csv")) csv = field_csv(r.values, r.interior, "residual");
  } else if (c.identity == "tau") {
    if (in.mesh) {
      const VertexGeometry geom = compute_vertex_geometry(*in.mesh);
      const TauField t =
          tau_field(*in.mesh, geom, c.h_floor, c.collar, c.experimental);
      report = tau_report_json(t);
      if (wants(c, "csv")) csv = field_csv(t.grad_norm, t.defined, "grad_tau");
    } else {
      const Eigen::VectorXd params =
          Eigen::VectorXd::Zero(in.analytic->dim());
      report = analytic_tau_report_json(tau_field(*in.analytic, params));
    }
  } else if (c.identity == "fit") {
    if (!in.mesh) throw Error("verify: cylinder fit needs a mesh input");
    const VertexGeometry geom = compute_vertex_geometry(*in.mesh);
    report = cylinder_fit_json(cylinder_fit(*in.mesh, geom, c.collar));
  } else {
    const Identity id = identity_from(c.identity);
    IdentityReport r;
    double mesh_h = 0;
    if (in.mesh) {
      const VertexGeometry geom = compute_vertex_geometry(*in.mesh);
      const DriftOperators ops = assemble_operators(*in.mesh, geom);
      r = verify_identity(*in.mesh, geom, ops, id, to_vec3(c.V), c.collar,
                          c.experimental);
      mesh_h = in.mesh->min_edge_length();
    } else {
      Eigen::VectorXd V;
      if (in.analytic->ambient_dim() == 3) {
        V = Eigen::VectorXd(3);
        V << c.V[0], c.V[1], c.V[2];
      }
      r = verify_identity(*in.analytic, id, V, c.grid);
    }
    report = identity_report_json(r, mesh_h);
    if (wants(c, "csv"))
      csv = field_csv(r.residual.values, r.residual.interior, "residual");
  }

  const fs::path rp = outdir / "report.json";
  write_text_file(rp.string(), report);
  outputs.push_back(rp.string());
  if (!csv.empty()) {
    const fs::path cp = outdir / "residual.csv";
    write_text_file(cp.string(), csv);
    outputs.push_back(cp.string());
  }
  return status;
}

int cmd_entropy(const ExperimentConfig& c, const fs::path& outdir,
                std::vector<std::string>& outputs) {
  const SurfaceInput in = load_surface(c);
  const EntropyResult res = in.mesh ? entropy(*in.mesh, c.search)
                                    : entropy(*in.analytic, c.search);
  const fs::path rp = outdir / "entropy.json";
  write_text_file(rp.string(), entropy_report_json(res));
  outputs.push_back(rp.string());
  if (wants(c, "csv")) {
    const fs::path pp = outdir / "profile.csv";
    write_text_file(pp.string(), profile_csv(res.t0_profile, "t0", "F"));
    outputs.push_back(pp.string());
  }
  if (wants(c, "svg")) {
    PlotSpec spec;
    spec.title = "F profile over t0 seeds";
    spec.xlabel = "t0";
    spec.ylabel = "F";
    spec.logx = true;
    PlotSeries s;
    s.label = "F(t0)";
    for (const auto& [t0, f] : res.t0_profile) {
      s.x.push_back(t0);
      s.y.push_back(f);
    }
    const fs::path sp = outdir / "profile.svg";
    write_text_file(sp.string(), render_line_plot(spec, {s}));
    outputs.push_back(sp.string());
  }
  return 0;
}

int cmd_flow(const ExperimentConfig& c, const fs::path& outdir,
             std::vector<std::string>& outputs) {
  const SurfaceInput in = load_surface(c);
  if (!in.mesh) throw Error("flow: needs a mesh input");
  const FlowTrajectory traj = run_flow(*in.mesh, c.flow);

  const fs::path mp = outdir / "monitors.csv";
  write_text_file(mp.string(), monitor_csv(traj.series));
  outputs.push_back(mp.string());
  const fs::path sp = outdir / "flow.json";
  write_text_file(sp.string(), flow_summary_json(traj));
  outputs.push_back(sp.string());
  for (size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[48];
    std::snprintf(name, sizeof(name), "snapshot_%06d.off",
                  traj.snapshot_steps[i]);
    const fs::path mpth = outdir / name;
    write_mesh(traj.snapshots[i], mpth.string(), c.mesh_precision);
    outputs.push_back(mpth.string());
  }
  return 0;
}

int cmd_audit(const ExperimentConfig& c, const fs::path& outdir,
              std::vector<std::string>& outputs) {
  const SurfaceInput in = load_surface(c);
  const std::optional<double> user_C =
      c.user_C > 0 ? std::optional<double>(c.user_C) : std::nullopt;
  bool hypothesis_violated = false;
  std::string report, csv, svg;
  std::string csv_name = "ratio.csv", svg_name = "ratio_hist.svg";

  auto finish_single = [&](const AuditReport& a) {
    report = audit_report_json(a);
    hypothesis_violated = !a.hypothesis_ok;
    if (wants(c, "csv")) csv = field_csv(a.ratio, a.ratio_region, "ratio");
    if (wants(c, "svg")) {
      std::vector<double> vals;
      for (int i = 0; i < a.ratio.size(); ++i)
        if (a.ratio_region[i]) vals.push_back(a.ratio[i]);
      if (!vals.empty())
        svg = render_histogram("ratio histogram: " + a.theorem, vals);
    }
  };

  if (c.audit_kind == "cutoff") {
    CutoffIdentityReport r;
    if (in.mesh) {
      const VertexGeometry geom = compute_vertex_geometry(*in.mesh);
      const DriftOperators ops = assemble_operators(*in.mesh, geom);
      r = verify_cutoff_identity(*in.mesh, geom, ops, to_vec3(c.x0), c.rho,
                                 c.collar);
    } else {
      Eigen::VectorXd x0 = Eigen::VectorXd::Zero(in.analytic->ambient_dim());
      if (x0.size() == 3) x0 = to_vec3(c.x0);
      r = verify_cutoff_identity(*in.analytic, x0, c.rho, c.grid);
    }
    report = cutoff_identity_json(r);
    hypothesis_violated = !r.precheck_ok;
  } else if (c.audit_kind == "scan") {
    CutoffScan s;
    if (in.mesh) {
      const VertexGeometry geom = compute_vertex_geometry(*in.mesh);
      s = scan_phi_f_max(*in.mesh, geom, to_vec3(c.x0), c.rho, c.delta,
                         c.collar);
    } else {
      Eigen::VectorXd x0 = Eigen::VectorXd::Zero(in.analytic->ambient_dim());
      if (x0.size() == 3) x0 = to_vec3(c.x0);
      s = scan_phi_f_max(*in.analytic, x0, c.rho, c.delta, c.grid);
    }
    report = cutoff_scan_json(s);
    hypothesis_violated = s.hypothesis_violations > 0;
    if (wants(c, "csv")) {
      csv = scan_csv(s);
      csv_name = "scan.csv";
    }
  } else {
    if (!in.mesh) throw Error("audit: '" + c.audit_kind + "' needs a mesh");
    const VertexGeometry geom = compute_vertex_geometry(*in.mesh);
    if (c.audit_kind == "thm1") {
      finish_single(audit_mean_convex_estimate(*in.mesh, geom, c.R, c.delta,
                                               c.collar, user_C));
    } else if (c.audit_kind == "graph") {
      finish_single(audit_graphical_estimate(*in.mesh, geom, to_vec3(c.V),
                                             c.R, c.delta, to_vec3(c.x0),
                                             c.collar, user_C));
    } else if (c.audit_kind == "growth") {
      finish_single(check_growth_bound(*in.mesh, geom, c.R, c.collar));
    } else if (c.audit_kind == "translator") {
      if (!c.R_sweep.empty()) {
        const auto sweep = audit_translator_sweep(
            *in.mesh, geom, to_vec3(c.V), c.R_sweep, c.delta, to_vec3(c.x0),
            c.collar);
        report = audit_sweep_json(sweep);
        for (const auto& a : sweep) hypothesis_violated |= !a.hypothesis_ok;
        if (wants(c, "csv")) {
          csv = sweep_csv(sweep);
          csv_name = "sweep.csv";
        }
        if (wants(c, "svg")) {
          PlotSpec spec;
          spec.title = "empirical C(R), translator estimate";
          spec.xlabel = "R";
          spec.ylabel = "C";
          PlotSeries s;
          s.label = "C(R)";
          for (const auto& a : sweep) {
            s.x.push_back(a.R);
            s.y.push_back(a.empirical_C);
          }
          svg = render_line_plot(spec, {s});
          svg_name = "sweep.svg";
        }
      } else {
        finish_single(audit_translator_estimate(*in.mesh, geom, to_vec3(c.V),
                                                c.R, c.delta, to_vec3(c.x0),
                                                c.collar, user_C));
      }
    } else {
      throw Error("audit: unknown kind '" + c.audit_kind +
                  "' (thm1 | graph | translator | cutoff | scan | growth)");
    }
  }

  const fs::path rp = outdir / "audit.json";
  write_text_file(rp.string(), report);
  outputs.push_back(rp.string());
  if (!csv.empty()) {
    const fs::path cp = outdir / csv_name;
    write_text_file(cp.string(), csv);
    outputs.push_back(cp.string());
  }
  if (!svg.empty()) {
    const fs::path sp = outdir / svg_name;
    write_text_file(sp.string(), svg);
    outputs.push_back(sp.string());
  }
  return (hypothesis_violated && c.strict) ? 1 : 0;
}

// --- plot helpers ---------------------------------------------------------

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

int cmd_plot(const ExperimentConfig& c, const fs::path& outdir,
             std::vector<std::string>& outputs) {
  if (c.plot_inputs.empty()) throw Error("plot: no input reports");

  if (c.plot_kind == "series") {
    if (c.plot_inputs.size() != 1)
      throw Error("plot series: expected one monitor CSV");
    const auto rows = parse_csv(read_text_file(c.plot_inputs[0]));
    if (rows.size() < 2 || rows[0].size() < 3 || rows[0][0] != "step")
      throw Error("plot series: not a flow monitor CSV");
    const auto& header = rows[0];
    const std::string prefix =
        c.output.empty() ? (outdir / "monitor").string() : c.output;
    for (size_t col = 2; col < header.size(); ++col) {
      PlotSeries s;
      s.label = header[col];
      for (size_t r = 1; r < rows.size(); ++r) {
        s.x.push_back(std::strtod(rows[r][1].c_str(), nullptr));
        s.y.push_back(std::strtod(rows[r][col].c_str(), nullptr));
      }
      PlotSpec spec;
      spec.title = header[col] + " along the flow";
      spec.xlabel = "time";
      spec.ylabel = header[col];
      const std::string path = prefix + "_" + header[col] + ".svg";
      write_text_file(path, render_line_plot(spec, {s}));
      outputs.push_back(path);
    }
    return 0;
  }

  if (c.plot_kind == "profile" || c.plot_kind == "sweep") {
    if (c.plot_inputs.size() != 1)
      throw Error("plot " + c.plot_kind + ": expected one CSV input");
    const auto rows = parse_csv(read_text_file(c.plot_inputs[0]));
    const bool profile = c.plot_kind == "profile";
    const std::string xh = profile ? "t0" : "R";
    if (rows.size() < 2 || rows[0].size() < 2 || rows[0][0] != xh)
      throw Error("plot " + c.plot_kind + ": wrong report kind (expected " +
                  xh + " column)");
    PlotSeries s;
    s.label = rows[0][1];
    for (size_t r = 1; r < rows.size(); ++r) {
      s.x.push_back(std::strtod(rows[r][0].c_str(), nullptr));
      s.y.push_back(std::strtod(rows[r][1].c_str(), nullptr));
    }
    PlotSpec spec;
    spec.title = profile ? "F profile over t0" : "empirical C(R)";
    spec.xlabel = xh;
    spec.ylabel = rows[0][1];
    spec.logx = profile;
    const fs::path out = c.output.empty()
                             ? outdir / (c.plot_kind + ".svg")
                             : fs::path(c.output);
    write_text_file(out.string(), render_line_plot(spec, {s}));
    outputs.push_back(out.string());
    return 0;
  }

  if (c.plot_kind == "refine") {
    if (c.plot_inputs.size() < 2)
      throw Error("plot refine: need at least two reports");
    PlotSeries s;
    s.label = "residual linf";
    for (const auto& path : c.plot_inputs) {
      const std::string text = read_text_file(path);
      // verify reports carry mesh_h and summary_linf at the top level
      const auto grab = [&](const std::string& key) -> double {
        const auto pos = text.find("\"" + key + "\"");
        if (pos == std::string::npos)
          throw Error("plot refine: '" + path +
                      "' is not a refinement report (mixed report kinds?)");
        const auto colon = text.find(':', pos);
        return std::strtod(text.c_str() + colon + 1, nullptr);
      };
      s.x.push_back(grab("mesh_h"));
      s.y.push_back(grab("summary_linf"));
    }
    PlotSpec spec;
    spec.title = "residual vs refinement";
    spec.xlabel = "mesh h";
    spec.ylabel = "residual linf";
    spec.logx = spec.logy = true;
    spec.annotate_slope = true;
    const fs::path out =
        c.output.empty() ? outdir / "refine.svg" : fs::path(c.output);
    write_text_file(out.string(), render_line_plot(spec, {s}));
    outputs.push_back(out.string());
    return 0;
  }

  throw Error("plot: unknown kind '" + c.plot_kind +
              "' (refine | profile | sweep | series)");
}

}  // namespace

int dispatch(const ExperimentConfig& config_in) {
  ExperimentConfig config = config_in;
  if (config.outdir.empty()) {
    const char* env = std::getenv("MCFLAB_OUT");
    config.outdir = env && *env ? env : ".";
  }
  const fs::path outdir(config.outdir);
  fs::create_directories(outdir);

  std::vector<std::string> outputs;
  int status = 0;
  if (config.command == "gen")
    status = cmd_gen(config, outdir, outputs);
  else if (config.command == "verify")
    status = cmd_verify(config, outdir, outputs);
  else if (config.command == "entropy")
    status = cmd_entropy(config, outdir, outputs);
  else if (config.command == "flow")
    status = cmd_flow(config, outdir, outputs);
  else if (config.command == "audit")
    status = cmd_audit(config, outdir, outputs);
  else if (config.command == "plot")
    status = cmd_plot(config, outdir, outputs);
  else
    throw Error("unknown command '" + config.command + "'");

  const fs::path manifest =
      config.command == "gen" && !config.output.empty()
          ? fs::path(config.output + ".manifest.json")
          : outdir / "manifest.json";
  write_text_file(manifest.string(),
                  manifest_json(config, outputs, timestamp_utc()));
  return status;
}

namespace {

void add_common(CLI::App* cmd, ExperimentConfig& c) {
  cmd->add_option("--outdir", c.outdir, "output directory (or $MCFLAB_OUT)");
  cmd->add_option("--formats", c.formats, "report formats: json,csv,svg");
  cmd->add_flag("--strict", c.strict, "exit 1 on hypothesis violation");
  cmd->add_option("--collar", c.collar, "boundary collar width");
}

void add_surface_source(CLI::App* cmd, ExperimentConfig& c) {
  cmd->add_option("--input", c.input, "mesh file (OFF/OBJ)");
  cmd->add_option("--analytic", c.analytic,
                  "catalog entry: cylinder:n,k | plane | grim_reaper | bowl");
  cmd->add_option("--plane-normal", c.plane_normal, "hyperplane normal")
      ->delimiter(',');
  cmd->add_option("--plane-offset", c.plane_offset, "hyperplane offset");
  cmd->add_option("--grid", c.grid, "analytic sample grid per axis");
  cmd->add_option("--r-max", c.gen.r_max, "bowl profile radius");
  cmd->add_option("--bowl-step", c.gen.bowl_step, "bowl integration step");
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  // --config seeds the defaults; explicit flags override it
  ExperimentConfig c;
  for (size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
    if (path.empty()) continue;
    try {
      c = ExperimentConfig::from_json_string(read_text_file(path));
    } catch (const Error& e) {
      std::cerr << "mcflab: " << e.what() << "\n";
      return 2;
    }
  }

  CLI::App app{"mcflab: numerical laboratory for shrinkers and translators of "
               "mean curvature flow"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON experiment config")
      ->expected(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a test surface mesh");
  std::string gen_kind = c.gen.kind;
  gen->add_option("kind", gen_kind,
                  "icosphere | tube | disk | grim_reaper | bowl");
  gen->add_option("--radius", c.gen.radius, "sphere/tube/disk radius");
  gen->add_option("--subdiv", c.gen.subdiv, "icosphere subdivision level");
  gen->add_option("--relax", c.gen.relax_iters, "tangential relaxation sweeps");
  gen->add_option("--length", c.gen.length, "tube length");
  gen->add_option("--res", c.gen.res, "angular/grid resolution");
  gen->add_option("--u-max", c.gen.u_max, "grim reaper |x1| extent");
  gen->add_option("--width", c.gen.width, "grim reaper x2 extent");
  gen->add_option("--perturb", c.gen.perturbation, "normal perturbation amplitude");
  gen->add_option("--seed", c.gen.seed, "perturbation seed");
  gen->add_option("--wavelength-min", c.gen.wavelength_min, "perturbation band");
  gen->add_option("--wavelength-max", c.gen.wavelength_max, "perturbation band");
  gen->add_option("--precision", c.mesh_precision, "printed significant digits");
  gen->add_option("-o,--output", c.output, "output mesh path (.off/.obj)");
  gen->add_option("--r-max", c.gen.r_max, "bowl cap radius");
  gen->add_option("--bowl-step", c.gen.bowl_step, "bowl integration step");
  add_common(gen, c);

  // verify
  auto* verify = app.add_subcommand("verify", "soliton residuals and identities");
  add_surface_source(verify, c);
  verify->add_option("--identity", c.identity,
                     "LH | LVn | simons | lfrak_w | lfrak_A2 | tau | fit");
  verify->add_option("--residual", c.residual, "shrinker | translator");
  verify->add_option("--V", c.V, "constant direction for w = <V,n>")
      ->delimiter(',');
  verify->add_option("--h-floor", c.h_floor, "H floor for tau");
  verify->add_flag("--experimental", c.experimental,
                   "enable noise-dominated mesh checks");
  add_common(verify, c);

  // entropy
  auto* ent = app.add_subcommand("entropy", "Gaussian entropy search");
  add_surface_source(ent, c);
  ent->add_option("--t0-min", c.search.t0_min, "t0 grid lower bound");
  ent->add_option("--t0-max", c.search.t0_max, "t0 grid upper bound");
  ent->add_option("--t0-grid", c.search.t0_grid, "log-spaced t0 seeds");
  ent->add_option("--starts", c.search.starts, "multi-start count");
  std::string rule =
      c.search.rule == QuadratureRule::Centroid1 ? "centroid1" : "gauss3";
  ent->add_option("--rule", rule, "quadrature: gauss3 | centroid1");
  add_common(ent, c);

  // flow
  auto* flow = app.add_subcommand("flow", "mesh evolution by (rescaled) MCF");
  add_surface_source(flow, c);
  std::string mode = c.flow.mode == FlowMode::Mcf ? "mcf" : "rescaled";
  std::string stepper =
      c.flow.stepper == Stepper::Explicit ? "explicit" : "semi_implicit";
  flow->add_option("--mode", mode, "mcf | rescaled");
  flow->add_option("--stepper", stepper, "explicit | semi_implicit");
  flow->add_option("--dt", c.flow.dt, "fixed time step (0: courant policy)");
  flow->add_option("--courant", c.flow.dt_courant, "dt = c * h_min^2");
  flow->add_option("--steps", c.flow.max_steps, "maximum steps");
  flow->add_option("--stop-residual", c.flow.stop_residual_linf,
                   "stop when residual linf drops below");
  flow->add_option("--stop-displacement", c.flow.stop_displacement,
                   "stop when max displacement drops below");
  flow->add_option("--monitor-every", c.flow.monitor_every, "monitor cadence");
  flow->add_option("--snapshot-every", c.flow.snapshot_every,
                   "snapshot cadence (0: first/last)");
  flow->add_option("--quality-floor", c.flow.quality_floor,
                   "abort below this face quality");
  add_common(flow, c);

  // audit
  auto* audit = app.add_subcommand("audit", "curvature-estimate audits");
  std::string audit_kind = c.audit_kind;
  audit->add_option("kind", audit_kind,
                    "thm1 | graph | translator | cutoff | scan | growth");
  add_surface_source(audit, c);
  audit->add_option("--R", c.R, "ball radius");
  audit->add_option("--delta", c.delta, "hypothesis lower bound");
  audit->add_option("--rho", c.rho, "cutoff radius");
  audit->add_option("--V", c.V, "hypothesis direction")->delimiter(',');
  audit->add_option("--x0", c.x0, "ball center")->delimiter(',');
  audit->add_option("--R-sweep", c.R_sweep, "R values for the C(R) sweep")
      ->delimiter(',');
  audit->add_option("--user-C", c.user_C, "pass/fail against this constant");
  add_common(audit, c);

  // plot
  auto* plot = app.add_subcommand("plot", "deterministic SVG plots of reports");
  plot->add_option("--kind", c.plot_kind, "refine | profile | sweep | series");
  plot->add_option("inputs", c.plot_inputs, "report files");
  plot->add_option("-o,--output", c.output, "output SVG path/prefix");
  add_common(plot, c);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  c.gen.kind = gen_kind;
  c.audit_kind = audit_kind;
  try {
    c.flow.mode = mode == "mcf" ? FlowMode::Mcf : FlowMode::Rescaled;
    c.flow.stepper =
        stepper == "explicit" ? Stepper::Explicit : Stepper::SemiImplicit;
    c.search.rule = rule == "centroid1" ? QuadratureRule::Centroid1
                                        : QuadratureRule::Gauss3;
    for (auto* sub : {gen, verify, ent, flow, audit, plot}) {
      if (sub->parsed()) {
        c.command = sub->get_name();
        break;
      }
    }
    return dispatch(c);
  } catch (const Error& e) {
    std::cerr << "mcflab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mcflab: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace mcflab
