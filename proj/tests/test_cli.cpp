#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "mcflab/cli.hpp"
#include "mcflab/report.hpp"
#include "mcflab/svg.hpp"

using namespace mcflab;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("cli");

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "mcflab_cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

bool file_contains(const fs::path& p, const std::string& needle) {
  return read_text_file(p.string()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("gen writes the mesh and a manifest") {
  const fs::path dir = fresh_dir("gen");
  const std::string out = (dir / "s.off").string();
  const int status = run_cli({"gen", "icosphere", "--radius", "2", "--subdiv",
                              "3", "-o", out, "--outdir", dir.string()});
  CHECK(status == 0);
  CHECK(fs::exists(out));
  CHECK(fs::exists(out + ".manifest.json"));
  CHECK(file_contains(out + ".manifest.json", "\"command\": \"gen\""));
  CHECK(file_contains(out, "642 1280 0"));
}

TEST_CASE("verify produces a JSON report with residual summaries") {
  const fs::path dir = fresh_dir("verify");
  const std::string mesh = (dir / "s.off").string();
  REQUIRE(run_cli({"gen", "icosphere", "--radius", "2", "--subdiv", "3", "-o",
                   mesh, "--outdir", dir.string()}) == 0);
  CHECK(run_cli({"verify", "--input", mesh, "--identity", "LH", "--outdir",
                 dir.string()}) == 0);
  CHECK(file_contains(dir / "report.json", "\"identity\": \"LH_eq_H\""));
  CHECK(file_contains(dir / "report.json", "\"linf\""));
  CHECK(fs::exists(dir / "residual.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("verify runs analytic catalog entries") {
  const fs::path dir = fresh_dir("verify_analytic");
  CHECK(run_cli({"verify", "--analytic", "cylinder:2,1", "--identity", "LH",
                 "--outdir", dir.string()}) == 0);
  CHECK(file_contains(dir / "report.json", "\"identity\": \"LH_eq_H\""));
  CHECK(run_cli({"verify", "--analytic", "grim_reaper", "--identity",
                 "lfrak_A2", "--outdir", dir.string()}) == 0);
  CHECK(file_contains(dir / "report.json", "2|gradA|^2 - |A|^4"));
}

TEST_CASE("audit thm1 against the exact tube and the strict negative control") {
  const fs::path dir = fresh_dir("audit");
  const std::string tube = (dir / "tube.off").string();
  REQUIRE(run_cli({"gen", "tube", "--radius", "1.41421356237", "--length",
                   "16", "--res", "24", "-o", tube, "--outdir",
                   dir.string()}) == 0);
  CHECK(run_cli({"audit", "thm1", "--input", tube, "--R", "8", "--delta",
                 "0.5", "--outdir", dir.string()}) == 0);
  CHECK(file_contains(dir / "audit.json", "\"hypothesis_ok\": true"));
  CHECK(fs::exists(dir / "ratio.csv"));

  const std::string disk = (dir / "disk.off").string();
  REQUIRE(run_cli({"gen", "disk", "--radius", "6", "--res", "20", "-o", disk,
                   "--outdir", dir.string()}) == 0);
  // hypothesis violated: plain run exits 0, --strict exits 1
  CHECK(run_cli({"audit", "thm1", "--input", disk, "--R", "4", "--delta",
                 "0.5", "--outdir", dir.string()}) == 0);
  CHECK(run_cli({"audit", "thm1", "--input", disk, "--R", "4", "--delta",
                 "0.5", "--strict", "--outdir", dir.string()}) == 1);
}

TEST_CASE("usage and operational errors exit with status 2") {
  const fs::path dir = fresh_dir("errors");
  CHECK(run_cli({"frobnicate"}) == 2);
  CHECK(run_cli({"gen", "icosphere", "--no-such-flag", "1"}) == 2);
  CHECK(run_cli({"verify", "--input", (dir / "missing.off").string()}) == 2);
  CHECK(run_cli({"verify", "--analytic", "klein_bottle"}) == 2);
  CHECK(run_cli({"audit", "thm1", "--analytic", "cylinder:2,1"}) == 2);
}

TEST_CASE("experiment configs round-trip losslessly through JSON") {
  ExperimentConfig c;
  c.command = "audit";
  c.audit_kind = "scan";
  c.R = 5.5;
  c.V = {0.1, 0.2, 0.3};
  c.R_sweep = {1, 2, 4};
  c.flow.mode = FlowMode::Mcf;
  c.flow.dt = 0.025;
  c.search.t0_grid = 9;
  c.gen.kind = "tube";
  c.gen.seed = 42;
  c.strict = true;
  const std::string j1 = c.to_json_string();
  const ExperimentConfig back = ExperimentConfig::from_json_string(j1);
  CHECK(back.to_json_string() == j1);
}

TEST_CASE("config file seeds the defaults, flags still override") {
  const fs::path dir = fresh_dir("config");
  ExperimentConfig c;
  c.command = "gen";
  c.gen.kind = "icosphere";
  c.gen.radius = 2.0;
  c.gen.subdiv = 2;
  write_text_file((dir / "exp.json").string(), c.to_json_string());
  const std::string out = (dir / "m.off").string();
  CHECK(run_cli({"--config", (dir / "exp.json").string(), "gen", "icosphere",
                 "--subdiv", "1", "-o", out, "--outdir", dir.string()}) == 0);
  CHECK(file_contains(out, "42 80 0"));  // subdiv 1 overrode the config's 2
}

TEST_CASE("outputs are byte-identical across reruns") {
  const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
  for (const auto& dir : {a, b}) {
    REQUIRE(run_cli({"gen", "icosphere", "--radius", "2", "--subdiv", "3",
                     "--perturb", "0.05", "--seed", "9", "-o",
                     (dir / "m.off").string(), "--outdir", dir.string()}) == 0);
    REQUIRE(run_cli({"entropy", "--input", (dir / "m.off").string(),
                     "--outdir", dir.string()}) == 0);
  }
  CHECK(read_text_file((a / "m.off").string()) ==
        read_text_file((b / "m.off").string()));
  CHECK(read_text_file((a / "entropy.json").string()) ==
        read_text_file((b / "entropy.json").string()));
  CHECK(read_text_file((a / "profile.csv").string()) ==
        read_text_file((b / "profile.csv").string()));
}

TEST_CASE("flow writes numbered snapshots, monitors, and a summary") {
  const fs::path dir = fresh_dir("flow");
  const std::string mesh = (dir / "s.off").string();
  REQUIRE(run_cli({"gen", "icosphere", "--radius", "2", "--subdiv", "2",
                   "--perturb", "0.08", "--seed", "4", "-o", mesh, "--outdir",
                   dir.string()}) == 0);
  CHECK(run_cli({"flow", "--input", mesh, "--dt", "0.01", "--steps", "20",
                 "--monitor-every", "5", "--snapshot-every", "10", "--outdir",
                 dir.string()}) == 0);
  CHECK(fs::exists(dir / "monitors.csv"));
  CHECK(fs::exists(dir / "flow.json"));
  CHECK(fs::exists(dir / "snapshot_000000.off"));
  CHECK(fs::exists(dir / "snapshot_000010.off"));
  CHECK(file_contains(dir / "flow.json", "\"stop_reason\""));

  // plot one SVG per monitor series
  CHECK(run_cli({"plot", "--kind", "series",
                 (dir / "monitors.csv").string(), "-o",
                 (dir / "plot").string(), "--outdir", dir.string()}) == 0);
  CHECK(fs::exists(dir / "plot_residual_linf.svg"));
  CHECK(fs::exists(dir / "plot_f01.svg"));
}

TEST_CASE("plot refine annotates the convergence order") {
  const fs::path dir = fresh_dir("plot_refine");
  for (int s : {2, 3}) {
    const fs::path sub = dir / ("v" + std::to_string(s));
    fs::create_directories(sub);
    const std::string mesh = (sub / "m.off").string();
    REQUIRE(run_cli({"gen", "icosphere", "--radius", "2", "--subdiv",
                     std::to_string(s), "-o", mesh, "--outdir",
                     sub.string()}) == 0);
    REQUIRE(run_cli({"verify", "--input", mesh, "--residual", "shrinker",
                     "--outdir", sub.string()}) == 0);
  }
  const std::string svg = (dir / "refine.svg").string();
  CHECK(run_cli({"plot", "--kind", "refine",
                 (dir / "v2" / "report.json").string(),
                 (dir / "v3" / "report.json").string(), "-o", svg,
                 "--outdir", dir.string()}) == 0);
  CHECK(file_contains(svg, "log-log slope"));

  // mixed report kinds: a CSV is not a refinement report
  CHECK(run_cli({"plot", "--kind", "refine",
                 (dir / "v2" / "report.json").string(),
                 (dir / "v2" / "residual.csv").string()}) == 2);
  // empty input set
  CHECK(run_cli({"plot", "--kind", "refine"}) == 2);
}

TEST_CASE("MCFLAB_OUT provides the default output directory") {
  const fs::path dir = fresh_dir("envout");
  setenv("MCFLAB_OUT", dir.string().c_str(), 1);
  ExperimentConfig c;
  c.command = "verify";
  c.analytic = "cylinder:2,2";
  c.identity = "LH";
  CHECK(dispatch(c) == 0);
  unsetenv("MCFLAB_OUT");
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("svg rendering is deterministic") {
  PlotSpec spec;
  spec.title = "t";
  spec.xlabel = "x";
  spec.ylabel = "y";
  PlotSeries s;
  s.label = "s";
  s.x = {1, 2, 3};
  s.y = {2.5, 1.5, 4.5};
  CHECK(render_line_plot(spec, {s}) == render_line_plot(spec, {s}));
  CHECK(render_line_plot(spec, {s}).find("<svg") == 0);
  CHECK_THROWS_AS(render_line_plot(spec, {}), const Error&);
}

TEST_SUITE_END();
