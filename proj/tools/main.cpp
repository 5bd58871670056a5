#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "shapeopt/csv_io.hpp"
#include "shapeopt/errors.hpp"
#include "shapeopt/run_config.hpp"

namespace fs = std::filesystem;
using namespace shapeopt;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitMesh = 4;

struct CliOpts {
  std::string config_path;
  std::string out_dir;  // overrides config when set
  int workers = 1;
  long seed = -1;
};

RunConfig load(const CliOpts& o) {
  RunConfig cfg = load_config(o.config_path);
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
  return cfg;
}

SurfaceCurve initial_circle(const RunConfig& cfg) {
  return make_circle(cfg.radius, cfg.n);
}

int cmd_solve(const CliOpts& o) {
  RunConfig cfg = load(o);
  const std::uint64_t h = config_hash(cfg);
  fs::create_directories(cfg.out_dir);

  const SurfaceCurve circle = initial_circle(cfg);
  const OGridMesh mesh = build_ogrid(circle, cfg.n_rings, cfg.r_far, cfg.stretch);
  const FlowConfig fc = cfg.flow_config();
  const GradientEval g = evaluate_gradient(mesh, fc);

  write_flow_csv(cfg.out_dir + "/flow.csv", mesh, g.flow, h);
  FlowState adj_as_flow{g.adj.lambda, g.adj.lambda_p, g.adj.residual_norm};
  write_flow_csv(cfg.out_dir + "/adjoint.csv", mesh, adj_as_flow, h);
  write_field_csv(cfg.out_dir + "/gradient.csv", circle, g.df, "df", h);
  std::printf("drag = %.17g\n", g.drag_value);
  std::printf("reynolds = %.6g\n", fc.reynolds(2.0 * cfg.radius));
  return 0;
}

int cmd_symbol_verify(const CliOpts& o) {
  RunConfig cfg = load(o);
  const std::uint64_t h = config_hash(cfg);
  fs::create_directories(cfg.out_dir);

  const SurfaceCurve circle = initial_circle(cfg);
  const OGridMesh mesh = build_ogrid(circle, cfg.n_rings, cfg.r_far, cfg.stretch);

  std::vector<double> stations(static_cast<std::size_t>(cfg.num_stations));
  for (int m = 0; m < cfg.num_stations; ++m)
    stations[static_cast<std::size_t>(m)] =
        circle.perimeter * static_cast<double>(m) / cfg.num_stations;

  const SymbolReport report = beta_sweep(mesh, cfg.flow_config(), cfg.omegas,
                                         stations, cfg.fd_eps * cfg.radius);
  write_symbol_report_csv(cfg.out_dir + "/symbol_report.csv", report, circle, h);
  std::size_t failed = 0;
  for (std::size_t i = 0; i < report.probes.size(); ++i) {
    const ProbeResult& pr = report.probes[i];
    if (!pr.ok) {
      ++failed;
      std::fprintf(stderr, "probe omega=%g failed: %s\n", pr.omega, pr.error.c_str());
      continue;
    }
    char name[64];
    std::snprintf(name, sizeof name, "/probe_%03zu.csv", i);
    write_probe_csv(cfg.out_dir + name, circle, pr, h);
  }
  if (!report.probes.empty() && failed == report.probes.size()) return kExitSolver;
  return 0;
}

void write_run_outputs(const RunConfig& cfg, const std::string& tag,
                       const OptimizationHistory& hist, std::uint64_t h) {
  write_history_csv(cfg.out_dir + "/history_" + tag + ".csv", hist, h);
  fs::create_directories(cfg.out_dir + "/designs_" + tag);
  for (std::size_t i = 0; i < hist.designs.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "/iter_%04zu.csv", i);
    write_surface_csv(cfg.out_dir + "/designs_" + tag + name, hist.designs[i], h);
  }
  if (!hist.epsilons.empty()) {
    fs::create_directories(cfg.out_dir + "/epsilons_" + tag);
    for (std::size_t i = 0; i < hist.epsilons.size(); ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "/iter_%04zu.csv", i);
      write_field_csv(cfg.out_dir + "/epsilons_" + tag + name, hist.designs.front(),
                      hist.epsilons[i], "epsilon", h);
    }
  }
  if (hist.halted_on_failure)
    std::fprintf(stderr, "%s run halted: %s\n", tag.c_str(),
                 hist.failure_reason.c_str());
}

int cmd_optimize(const CliOpts& o) {
  RunConfig cfg = load(o);
  const std::uint64_t h = config_hash(cfg);
  fs::create_directories(cfg.out_dir);
  const SurfaceCurve circle = initial_circle(cfg);
  const FlowConfig fc = cfg.flow_config();

  if (cfg.method != "compare") {
    OptimizationHistory hist = run(circle, fc, cfg.opt_config());
    write_run_outputs(cfg, cfg.method, hist, h);
    return 0;
  }

  // compare: local vs global with matched first-step magnitudes
  OptimizationConfig local_cfg = cfg.opt_config();
  local_cfg.method = Method::local;
  OptimizationConfig global_cfg = local_cfg;
  global_cfg.method = Method::global;

  // match on the exact surface the runs start from (run() re-parametrizes)
  const SurfaceCurve init = reparametrize_uniform(circle);
  const OGridMesh mesh = build_ogrid(init, cfg.n_rings, cfg.r_far, cfg.stretch);
  const GradientEval g = evaluate_gradient(mesh, fc);
  const SymbolCoefficients symbols = analytic_betas(mesh, g.flow, g.adj, fc);
  SurfaceField p_local = search_direction(Method::local, g.df, symbols, local_cfg);
  SurfaceField p_global = search_direction(Method::global, g.df, symbols, global_cfg);
  const std::vector<double> w = trapezoid_weights(mesh.surface.seg_len);
  for (std::size_t j = 0; j < w.size(); ++j) {
    p_local[j] *= w[j];
    p_global[j] *= w[j];
  }
  p_local = volume_project(p_local, mesh.surface);
  p_global = volume_project(p_global, mesh.surface);
  global_cfg.gamma = match_first_step(p_local, p_global, local_cfg.gamma);
  std::printf("gamma_local = %.17g\ngamma_global = %.17g\n", local_cfg.gamma,
              global_cfg.gamma);

  OptimizationHistory hl = run(circle, fc, local_cfg);
  write_run_outputs(cfg, "local", hl, h);
  OptimizationHistory hg = run(circle, fc, global_cfg);
  write_run_outputs(cfg, "global", hg, h);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D Stokes drag shape optimization"};
  app.require_subcommand(1);
  CliOpts opts;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "INI config file")->required();
    sub->add_option("--out", opts.out_dir, "output directory override");
    sub->add_option("--workers", opts.workers, "worker count for probes");
    sub->add_option("--seed", opts.seed, "RNG seed override");
  };
  CLI::App* solve = app.add_subcommand("solve", "primal+adjoint solve and gradient");
  CLI::App* symv = app.add_subcommand("symbol-verify", "FD Hessian symbol sweep");
  CLI::App* opt = app.add_subcommand("optimize", "run the design loop");
  add_common(solve);
  add_common(symv);
  add_common(opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(opts);
    if (symv->parsed()) return cmd_symbol_verify(opts);
    return cmd_optimize(opts);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const MeshError& e) {
    std::fprintf(stderr, "mesh error: %s\n", e.what());
    return kExitMesh;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
